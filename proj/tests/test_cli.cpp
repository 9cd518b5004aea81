#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
};

fs::path workdir() {
    static const fs::path d = [] {
        fs::path p = fs::temp_directory_path() / ("kmarc_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return d;
}

// Runs the CLI with stdout and stderr merged.
CliResult run(const std::string& args) {
    std::string cmd = std::string("\"") + KMARC_CLI_PATH + "\" --threads 1 " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
    int st = ::pclose(pipe);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string make(const std::string& name, const std::string& args) {
    fs::path p = workdir() / (name + ".json");
    CliResult r = run("construct " + args + " --out " + p.string());
    EXPECT_EQ(r.code, 0) << args << "\n" << r.out;
    return p.string();
}

}  // namespace

TEST(Cli, ConstructEachFamilyAndVerify) {
    std::vector<std::pair<std::string, std::string>> cases = {
        {"ls", "--family lunelli-sce"},
        {"km16", "--family km --q 16 --i 2"},
        {"km64ls", "--family km --q 256 --i 4 --opoly lunelli-sce"},
        {"q4", "--family q4 --q 16 --alpha 3 --beta 6"},
        {"q8", "--family q8 --q 32"},
        {"q16", "--family q16 --q 64"},
    };
    for (auto& [name, args] : cases) {
        std::string p = make(name, args);
        json j = json::parse(slurp(p));
        EXPECT_EQ(j.at("format"), "kmarc-certificate/1");
        EXPECT_TRUE(j.at("claims").contains("t"));
        CliResult v = run("verify " + p);
        EXPECT_EQ(v.code, 0) << v.out;
        EXPECT_NE(v.out.find(": OK"), std::string::npos);
    }
    std::string hyper = make("ls_base", "--family lunelli-sce");
    std::string km = make("km_base", "--family km --q 16 --i 2");
    for (auto [fam, base] : {std::pair{"gw-a", hyper}, {"gw-c", km}}) {
        std::string p = make(fam, std::string("--family ") + fam + " --base " + base + " --ext 2");
        CliResult v = run("verify " + p);
        EXPECT_EQ(v.code, 0) << fam << "\n" << v.out;
    }
    // Unmet preconditions are usage errors.
    CliResult b = run("construct --family gw-b --base " + hyper + " --ext 2");
    EXPECT_EQ(b.code, 2);
    EXPECT_NE(b.out.find("variant B"), std::string::npos) << b.out;
}

TEST(Cli, TamperedCertificateFailsWithWitness) {
    std::string p = make("tamper_src", "--family km --q 16 --i 2");
    json j = json::parse(slurp(p));
    j["points"].erase(j["points"].begin());
    fs::path bad = workdir() / "tampered.json";
    std::ofstream(bad) << j.dump();
    CliResult v = run("verify " + bad.string());
    EXPECT_EQ(v.code, 1);
    bool witness = v.out.find("meets the set in 1 points") != std::string::npos ||
                   v.out.find("meets the set in 3 points") != std::string::npos;
    EXPECT_TRUE(witness) << v.out;

    // Points intact but a claim altered.
    json k = json::parse(slurp(p));
    k["claims"]["t"] = 8;
    fs::path lie = workdir() / "lying.json";
    std::ofstream(lie) << k.dump();
    CliResult w = run("verify " + lie.string());
    EXPECT_EQ(w.code, 1);
    EXPECT_NE(w.out.find("FAIL"), std::string::npos);
}

TEST(Cli, NoAdmissibleTupleAtQ32) {
    CliResult r = run("construct --family q16 --q 32");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("no admissible tuple"), std::string::npos) << r.out;
}

TEST(Cli, AdmissibleListsClasses) {
    CliResult r = run("admissible 128 --json");
    ASSERT_EQ(r.code, 0) << r.out;
    json j = json::parse(r.out);
    ASSERT_EQ(j.size(), 2u);
    for (auto& t : j) EXPECT_EQ(t.size(), 4u);
    CliResult e = run("admissible 32 --json");
    ASSERT_EQ(e.code, 0);
    EXPECT_TRUE(json::parse(e.out).empty());
}

TEST(Cli, StabilizerOfLunelliSce) {
    std::string p = make("ls_stab", "--family lunelli-sce");
    CliResult r = run("stabilizer " + p + " --json");
    ASSERT_EQ(r.code, 0) << r.out;
    json j = json::parse(r.out);
    EXPECT_EQ(j.at("order"), 144);
    CliResult b = run("stabilizer " + p + " --budget 5");
    EXPECT_EQ(b.code, 3) << b.out;
}

TEST(Cli, EquivalenceVerdicts) {
    std::string ls = make("eq_ls", "--family lunelli-sce");
    std::string q8 = make("eq_q8", "--family q8 --q 16");
    std::string km = make("eq_km", "--family km --q 16 --i 2");
    CliResult a = run("equiv " + ls + " " + q8);
    EXPECT_EQ(a.code, 0) << a.out;
    EXPECT_NE(a.out.find("equivalent"), std::string::npos);
    CliResult b = run("equiv " + ls + " " + km);
    EXPECT_EQ(b.code, 1) << b.out;
    EXPECT_NE(b.out.find("inequivalent"), std::string::npos);
    CliResult c = run("equiv " + ls + " " + make("eq_q32", "--family q8 --q 32"));
    EXPECT_EQ(c.code, 2);
}

TEST(Cli, TranslationLine) {
    std::string p = make("tr_q4", "--family q4 --q 16 --alpha 2 --beta 2");
    CliResult r = run("translation " + p + " --line 1,0,0");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("translation line"), std::string::npos);
    CliResult bad = run("translation " + p + " --line 1,0");
    EXPECT_EQ(bad.code, 2);
}

TEST(Cli, ReportOverCorpusDirectory) {
    fs::path dir = workdir() / "corpus";
    CliResult c = run("corpus --out " + dir.string() + " --max-q 16");
    ASSERT_EQ(c.code, 0) << c.out;
    CliResult r = run("report " + dir.string() + " --json");
    ASSERT_EQ(r.code, 0) << r.out;
    json j = json::parse(r.out);
    ASSERT_FALSE(j.empty());
    for (auto& row : j) {
        EXPECT_LE(row.at("q").get<int>(), 16);
        if (row.at("translation").get<bool>()) EXPECT_TRUE(row.at("elation").get<bool>());
    }
    CliResult builtin = run("report --max-q 16 --json");
    ASSERT_EQ(builtin.code, 0);
    EXPECT_EQ(json::parse(builtin.out).size(), j.size());
}

TEST(Cli, ConstructIsDeterministic) {
    CliResult a = run("construct --family q8 --q 64");
    CliResult b = run("construct --family q8 --q 64");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    // File and stdout outputs differ only in the recorded command line.
    std::string p = make("rt", "--family q8 --q 64");
    json f = json::parse(slurp(p)), s = json::parse(a.out);
    f["provenance"].erase("command");
    s["provenance"].erase("command");
    EXPECT_EQ(f.dump(1), s.dump(1));
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("construct").code, 2);
    EXPECT_EQ(run("construct --family nope --q 16").code, 2);
    EXPECT_EQ(run("construct --family km --q 12 --i 1").code, 2);
    EXPECT_EQ(run("construct --family q4 --q 16 --alpha zz --beta 1").code, 2);
    EXPECT_EQ(run("verify /nonexistent.json").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("--help").code, 0);
}
