#include <kmarc/certificate.hpp>
#include <kmarc/constructions.hpp>
#include <kmarc/corpus.hpp>
#include <kmarc/symmetry.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace kmarc;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kBudget = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int h_of_q(std::uint32_t q) {
    if (q < 2 || (q & (q - 1)) || q > 65536) throw UsageError("--q must be a power of two between 2 and 65536");
    return std::countr_zero(q);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<Elem> parse_hex_list(const Field& F, const std::string& s) {
    std::vector<Elem> out;
    for (auto& t : split(s, ',')) out.push_back(F.from_hex(t));
    return out;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    return json::parse(in);
}

void write_json(const std::string& path, const json& j) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(1) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << j.dump(1) << "\n";
}

json matrix_json(const Field& F, const Collineation& g) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) rows.push_back({F.to_hex(g.M(r, 0)), F.to_hex(g.M(r, 1)), F.to_hex(g.M(r, 2))});
    return {{"matrix", rows}, {"frobenius", g.frob}};
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

struct Options {
    std::string family, alpha, beta, alphas, opoly = "translation:1", base, k, out = "-", line;
    std::uint32_t q = 0;
    int a = 0, b = 0, i = 0, ext = 0;
    bool with_stab = false, as_json = false;
    std::uint64_t budget = SearchOptions{}.budget;
    unsigned threads = 0;
    std::uint64_t seed = 1;
    std::uint32_t max_q = 128;
    std::vector<std::string> files;
};

SearchOptions search_opts(const Options& o) { return {o.budget, o.threads}; }

KMArc do_construct(const Options& o, json& params) {
    const std::string& fam = o.family;
    if (fam == "lunelli-sce") {
        if (o.q && o.q != 16) throw UsageError("lunelli-sce exists only for q = 16");
        return lunelli_sce(Plane(4));
    }
    if (fam == "gw-a" || fam == "gw-b" || fam == "gw-c") {
        if (o.base.empty() || o.ext < 2) throw UsageError("gw families need --base <certificate> and --ext >= 2");
        KMArc H = arc_from_certificate(read_json(o.base));
        const GWVariant v = fam == "gw-a" ? GWVariant::A : fam == "gw-b" ? GWVariant::B : GWVariant::C;
        std::optional<Elem> k;
        FieldPtr big = make_field(H.field().h() * o.ext);
        if (!o.k.empty()) k = big->from_hex(o.k);
        params = {{"base", o.base}, {"ext", o.ext}};
        if (k) params["k"] = o.k;
        return construct_gw(H, v, o.ext, k, big);
    }
    if (!o.q) throw UsageError("--q is required");
    auto F = make_field(h_of_q(o.q));
    Plane P(F);
    if (fam == "q4") {
        if (o.alpha.empty() || o.beta.empty()) throw UsageError("q4 needs --alpha and --beta");
        params = {{"alpha", o.alpha}, {"beta", o.beta}, {"a", o.a}, {"b", o.b}};
        return construct_q4(P, F->from_hex(o.alpha), F->from_hex(o.beta), o.a, o.b);
    }
    if (fam == "q8") {
        std::vector<Elem> al = o.alphas.empty() ? std::vector<Elem>{Elem(1), Elem(2), Elem(4)} : parse_hex_list(*F, o.alphas);
        if (al.size() != 3) throw UsageError("q8 needs three alphas");
        params = {{"alphas", detail::hex_list(*F, {al[0], al[1], al[2]})}};
        return construct_q8(P, {al[0], al[1], al[2]});
    }
    if (fam == "q16") {
        std::array<Elem, 4> tup;
        if (o.alphas.empty()) {
            auto cls = admissible_search(F);
            if (cls.empty() || F->h() <= 5) throw UsageError("no admissible tuple for q = " + std::to_string(o.q));
            tup = cls.front().tuple;
        } else {
            auto al = parse_hex_list(*F, o.alphas);
            if (al.size() != 4) throw UsageError("q16 needs four alphas");
            std::copy(al.begin(), al.end(), tup.begin());
        }
        params = {{"alphas", detail::hex_list(*F, {tup[0], tup[1], tup[2], tup[3]})}};
        return construct_q16(P, tup);
    }
    if (fam == "km") {
        const int h = F->h();
        int i = o.i;
        if (i <= 0) throw UsageError("km needs --i (type 2^i)");
        auto Fs = make_field(h - i);
        OPolynomial g;
        if (o.opoly == "lunelli-sce") g = OPolynomial::lunelli_sce(Fs);
        else if (o.opoly.rfind("translation:", 0) == 0) g = OPolynomial::translation(Fs, std::stoi(o.opoly.substr(12)));
        else throw UsageError("unknown --opoly " + o.opoly);
        params = {{"i", i}, {"opoly", o.opoly}};
        return construct_km(P, i, g);
    }
    throw UsageError("unknown family " + fam);
}

int cmd_construct(const Options& o, const std::string& cmdline) {
    json params;
    KMArc A = do_construct(o, params);
    json prov = {{"family", o.family}, {"q", A.q()}, {"parameters", params}, {"command", cmdline}};
    write_json(o.out, make_certificate(A, prov, o.with_stab, search_opts(o)));
    if (o.out != "-") std::cout << "wrote " << o.out << ": q=" << A.q() << " t=" << A.t() << " points=" << A.size() << "\n";
    return kOk;
}

int cmd_verify(const Options& o) {
    int rc = kOk;
    for (auto& f : o.files) {
        json j = read_json(f);
        Plane P(field_from_json(j.at("field")));
        std::vector<ProjPoint> pts;
        for (auto& p : j.at("points")) pts.push_back(P.point(triple_from_json(P.field(), p)));
        auto rep = verify_km(P, pts);
        if (!rep.is_km) {
            std::cout << f << ": FAIL " << rep.failure << "\n";
            rc = kFail;
            continue;
        }
        auto chk = verify_certificate(j, search_opts(o));
        if (!chk.ok) {
            for (auto& m : chk.mismatches) std::cout << f << ": FAIL " << m << "\n";
            rc = kFail;
            continue;
        }
        std::cout << f << ": OK q=" << P.q() << " t=" << *rep.t << " t-secants=" << rep.secant_count << "\n";
    }
    return rc;
}

int cmd_stabilizer(const Options& o) {
    KMArc A = arc_from_certificate(read_json(o.files.at(0)));
    auto st = stabilizer(A, search_opts(o));
    const Field& F = A.field();
    json j = {{"order", st.order}, {"projectivity_order", st.projectivity_order}, {"elation_order", st.elation_order}};
    json orbits = json::array(), gens = json::array();
    for (auto& orb : st.orbits) orbits.push_back(orb.size());
    for (auto& g : st.generators) gens.push_back(matrix_json(F, g));
    j["orbit_sizes"] = orbits;
    j["generators"] = gens;
    if (o.as_json) std::cout << j.dump(1) << "\n";
    else {
        std::cout << "order " << st.order << "\nprojectivities " << st.projectivity_order << "\nelations "
                  << st.elation_order << "\norbits";
        for (auto& orb : st.orbits) std::cout << " " << orb.size();
        std::cout << "\ngenerators " << gens.dump() << "\n";
    }
    return kOk;
}

int cmd_equiv(const Options& o) {
    if (o.files.size() != 2) throw UsageError("equiv needs two certificates");
    KMArc A = arc_from_certificate(read_json(o.files[0]));
    KMArc B = arc_from_certificate(read_json(o.files[1]));
    if (!(A.field() == B.field())) throw UsageError("certificates use different fields");
    auto w = equivalent(A, B, search_opts(o));
    if (!w) {
        std::cout << "inequivalent (exhaustive frame search)\n";
        return kFail;
    }
    std::cout << "equivalent " << matrix_json(A.field(), *w).dump() << "\n";
    return kOk;
}

int cmd_translation(const Options& o) {
    KMArc A = arc_from_certificate(read_json(o.files.at(0)));
    auto parts = split(o.line, ',');
    if (parts.size() != 3) throw UsageError("--line takes a hex triple a,b,c");
    const Field& F = A.field();
    ProjLine l = A.plane().line(F.from_hex(parts[0]), F.from_hex(parts[1]), F.from_hex(parts[2]));
    bool tr = is_translation_arc(A, l);
    std::cout << "translation line " << A.plane().to_hex(l) << ": " << yesno(tr)
              << " (axis elation group order " << axis_elation_group_order(A, l) << ")\n";
    return kOk;
}

int cmd_admissible(const Options& o) {
    auto F = make_field(h_of_q(o.q));
    auto cls = admissible_search(F);
    json j = json::array();
    for (auto& c : cls) j.push_back(detail::hex_list(*F, {c.tuple[0], c.tuple[1], c.tuple[2], c.tuple[3]}));
    if (o.as_json) std::cout << j.dump() << "\n";
    else {
        std::cout << cls.size() << " class(es) for q = " << o.q << "\n";
        for (auto& t : j) std::cout << "  (" << t[0].get<std::string>() << "," << t[1].get<std::string>() << ","
                                   << t[2].get<std::string>() << "," << t[3].get<std::string>() << ")\n";
    }
    return kOk;
}

struct Row {
    std::string name;
    std::uint32_t q, t;
    std::string family;
    bool elation, translation;
};

Row row_for(const std::string& name, const std::string& fam, const KMArc& A) {
    bool tr = false;
    if (A.t() > 2) tr = !translation_lines(A).empty();
    return {name, A.q(), A.t(), fam, is_elation_arc(A).is_elation, tr};
}

int cmd_report(const Options& o) {
    std::vector<Row> rows;
    if (o.files.empty()) {
        for (auto& e : build_corpus(o.max_q)) rows.push_back(row_for(e.name, e.family, e.arc));
    } else {
        std::vector<std::string> paths;
        for (auto& f : o.files) {
            if (fs::is_directory(f)) {
                for (auto& d : fs::directory_iterator(f))
                    if (d.path().extension() == ".json") paths.push_back(d.path().string());
            } else {
                paths.push_back(f);
            }
        }
        std::sort(paths.begin(), paths.end());
        for (auto& p : paths) {
            json j = read_json(p);
            KMArc A = arc_from_certificate(j);
            std::string fam = j.value("provenance", json::object()).value("family", std::string("?"));
            rows.push_back(row_for(fs::path(p).stem().string(), fam, A));
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.q, a.t, a.family, a.name) < std::tie(b.q, b.t, b.family, b.name);
    });
    if (o.as_json) {
        json j = json::array();
        for (auto& r : rows)
            j.push_back({{"name", r.name}, {"q", r.q}, {"t", r.t}, {"family", r.family}, {"elation", r.elation},
                         {"translation", r.translation}});
        std::cout << j.dump(1) << "\n";
        return kOk;
    }
    std::printf("%-28s %6s %6s %-12s %-8s %-11s\n", "arc", "q", "t", "family", "elation", "translation");
    for (auto& r : rows)
        std::printf("%-28s %6u %6u %-12s %-8s %-11s\n", r.name.c_str(), r.q, r.t, r.family.c_str(),
                    yesno(r.elation).c_str(), r.t > 2 ? yesno(r.translation).c_str() : "-");
    return kOk;
}

int cmd_corpus(const Options& o) {
    fs::create_directories(o.out);
    for (auto& e : build_corpus(o.max_q)) {
        json prov = {{"family", e.family}, {"q", e.arc.q()}, {"parameters", e.params}, {"command", "kmarc corpus"}};
        write_json((fs::path(o.out) / (e.name + ".json")).string(), make_certificate(e.arc, prov));
        std::cout << e.name << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Construct, verify and classify KM-arcs in PG(2,2^h)"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--threads", o.threads, "worker threads for frame search (default: KMARC_THREADS or all cores)");
    app.add_option("--seed", o.seed, "seed recorded in outputs; the CLI itself is deterministic");

    auto* con = app.add_subcommand("construct", "build an arc and write its certificate");
    con->add_option("--family", o.family, "km | gw-a | gw-b | gw-c | q4 | q8 | q16 | lunelli-sce")->required();
    con->add_option("--q", o.q, "field order 2^h");
    con->add_option("--alpha", o.alpha, "q4: alpha (hex)");
    con->add_option("--beta", o.beta, "q4: beta (hex)");
    con->add_option("--a", o.a, "q4: a in {0,1}");
    con->add_option("--b", o.b, "q4: b in {0,1}");
    con->add_option("--alphas", o.alphas, "q8/q16: comma-separated hex alphas");
    con->add_option("--i", o.i, "km: type exponent i");
    con->add_option("--opoly", o.opoly, "km: translation:<n> | lunelli-sce");
    con->add_option("--base", o.base, "gw: certificate of the base arc");
    con->add_option("--ext", o.ext, "gw: extension degree");
    con->add_option("--k", o.k, "gw: complement selector with relative trace 1 (hex)");
    con->add_flag("--stabilizer", o.with_stab, "also record the stabilizer order");
    con->add_option("--out", o.out, "output path ('-' for stdout)");
    con->add_option("--budget", o.budget, "frame-search candidate budget");

    auto* ver = app.add_subcommand("verify", "re-derive every claim of certificates");
    ver->add_option("files", o.files)->required();
    ver->add_option("--budget", o.budget);

    auto* stb = app.add_subcommand("stabilizer", "collineation stabilizer of an arc");
    stb->add_option("file", o.files)->required()->expected(1);
    stb->add_option("--budget", o.budget);
    stb->add_flag("--json", o.as_json);

    auto* eqv = app.add_subcommand("equiv", "search for a collineation between two arcs");
    eqv->add_option("files", o.files)->required()->expected(2);
    eqv->add_option("--budget", o.budget);

    auto* trn = app.add_subcommand("translation", "test a translation line");
    trn->add_option("file", o.files)->required()->expected(1);
    trn->add_option("--line", o.line, "line coefficients as hex triple a,b,c")->required();

    auto* adm = app.add_subcommand("admissible", "classes of admissible q/16 tuples");
    adm->add_option("q", o.q)->required();
    adm->add_flag("--json", o.as_json);

    auto* rep = app.add_subcommand("report", "elation/translation table over certificates or the built-in corpus");
    rep->add_option("files", o.files, "certificates or directories (default: built-in corpus)");
    rep->add_option("--max-q", o.max_q);
    rep->add_flag("--json", o.as_json);

    auto* cor = app.add_subcommand("corpus", "write certificates for the built-in corpus");
    cor->add_option("--out", o.out)->required();
    cor->add_option("--max-q", o.max_q);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    std::string cmdline;
    for (int i = 0; i < argc; ++i) cmdline += (i ? " " : "") + std::string(argv[i]);
    try {
        if (*con) return cmd_construct(o, cmdline);
        if (*ver) return cmd_verify(o);
        if (*stb) return cmd_stabilizer(o);
        if (*eqv) return cmd_equiv(o);
        if (*trn) return cmd_translation(o);
        if (*adm) return cmd_admissible(o);
        if (*rep) return cmd_report(o);
        if (*cor) return cmd_corpus(o);
    } catch (const ResourceError& e) {
        std::cerr << "budget exhausted: " << e.what() << " (found at least " << e.lower_bound << ")\n";
        return kBudget;
    } catch (const NotKMArcError& e) {
        std::cerr << e.what() << "\n";
        return kFail;
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const ConstructionError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const json::exception& e) {
        std::cerr << "bad certificate: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
