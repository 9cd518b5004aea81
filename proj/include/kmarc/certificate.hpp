#pragma once

#include <kmarc/symmetry.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace kmarc {

using json = nlohmann::json;

inline json triple_json(const Plane& P, const detail::Triple& t) {
    return json::array({P.field().to_hex(t[0]), P.field().to_hex(t[1]), P.field().to_hex(t[2])});
}

inline Vec3 triple_from_json(const Field& F, const json& j) {
    if (!j.is_array() || j.size() != 3) throw ArgumentError("coordinate triple expected");
    return {F.from_hex(j[0].get<std::string>()), F.from_hex(j[1].get<std::string>()), F.from_hex(j[2].get<std::string>())};
}

inline json field_json(const Field& F) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%x", F.modulus());
    return {{"h", F.h()}, {"modulus", buf}};
}

inline FieldPtr field_from_json(const json& j) {
    int h = j.at("h").get<int>();
    std::uint32_t mod = static_cast<std::uint32_t>(std::stoul(j.at("modulus").get<std::string>(), nullptr, 16));
    return make_field(h, mod);
}

/// Claims derived from the points alone.
inline json derive_claims(const KMArc& A, bool with_stabilizer, SearchOptions opt = {}) {
    const Plane& P = A.plane();
    json c;
    c["t"] = A.t();
    c["nucleus"] = A.nucleus() ? triple_json(P, *A.nucleus()) : json(nullptr);
    auto el = is_elation_arc(A);
    if (el.is_elation) {
        const auto& e = el.entries.front();
        c["elation_line"] = triple_json(P, e.line);
        c["elation_center"] = triple_json(P, e.center);
        json sb = json::array();
        for (Elem b : e.subgroup.basis()) sb.push_back(P.field().to_hex(b));
        c["subgroup"] = sb;
    } else {
        c["elation_line"] = nullptr;
    }
    json tl = json::array();
    if (A.t() > 2 || A.size() <= 64)
        for (auto& l : translation_lines(A)) tl.push_back(triple_json(P, l));
    c["translation_lines"] = tl;
    if (with_stabilizer) c["stabilizer_order"] = stabilizer(A, opt).order;
    return c;
}

inline json make_certificate(const KMArc& A, const json& provenance, bool with_stabilizer = false,
                             SearchOptions opt = {}) {
    const Plane& P = A.plane();
    json j;
    j["format"] = "kmarc-certificate/1";
    j["field"] = field_json(P.field());
    json pts = json::array();
    for (auto& p : A.points()) pts.push_back(triple_json(P, p));
    j["points"] = pts;
    j["claims"] = derive_claims(A, with_stabilizer, opt);
    j["provenance"] = provenance;
    return j;
}

/// Parses points; throws NotKMArcError if they do not form a KM-arc.
inline KMArc arc_from_certificate(const json& j) {
    Plane P(field_from_json(j.at("field")));
    std::vector<ProjPoint> pts;
    for (auto& p : j.at("points")) pts.push_back(P.point(triple_from_json(P.field(), p)));
    return KMArc::from_points(P, std::move(pts));
}

struct CertificateCheck {
    bool ok = false;
    std::vector<std::string> mismatches;
};

/// Recomputes every claim from the points and compares. Throws NotKMArcError for non-arcs.
inline CertificateCheck verify_certificate(const json& j, SearchOptions opt = {}) {
    CertificateCheck r;
    KMArc A = arc_from_certificate(j);
    const json& claimed = j.at("claims");
    json derived = derive_claims(A, claimed.contains("stabilizer_order"), opt);
    for (auto& [k, v] : claimed.items()) {
        if (!derived.contains(k)) {
            r.mismatches.push_back("unknown claim '" + k + "'");
            continue;
        }
        if (derived[k] != v) r.mismatches.push_back("claim '" + k + "' is " + v.dump() + ", recomputed " + derived[k].dump());
    }
    r.ok = r.mismatches.empty();
    return r;
}

}  // namespace kmarc
