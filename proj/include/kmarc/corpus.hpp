#pragma once

#include <kmarc/certificate.hpp>
#include <kmarc/constructions.hpp>

#include <string>
#include <vector>

namespace kmarc {

struct CorpusEntry {
    std::string name;
    std::string family;
    json params;
    KMArc arc;
};

/// The five alpha values for which the q/4 family is a translation arc, given beta.
inline std::vector<Elem> q4_translation_alphas(const Field& F, Elem beta) {
    const Elem one(1);
    return {F.inv(F.sqr(beta)), one + F.inv(beta), beta, F.inv(F.sqrt(beta)), F.inv(beta + one)};
}

/// A hyperoval of PG(2,4) avoiding (0,0,1): the regular hyperoval moved by (x,y,z) -> (x+z,y,z).
inline KMArc regular_hyperoval_off_nucleus(const Plane& P) {
    KMArc H = KMArc::from_points(P, OPolynomial::translation(P.field_ptr(), 1).hyperoval_points(P));
    Collineation g;
    g.M(0, 2) = Elem(1);
    return apply_collineation(H, g);
}

namespace detail {

inline json hex_list(const Field& F, std::initializer_list<Elem> xs) {
    json j = json::array();
    for (Elem x : xs) j.push_back(F.to_hex(x));
    return j;
}

}  // namespace detail

/// Arcs of every family at q in {8,...,max_q} that fit the family's preconditions.
inline std::vector<CorpusEntry> build_corpus(std::uint32_t max_q = 128) {
    std::vector<CorpusEntry> out;
    auto add = [&](std::string name, std::string fam, json params, KMArc a) {
        out.push_back({std::move(name), std::move(fam), std::move(params), std::move(a)});
    };
    auto F4 = make_field(2), F8 = make_field(3);
    Plane P4(F4), P8(F8);
    KMArc reg4 = KMArc::from_points(P4, OPolynomial::translation(F4, 1).hyperoval_points(P4));
    KMArc reg8 = KMArc::from_points(P8, OPolynomial::translation(F8, 1).hyperoval_points(P8));
    KMArc off4 = regular_hyperoval_off_nucleus(P4);
    // Symmetric difference of the lines Y=0 and Y=X in PG(2,4): type 4 with nucleus (0,0,1).
    std::vector<ProjPoint> sd;
    for (std::uint32_t z = 0; z < 4; ++z) {
        sd.push_back(P4.point(Elem(1), Elem(), Elem(z)));
        sd.push_back(P4.point(Elem(1), Elem(1), Elem(z)));
    }
    KMArc sym4 = KMArc::from_points(P4, sd);

    for (int h = 3; (1u << h) <= max_q; ++h) {
        const std::uint32_t q = 1u << h;
        const std::string qs = std::to_string(q);
        auto F = make_field(h);
        Plane P(F);
        const Field& K = *F;

        // q/4: a translation member (alpha = beta) and the least non-translation member.
        Elem g = K.generator();
        add("q4-translation-" + qs, "q4", {{"alpha", K.to_hex(g)}, {"beta", K.to_hex(g)}, {"a", 0}, {"b", 0}},
            construct_q4(P, g, g, 0, 0));
        bool done = false;
        for (std::uint32_t b = 2; b < q && !done; ++b)
            for (std::uint32_t a = 2; a < q && !done; ++a) {
                Elem al(a), be(b);
                if (K.mul(al, be) == Elem(1)) continue;
                auto ts = q4_translation_alphas(K, be);
                if (std::find(ts.begin(), ts.end(), al) != ts.end()) continue;
                add("q4-generic-" + qs, "q4", {{"alpha", K.to_hex(al)}, {"beta", K.to_hex(be)}, {"a", 0}, {"b", 0}},
                    construct_q4(P, al, be, 0, 0));
                done = true;
            }

        if (h >= 4)
            add("q8-" + qs, "q8", {{"alphas", detail::hex_list(K, {Elem(1), Elem(2), Elem(4)})}},
                construct_q8(P, {Elem(1), Elem(2), Elem(4)}));

        if (h > 5) {
            int c = 0;
            for (auto& cl : admissible_search(F)) {
                add("q16-" + qs + "-class" + std::to_string(c++), "q16",
                    {{"alphas", detail::hex_list(K, {cl.tuple[0], cl.tuple[1], cl.tuple[2], cl.tuple[3]})}},
                    construct_q16(P, cl.tuple));
            }
        }

        for (int hs = 2; hs < h; ++hs)
            if (h % hs == 0)
                add("km-" + qs + "-sub" + std::to_string(1u << hs), "km", {{"i", h - hs}, {"opoly", "translation:1"}},
                    construct_km(P, h - hs, OPolynomial::translation(make_field(hs), 1)));

        if (h == 4) add("lunelli-sce-16", "lunelli-sce", json::object(), lunelli_sce(P));

        for (auto [base, bh] : {std::pair<const KMArc*, int>{&reg4, 2}, {&reg8, 3}})
            if (h % bh == 0 && h > bh)
                add("gw-a-" + qs + "-base" + std::to_string(1u << bh), "gw-a", {{"base", "regular"}, {"ext", h / bh}},
                    construct_gw(*base, GWVariant::A, h / bh));
        if (h % 2 == 0 && h > 2) {
            add("gw-b-" + qs + "-base4", "gw-b", {{"base", "regular-moved"}, {"ext", h / 2}},
                construct_gw(off4, GWVariant::B, h / 2));
            add("gw-c-" + qs + "-base4", "gw-c", {{"base", "two-lines"}, {"ext", h / 2}},
                construct_gw(sym4, GWVariant::C, h / 2));
        }
    }
    return out;
}

}  // namespace kmarc
