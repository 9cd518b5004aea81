#pragma once

#include <kmarc/arcs.hpp>

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace kmarc {

// --- distinctness indicators ---------------------------------------------

/// 1 iff the two k-bit vectors differ.
inline int distinct2(std::uint32_t x, std::uint32_t y) { return x != y; }
/// 1 iff the three vectors are pairwise distinct.
inline int distinct3(std::uint32_t x, std::uint32_t y, std::uint32_t z) { return x != y && y != z && x != z; }

/// Polynomial form of distinct2: 1 + prod_i (x_i + y_i + 1).
inline int distinct2_poly(std::uint32_t x, std::uint32_t y, int k) {
    int prod = 1;
    for (int i = 0; i < k; ++i) prod &= ((x >> i) ^ (y >> i) ^ 1) & 1;
    return 1 ^ prod;
}

/// distinct3 written as a sum of pairwise indicators.
inline int distinct3_poly(std::uint32_t x, std::uint32_t y, std::uint32_t z, int k) {
    return distinct2_poly(x, y, k) ^ distinct2_poly(y, z, k) ^ distinct2_poly(z, x, k);
}

namespace detail {

// f1 = x+y+z+yz, f2 = y+z+xz, f3 = z+xy over F2.
inline std::array<int, 3> fvals(int x, int y, int z) {
    return {(x ^ y ^ z ^ (y & z)) & 1, (y ^ z ^ (x & z)) & 1, (z ^ (x & y)) & 1};
}

/// Adds the points of X=0 that complete an affine set to a KM-arc: a point is
/// taken iff every other line through it meets the affine set an odd number of times.
inline std::vector<ProjPoint> complete_on_axis(const Plane& P, std::vector<ProjPoint> affine) {
    Census c = census(P, affine);
    std::unordered_map<std::uint64_t, std::uint32_t> cnt;
    for (auto& [l, n] : c.lines) cnt[P.index(l)] = n;
    const ProjLine axis = P.line(Elem(1), Elem(), Elem());
    auto onaxis = P.points_on_line(axis);
    for (auto& R : onaxis) {
        int odd = 0, even = 0;
        for (auto& l : P.lines_through(R)) {
            if (l == axis) continue;
            auto it = cnt.find(P.index(l));
            ((it != cnt.end() ? it->second : 0) & 1 ? odd : even)++;
        }
        if (odd && even) throw ConstructionError("affine set has no consistent completion on X=0");
        if (odd) affine.push_back(R);
    }
    return affine;
}

inline KMArc finish(const Plane& P, std::vector<ProjPoint> pts, std::uint32_t expect_t, const char* what) {
    auto rep = verify_km(P, pts);
    if (!rep.is_km) throw ConstructionError(std::string(what) + ": output is not a KM-arc: " + rep.failure);
    if (expect_t && *rep.t != expect_t)
        throw ConstructionError(std::string(what) + ": expected type " + std::to_string(expect_t) + ", got " +
                                std::to_string(*rep.t));
    return KMArc::from_points(P, std::move(pts));
}

}  // namespace detail

// --- o-polynomials -------------------------------------------------------

/// Map g on GF(q') such that {(1,g(x),x)} together with (0,1,0), (0,0,1) is a hyperoval.
struct OPolynomial {
    enum class Kind { Translation, LunelliSce, Explicit };
    Kind kind = Kind::Explicit;
    FieldPtr field;
    int n = 0;  // exponent for translation maps x -> x^(2^n)
    std::vector<Elem> table;

    Elem operator()(Elem x) const {
        field->check(x);
        return table[x.v];
    }

    std::vector<ProjPoint> hyperoval_points(const Plane& P) const {
        std::vector<ProjPoint> pts{P.point(Elem(), Elem(1), Elem()), P.point(Elem(), Elem(), Elem(1))};
        for (std::uint32_t x = 0; x < field->q(); ++x) pts.push_back(P.point(Elem(1), table[x], Elem(x)));
        return pts;
    }

    bool is_o_polynomial() const {
        Plane P(field);
        auto rep = verify_km(P, hyperoval_points(P));
        return rep.is_km && *rep.t == 2;
    }

    static OPolynomial translation(FieldPtr F, int n) {
        if (std::gcd(n, F->h()) != 1) throw ArgumentError("translation exponent must be coprime to the field degree");
        OPolynomial g;
        g.kind = Kind::Translation;
        g.n = n;
        g.field = F;
        for (std::uint32_t x = 0; x < F->q(); ++x) g.table.push_back(F->frobenius(Elem(x), n));
        return g;
    }

    static OPolynomial explicit_map(FieldPtr F, std::vector<Elem> table) {
        if (table.size() != F->q()) throw ArgumentError("o-polynomial table has wrong length");
        OPolynomial g;
        g.field = std::move(F);
        g.table = std::move(table);
        if (!g.is_o_polynomial()) throw ArgumentError("map is not an o-polynomial");
        return g;
    }

    /// Reads g off a hyperoval through (0,1,0) and (0,0,1).
    static OPolynomial from_hyperoval(const KMArc& H) {
        const Plane& P = H.plane();
        if (H.t() != 2) throw ArgumentError("not a hyperoval");
        if (!H.contains(P.point(Elem(), Elem(1), Elem())) || !H.contains(P.point(Elem(), Elem(), Elem(1))))
            throw ArgumentError("hyperoval must contain (0,1,0) and (0,0,1)");
        OPolynomial g;
        g.field = P.field_ptr();
        g.table.assign(P.q(), Elem());
        for (auto& p : H.points())
            if (!p[0].is_zero()) g.table[p[2].v] = p[1];
        return g;
    }

    static OPolynomial lunelli_sce(FieldPtr F);
};

// --- families ------------------------------------------------------------

/// The Lunelli-Sce hyperoval in PG(2,16): the 16 points
/// (1, sum l_i z^i + l_4, sum f_i(l_1,l_2,l_3) z^(3-i)) plus (0,1,1) and (0,0,1),
/// where z is the least root of x^4 + x + 1.
inline KMArc lunelli_sce(const Plane& P) {
    const Field& F = P.field();
    if (F.h() != 4) throw ArgumentError("the Lunelli-Sce hyperoval lives in PG(2,16)");
    Elem z;
    for (std::uint32_t a = 2; a < 16; ++a)
        if (F.eval_f2_poly(0x13, Elem(a)).is_zero()) { z = Elem(a); break; }
    const Elem zp[4] = {Elem(1), z, F.mul(z, z), F.pow(z, 3)};
    std::vector<ProjPoint> pts{P.point(Elem(), Elem(1), Elem(1)), P.point(Elem(), Elem(), Elem(1))};
    for (int v = 0; v < 16; ++v) {
        int l1 = v & 1, l2 = v >> 1 & 1, l3 = v >> 2 & 1, l4 = v >> 3 & 1;
        Elem y = (l4 ? Elem(1) : Elem());
        if (l1) y += zp[1];
        if (l2) y += zp[2];
        if (l3) y += zp[3];
        auto f = detail::fvals(l1, l2, l3);
        Elem x;
        for (int i = 0; i < 3; ++i)
            if (f[i]) x += zp[2 - i];
        pts.push_back(P.point(Elem(1), y, x));
    }
    return detail::finish(P, pts, 2, "lunelli_sce");
}

inline OPolynomial OPolynomial::lunelli_sce(FieldPtr F) {
    Plane P(F);
    KMArc H = kmarc::lunelli_sce(P);
    // (x,y,z) -> (x,y,y+z) sends (0,1,1) to (0,1,0) and fixes (0,0,1).
    std::vector<ProjPoint> moved;
    for (auto& p : H.points()) moved.push_back(P.point(p[0], p[1], p[1] + p[2]));
    OPolynomial g = from_hyperoval(KMArc::from_points(P, moved));
    g.kind = Kind::LunelliSce;
    return g;
}

/// Arc of type 2^i: affine points (1, g(L(x)), x) with L the relative trace
/// onto the subfield of g, completed on X=0. Nucleus (0,0,1).
inline KMArc construct_km(const Plane& P, int i, const OPolynomial& g) {
    const int h = P.field().h(), hs = g.field->h();
    if (i < 1 || hs != h - i || h % hs != 0 || hs < 2)
        throw ConstructionError("construct_km needs h - i to divide h, i >= 1 and a subfield of order > 2");
    SubfieldEmbedding emb(P.field_ptr(), g.field);
    std::vector<ProjPoint> aff;
    for (std::uint32_t x = 0; x < P.q(); ++x) {
        Elem L = P.field().trace_rel(Elem(x), hs);
        aff.push_back(P.point(Elem(1), emb(g(emb.preimage(L))), Elem(x)));
    }
    return detail::finish(P, detail::complete_on_axis(P, std::move(aff)), 1u << i, "construct_km");
}

enum class GWVariant { A, B, C };

/// Extension construction: J = {(1, x, y + i) : (1,x,y) in H, i in I} in
/// PG(2, q^ext), completed on X=0. I = {x : Tr_rel(k x) = 0} where k is the
/// least element of relative trace 1 unless given.
inline KMArc construct_gw(const KMArc& H, GWVariant v, int ext, std::optional<Elem> k = std::nullopt,
                          FieldPtr big = nullptr) {
    const Plane& Ps = H.plane();
    const int m = Ps.field().h();
    if (ext < 2) throw ConstructionError("extension degree must be at least 2");
    if (m * ext > 16) throw ConstructionError("extension field too large");
    if (!big) big = make_field(m * ext);
    if (big->h() != m * ext) throw ConstructionError("target field has the wrong degree");
    const ProjPoint N = Ps.point(Elem(), Elem(), Elem(1));
    std::uint32_t t_out = 0;
    const std::uint32_t qs = Ps.q();
    std::uint32_t qpow = 1;
    for (int j = 0; j < ext - 1; ++j) qpow *= qs;
    switch (v) {
        case GWVariant::A:
            if (H.t() != 2 || !H.contains(N)) throw ConstructionError("variant A needs a hyperoval through (0,0,1)");
            t_out = qpow;
            break;
        case GWVariant::B:
            if (H.t() != 2 || H.contains(N)) throw ConstructionError("variant B needs a hyperoval missing (0,0,1)");
            t_out = 2 * qpow;
            break;
        case GWVariant::C:
            if (H.t() <= 2 || *H.nucleus() != N) throw ConstructionError("variant C needs a KM-arc with nucleus (0,0,1)");
            t_out = H.t() * qpow;
            break;
    }
    Plane P(big);
    const Field& F = *big;
    SubfieldEmbedding emb(big, Ps.field_ptr());
    Elem kk;
    if (k) {
        F.check(*k);
        if (F.trace_rel(*k, m) != Elem(1)) throw ConstructionError("complement selector must have relative trace 1");
        kk = *k;
    } else {
        for (std::uint32_t a = 1; a < F.q(); ++a)
            if (F.trace_rel(Elem(a), m) == Elem(1)) { kk = Elem(a); break; }
    }
    std::vector<Elem> I;
    for (std::uint32_t a = 0; a < F.q(); ++a)
        if (F.trace_rel(F.mul(kk, Elem(a)), m).is_zero()) I.push_back(Elem(a));
    std::vector<ProjPoint> aff;
    for (auto& p : H.points()) {
        if (p[0].is_zero()) continue;
        for (Elem i : I) aff.push_back(P.point(Elem(1), emb(p[1]), emb(p[2]) + i));
    }
    return detail::finish(P, detail::complete_on_axis(P, std::move(aff)), t_out, "construct_gw");
}

/// Type q/4 family with parameters alpha, beta outside {0,1}, alpha*beta != 1, a, b in F2.
inline KMArc construct_q4(const Plane& P, Elem alpha, Elem beta, int a, int b) {
    const Field& F = P.field();
    F.check(alpha);
    F.check(beta);
    if (F.h() < 3) throw ConstructionError("construct_q4 needs q >= 8");
    if (alpha.v <= 1 || beta.v <= 1) throw ConstructionError("alpha and beta must lie outside {0,1}");
    Elem ab = F.mul(alpha, beta);
    if (ab == Elem(1)) throw ConstructionError("alpha*beta must differ from 1");
    a &= 1;
    b &= 1;
    const Elem one(1);
    Elem gamma = F.div(beta + one, ab + one);
    Elem ag = F.mul(alpha, gamma);
    Elem xi = F.mul(ab, gamma);
    Elem ia = F.inv(alpha), iag = F.inv(ag), iab = F.inv(ab), ixi = F.inv(xi);
    std::vector<ProjPoint> pts;
    for (std::uint32_t zz = 0; zz < F.q(); ++zz) {
        Elem z(zz);
        int tz = F.trace(z);
        int t_a = F.trace(F.mul(z, ia)), t_ag = F.trace(F.mul(z, iag));
        int t_ab = F.trace(F.mul(z, iab)), t_xi = F.trace(F.mul(z, ixi));
        if (tz == 0 && t_a == a) pts.push_back(P.point(Elem(), one, z));
        if (tz == 0 && t_ag == 0) pts.push_back(P.point(one, Elem(), z));
        if (tz == 1 && t_ab == b) pts.push_back(P.point(one, one, z));
        if (t_ag == (a ^ 1) && t_xi == (b ^ 1)) pts.push_back(P.point(one, gamma, z));
        if (t_ab == (a ^ b ^ 1) && t_xi == b) pts.push_back(P.point(one, beta + one, z));
    }
    return detail::finish(P, pts, P.q() / 4, "construct_q4");
}

/// Coset leaders beta_j with Tr(alpha_i beta_j) = delta_ij for j < count.
inline std::vector<Elem> dual_leaders(const Field& F, std::span<const Elem> alphas, std::size_t count) {
    std::vector<Elem> betas;
    for (std::size_t j = 0; j < count; ++j) {
        std::vector<int> tg(alphas.size(), 0);
        tg[j] = 1;
        betas.push_back(solve_trace_system(F, alphas, tg));
    }
    return betas;
}

/// Type q/8 family from three F2-independent alphas (h >= 4).
inline KMArc construct_q8(const Plane& P, const std::array<Elem, 3>& alphas) {
    const Field& F = P.field();
    const FieldPtr& Fp = P.field_ptr();
    if (F.h() < 4) throw ConstructionError("construct_q8 needs q >= 16");
    for (Elem a : alphas) F.check(a);
    if (!independent(Fp, alphas)) throw ConstructionError("alphas must be F2-independent");
    Subgroup S = trace_dual(span(Fp, alphas));
    auto betas = dual_leaders(F, alphas, 3);
    auto Sel = S.elements();
    std::vector<ProjPoint> pts;
    for (int v = 0; v < 8; ++v) {
        int l[3] = {v & 1, v >> 1 & 1, v >> 2 & 1};
        Elem y, base;
        for (int i = 0; i < 3; ++i)
            if (l[i]) y += alphas[i];
        auto f = detail::fvals(l[0], l[1], l[2]);
        for (int i = 0; i < 3; ++i)
            if (f[i]) base += betas[i];
        for (Elem s : Sel) pts.push_back(P.point(Elem(1), y, base + s));
    }
    std::array<Elem, 3> sq{F.sqr(alphas[0]), F.sqr(alphas[1]), F.sqr(alphas[2])};
    for (Elem x : trace_dual(span(Fp, sq)).elements()) pts.push_back(P.point(Elem(), Elem(1), x));
    return detail::finish(P, pts, P.q() / 8, "construct_q8");
}

// --- type q/16 -----------------------------------------------------------

/// Checks the admissibility invariants of (alpha_1..alpha_4); throws AdmissibilityError naming the one that fails.
inline void check_admissible(const FieldPtr& Fp, const std::array<Elem, 4>& al) {
    const Field& F = *Fp;
    for (Elem a : al) F.check(a);
    if (!independent(Fp, al)) throw AdmissibilityError("alphas are not F2-independent");
    Subgroup T = span(Fp, al);
    for (int i = 0; i < 3; ++i)
        if (!T.contains(F.div(F.sqr(al[i]), al[3])))
            throw AdmissibilityError("alpha_" + std::to_string(i + 1) + "^2/alpha_4 is not in the span of the alphas");
}

namespace detail {

inline bool q16_alpha_ok(const FieldPtr& Fp, const std::array<Elem, 4>& al, Elem alpha) {
    const Field& F = *Fp;
    std::array<Elem, 4> w;
    for (int i = 0; i < 3; ++i) w[i] = F.mul(al[i], al[i] + al[3]);
    w[3] = F.mul(al[3], alpha);
    return independent(Fp, w);
}

inline Elem combo(const std::array<Elem, 4>& al, int code) {
    // code bit 3 is b_1, bit 0 is b_4: increasing code is lexicographic in (b_1..b_4).
    Elem a;
    for (int i = 0; i < 4; ++i)
        if (code >> (3 - i) & 1) a += al[i];
    return a;
}

}  // namespace detail

/// Coefficient vectors b (as 4-bit codes, b_1 most significant) whose alpha = sum b_i alpha_i is usable.
inline std::vector<int> q16_alpha_choices(const FieldPtr& Fp, const std::array<Elem, 4>& al) {
    check_admissible(Fp, al);
    std::vector<int> out;
    for (int code = 1; code < 16; ++code)
        if (detail::q16_alpha_ok(Fp, al, detail::combo(al, code))) out.push_back(code);
    return out;
}

/// The auxiliary alpha for the q/16 family: lexicographically least valid coefficient vector.
inline Elem select_alpha_q16(const FieldPtr& Fp, const std::array<Elem, 4>& al) {
    auto ch = q16_alpha_choices(Fp, al);
    if (ch.empty()) throw AdmissibilityError("no auxiliary alpha exists");
    return detail::combo(al, ch.front());
}

/// Type q/16 family from an admissible tuple (h > 5).
inline KMArc construct_q16(const Plane& P, const std::array<Elem, 4>& al) {
    const Field& F = P.field();
    const FieldPtr& Fp = P.field_ptr();
    if (F.h() <= 5) throw ConstructionError("construct_q16 needs h > 5");
    check_admissible(Fp, al);
    Elem alpha = select_alpha_q16(Fp, al);
    Subgroup S = trace_dual(span(Fp, al));
    auto betas = dual_leaders(F, al, 3);
    auto Sel = S.elements();
    std::vector<ProjPoint> pts;
    for (int v = 0; v < 16; ++v) {
        int l[4] = {v & 1, v >> 1 & 1, v >> 2 & 1, v >> 3 & 1};
        Elem y, base;
        for (int i = 0; i < 4; ++i)
            if (l[i]) y += al[i];
        auto f = detail::fvals(l[0], l[1], l[2]);
        for (int i = 0; i < 3; ++i)
            if (f[i]) base += betas[i];
        for (Elem s : Sel) pts.push_back(P.point(Elem(1), y, base + s));
    }
    std::array<Elem, 4> w;
    for (int i = 0; i < 3; ++i) w[i] = F.mul(al[i], al[i] + al[3]);
    w[3] = F.mul(al[3], alpha);
    Elem x0 = solve_trace_system(F, w, std::array<int, 4>{0, 0, 0, 1});
    for (Elem s : trace_dual(span(Fp, w)).elements()) pts.push_back(P.point(Elem(), Elem(1), x0 + s));
    return detail::finish(P, pts, P.q() / 16, "construct_q16");
}

/// Some (k, e) with k * T1^(2^e) = T2, or nothing.
inline std::optional<std::pair<Elem, int>> scale_frobenius_match(const Subgroup& T1, const Subgroup& T2) {
    const Field& F = *T1.field();
    if (T1.rank() != T2.rank()) return std::nullopt;
    for (int e = 0; e < F.h(); ++e) {
        Subgroup Te = T1.frobenius(e);
        for (std::uint32_t k = 1; k < F.q(); ++k)
            if (Te.scaled(Elem(k)) == T2) return std::make_pair(Elem(k), e);
    }
    return std::nullopt;
}

struct AdmissibleClass {
    std::array<Elem, 4> tuple;  // (alpha_1, alpha_2, alpha_3, 1)
    Subgroup span;              // <alpha_1, alpha_2, alpha_3, 1>
    std::size_t members = 0;    // normalized spans in the class
};

/// Classes of admissible tuples with alpha_4 = 1, up to T -> k T^(2^e).
/// These spans are exactly the Frobenius-stable rank-4 subgroups containing 1.
inline std::vector<AdmissibleClass> admissible_search(const FieldPtr& Fp) {
    const Field& F = *Fp;
    const int h = F.h();
    if (h < 4) return {};
    // Elements whose Frobenius orbit spans at most 4 dimensions.
    std::vector<Elem> small;
    for (std::uint32_t a = 2; a < F.q(); ++a) {
        Subgroup z(Fp);
        Elem x(a);
        bool ok = true;
        for (int i = 0; i < h; ++i, x = F.sqr(x)) {
            z.insert(x);
            if (z.rank() > 4) { ok = false; break; }
        }
        if (ok) small.push_back(Elem(a));
    }
    auto orbit_span = [&](const Subgroup& base, Elem x) {
        Subgroup s = base;
        for (int i = 0; i < h; ++i, x = F.sqr(x)) s.insert(x);
        return s;
    };
    std::vector<Subgroup> layer{span(Fp, {Elem(1)})}, found;
    while (!layer.empty()) {
        std::vector<Subgroup> next;
        for (auto& T : layer)
            for (Elem x : small) {
                if (T.contains(x)) continue;
                Subgroup U = orbit_span(T, x);
                if (U.rank() > 4) continue;
                (U.rank() == 4 ? found : next).push_back(U);
            }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        layer = std::move(next);
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    std::vector<AdmissibleClass> classes;
    std::vector<bool> used(found.size(), false);
    for (std::size_t i = 0; i < found.size(); ++i) {
        if (used[i]) continue;
        AdmissibleClass c;
        c.span = found[i];
        for (std::size_t j = i; j < found.size(); ++j)
            if (!used[j] && (j == i || scale_frobenius_match(found[i], found[j]))) {
                used[j] = true;
                ++c.members;
            }
        // Basis of the span that contains 1: extend {1} greedily by the echelon basis.
        Subgroup ext(Fp);
        ext.insert(Elem(1));
        int idx = 0;
        for (Elem b : found[i].basis())
            if (ext.insert(b)) c.tuple[idx++] = b;
        c.tuple[3] = Elem(1);
        std::sort(c.tuple.begin(), c.tuple.begin() + 3);
        classes.push_back(c);
    }
    return classes;
}

}  // namespace kmarc
