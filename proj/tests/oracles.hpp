#pragma once
// Brute-force reference implementations. Deliberately naive: no tables, no
// echelon forms, just enumeration over the whole field or plane.

#include <kmarc/symmetry.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracle {

using kmarc::Elem;

// Schoolbook carry-less product reduced mod `mod`.
inline std::uint32_t mul(std::uint32_t a, std::uint32_t b, std::uint32_t mod, int h) {
    std::uint64_t r = 0;
    for (int i = 0; i < h; ++i)
        if (b >> i & 1) r ^= static_cast<std::uint64_t>(a) << i;
    for (int d = 2 * h; d >= h; --d)
        if (r >> d & 1) r ^= static_cast<std::uint64_t>(mod) << (d - h);
    return static_cast<std::uint32_t>(r);
}

inline std::uint32_t pow(std::uint32_t a, std::uint64_t e, std::uint32_t mod, int h) {
    std::uint32_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r = mul(r, a, mod, h);
    return r;
}

// Polynomial product over F2 without reduction.
inline std::uint64_t polymul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    for (int i = 0; i < 32; ++i)
        if (b >> i & 1) r ^= a << i;
    return r;
}

// Irreducible iff not a product of two polynomials of positive degree.
inline bool irreducible(std::uint32_t p, int h) {
    for (int d = 1; d <= h / 2; ++d)
        for (std::uint64_t f = 1ull << d; f < (2ull << d); ++f)
            for (std::uint64_t g = 1ull << (h - d); g < (2ull << (h - d)); ++g)
                if (polymul(f, g) == p) return false;
    return true;
}

inline int trace(std::uint32_t a, std::uint32_t mod, int h) {
    std::uint32_t t = 0, y = a;
    for (int i = 0; i < h; ++i) {
        t ^= y;
        y = mul(y, y, mod, h);
    }
    return static_cast<int>(t);
}

inline int tr(const kmarc::Field& F, Elem a) { return trace(a.v, F.modulus(), F.h()); }

// XOR closure of a set of field elements.
inline std::set<std::uint32_t> closure(const std::vector<Elem>& gens) {
    std::set<std::uint32_t> s{0};
    for (Elem g : gens) {
        std::vector<std::uint32_t> add;
        for (auto x : s) add.push_back(x ^ g.v);
        s.insert(add.begin(), add.end());
    }
    return s;
}

inline std::set<std::uint32_t> dual(const kmarc::Field& F, const std::set<std::uint32_t>& S) {
    std::set<std::uint32_t> out;
    for (std::uint32_t y = 0; y < F.q(); ++y) {
        bool ok = true;
        for (auto x : S)
            if (tr(F, Elem(mul(x, y, F.modulus(), F.h()))) != 0) { ok = false; break; }
        if (ok) out.insert(y);
    }
    return out;
}

inline std::vector<Elem> to_elems(const std::set<std::uint32_t>& s) {
    std::vector<Elem> v;
    for (auto x : s) v.push_back(Elem(x));
    return v;
}

// A coset of S containing vals[0] must be vals[0] + S.
inline bool is_coset(const std::vector<Elem>& vals, const std::set<std::uint32_t>& S) {
    if (vals.empty()) return true;
    std::set<std::uint32_t> vs, co;
    for (Elem v : vals) vs.insert(v.v);
    if (vs.size() != vals.size()) return false;
    for (auto s : S) co.insert(s ^ vals[0].v);
    return vs == co;
}

// Points on a line by testing incidence against every point of the plane.
inline std::vector<kmarc::ProjPoint> points_on_line(const kmarc::Plane& P, const kmarc::ProjLine& l) {
    std::vector<kmarc::ProjPoint> out;
    for (auto& p : P.all_points())
        if (P.incident(p, l)) out.push_back(p);
    return out;
}

// Intersection size of every line of the plane.
inline std::map<std::uint32_t, std::uint64_t> histogram(const kmarc::Plane& P, const std::vector<kmarc::ProjPoint>& A) {
    std::map<std::uint32_t, std::uint64_t> h;
    for (auto& l : P.all_lines()) {
        std::uint32_t n = 0;
        for (auto& p : A) n += P.incident(p, l);
        ++h[n];
    }
    return h;
}

inline bool is_km(const kmarc::Plane& P, const std::vector<kmarc::ProjPoint>& A, std::uint32_t* t_out = nullptr) {
    std::uint32_t t = static_cast<std::uint32_t>(A.size()) - P.q();
    if (A.size() <= P.q() + 1) return false;
    for (auto& [n, c] : histogram(P, A))
        if (n != 0 && n != 2 && n != t) return false;
    std::vector<kmarc::ProjLine> sec;
    for (auto& l : P.all_lines()) {
        std::uint32_t n = 0;
        for (auto& p : A) n += P.incident(p, l);
        if (n == t && t > 2) sec.push_back(l);
    }
    if (t > 2) {
        for (auto& p : P.all_points()) {
            bool all = true;
            for (auto& l : sec) all = all && P.incident(p, l);
            if (all) {
                if (t_out) *t_out = t;
                return true;
            }
        }
        return false;
    }
    if (t_out) *t_out = t;
    return true;
}

inline bool stabilizes(const kmarc::KMArc& A, const kmarc::Collineation& g) {
    for (auto& p : A.points())
        if (!A.contains(kmarc::apply(A.plane(), g, p))) return false;
    return true;
}

// Orbit of a point under the group generated by gens (BFS on points).
inline std::set<kmarc::ProjPoint> orbit(const kmarc::Plane& P, const std::vector<kmarc::Collineation>& gens,
                                        const kmarc::ProjPoint& p) {
    std::set<kmarc::ProjPoint> seen{p};
    std::vector<kmarc::ProjPoint> todo{p};
    while (!todo.empty()) {
        auto x = todo.back();
        todo.pop_back();
        for (auto& g : gens) {
            auto y = kmarc::apply(P, g, x);
            if (seen.insert(y).second) todo.push_back(y);
        }
    }
    return seen;
}

// Elation arc by definition: the stabilizing elations with this center and axis
// are transitive on the arc points of every t-secant other than the axis.
inline bool elation_with(const kmarc::KMArc& A, const kmarc::ProjPoint& N, const kmarc::ProjLine& axis) {
    const auto& P = A.plane();
    std::vector<kmarc::Collineation> E;
    for (std::uint32_t mu = 1; mu < P.q(); ++mu) {
        auto g = kmarc::elation(P, N, axis, Elem(mu));
        if (stabilizes(A, g)) E.push_back(g);
    }
    if (A.t() == 2) return !E.empty();
    for (std::size_t i = 0; i < A.t_secants().size(); ++i) {
        if (A.t_secants()[i] == axis) continue;
        auto o = orbit(P, E, A.sections()[i][0]);
        if (o.size() != A.t()) return false;
    }
    return true;
}

// Translation by definition: elations with the axis, over every center on it, generate a
// group that is transitive on the arc points off the axis.
inline bool translation_with(const kmarc::KMArc& A, const kmarc::ProjLine& axis) {
    const auto& P = A.plane();
    std::vector<kmarc::Collineation> E;
    for (auto& c : P.points_on_line(axis))
        for (std::uint32_t mu = 1; mu < P.q(); ++mu) {
            auto g = kmarc::elation(P, c, axis, Elem(mu));
            if (stabilizes(A, g)) E.push_back(g);
        }
    kmarc::ProjPoint start;
    std::size_t off = 0;
    for (auto& p : A.points())
        if (!P.incident(p, axis)) {
            if (!off) start = p;
            ++off;
        }
    return orbit(P, E, start).size() == off;
}

// Stabilizer order by enumerating images of four arc points in general position
// (no nucleus pinning), an independent route to the frame search.
inline std::uint64_t stabilizer_order(const kmarc::KMArc& A) {
    const auto& P = A.plane();
    const auto& pts = A.points();
    std::vector<kmarc::ProjPoint> fr;
    for (auto& p : pts) {
        bool ok = true;
        for (std::size_t i = 0; i < fr.size() && ok; ++i)
            for (std::size_t j = i + 1; j < fr.size() && ok; ++j)
                if (P.collinear(fr[i], fr[j], p)) ok = false;
        if (ok) fr.push_back(p);
        if (fr.size() == 4) break;
    }
    std::set<kmarc::Collineation> found;
    const int h = P.field().h();
    for (auto& a : pts)
        for (auto& b : pts)
            for (auto& c : pts)
                for (auto& d : pts) {
                    if (P.collinear(a, b, c) || P.collinear(a, b, d) || P.collinear(a, c, d) ||
                        P.collinear(b, c, d) || a == b)
                        continue;
                    auto T = P.frame_matrix(a.c, b.c, c.c, d.c);
                    for (int k = 0; k < h; ++k) {
                        auto S = P.frame_matrix(P.frobenius(fr[0].c, k), P.frobenius(fr[1].c, k),
                                                P.frobenius(fr[2].c, k), P.frobenius(fr[3].c, k));
                        kmarc::Collineation g{P.normalized(P.mul(T, P.inverse(S))), k};
                        if (stabilizes(A, g)) found.insert(g);
                    }
                }
    return found.size();
}

}  // namespace oracle
