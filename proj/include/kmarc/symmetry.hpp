#pragma once

#include <kmarc/arcs.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <thread>
#include <vector>

namespace kmarc {

/// x -> M * x^(2^frob): Frobenius on the coordinates first, then the matrix.
struct Collineation {
    Matrix3 M = Matrix3::identity();
    int frob = 0;
    friend bool operator==(const Collineation&, const Collineation&) = default;
    friend auto operator<=>(const Collineation&, const Collineation&) = default;
};

inline Vec3 apply_vec(const Plane& P, const Collineation& g, const Vec3& v) {
    return P.apply(g.M, P.frobenius(v, g.frob));
}

inline ProjPoint apply(const Plane& P, const Collineation& g, const ProjPoint& p) {
    return P.point(apply_vec(P, g, p.c));
}

/// Image of a line: lines transform by the inverse transpose.
inline ProjLine apply(const Plane& P, const Collineation& g, const ProjLine& l) {
    Matrix3 Mi = P.transpose(P.inverse(g.M));
    return P.line(P.apply(Mi, P.frobenius(l.c, g.frob)));
}

/// g1 after g2.
inline Collineation compose(const Plane& P, const Collineation& g1, const Collineation& g2) {
    const int h = P.field().h();
    return {P.normalized(P.mul(g1.M, P.frobenius(g2.M, g1.frob))), (g1.frob + g2.frob) % h};
}

inline Collineation inverse(const Plane& P, const Collineation& g) {
    const int h = P.field().h();
    int k = (h - g.frob) % h;
    return {P.normalized(P.frobenius(P.inverse(g.M), k)), k};
}

inline Collineation normalized(const Plane& P, Collineation g) {
    g.M = P.normalized(g.M);
    g.frob %= P.field().h();
    return g;
}

inline KMArc apply_collineation(const KMArc& A, const Collineation& g) {
    const Plane& P = A.plane();
    std::vector<ProjPoint> img;
    img.reserve(A.size());
    for (auto& p : A.points()) img.push_back(apply(P, g, p));
    return KMArc::from_points(P, std::move(img));
}

/// Projectivity taking N to (0,0,1) and the line m (through N) to X=0.
/// Identity when N and m are already in that position.
inline Matrix3 canonical_frame(const Plane& P, const ProjPoint& N, const ProjLine& m) {
    if (!P.incident(N, m)) throw ArgumentError("center is not on the axis");
    ProjPoint R, U;
    bool haveR = false;
    for (auto& p : P.points_on_line(m))
        if (p != N) { R = p; haveR = true; break; }
    if (!haveR) throw ArgumentError("degenerate line");
    for (std::uint64_t i = 0;; ++i) {
        U = P.point_at(i);
        if (!P.incident(U, m)) break;
    }
    return P.inverse(Matrix3::from_columns(U.c, R.c, N.c));
}

/// Projectivity taking m to X=0 (no condition on points).
inline Matrix3 line_to_axis(const Plane& P, const ProjLine& m) {
    return canonical_frame(P, P.points_on_line(m).front(), m);
}

/// Elation with the given axis and center (center on axis). In the frame
/// with axis X=0 and center (0,0,1) it is (1,x,y) -> (1,x,y+aux).
inline Collineation elation(const Plane& P, const ProjPoint& center, const ProjLine& axis, Elem aux) {
    P.field().check(aux);
    Matrix3 C = canonical_frame(P, center, axis);
    Matrix3 E = Matrix3::identity();
    E(2, 0) = aux;
    return {P.normalized(P.mul(P.inverse(C), P.mul(E, C))), 0};
}

/// Elation test: (M - tr(M) I)^2 = 0. The identity passes.
inline bool is_elation_or_identity(const Plane& P, const Collineation& g) {
    if (g.frob != 0) return false;
    Matrix3 N = g.M;
    Elem tr = N(0, 0) + N(1, 1) + N(2, 2);
    for (int i = 0; i < 3; ++i) N(i, i) += tr;
    Matrix3 N2 = P.mul(N, N);
    return std::all_of(N2.m.begin(), N2.m.end(), [](Elem e) { return e.is_zero(); });
}

// --- elation and translation tests -------------------------------------

struct ElationEntry {
    ProjLine line;
    ProjPoint center;
    Subgroup subgroup;  // in the frame with axis X=0 and center (0,0,1)
};

struct ElationReport {
    bool is_elation = false;
    std::vector<ElationEntry> entries;
};

namespace detail {

// Groups affine points (1,a,z) by a; empty optional if they are not all cosets of one subgroup of the given size.
inline std::optional<Subgroup> column_subgroup(const Plane& P, const std::vector<Vec3>& pts, std::uint64_t size) {
    const Field& F = P.field();
    std::vector<std::vector<Elem>> cols(F.q());
    for (auto& v : pts) {
        if (v[0].is_zero()) continue;
        Elem i0 = F.inv(v[0]);
        cols[F.mul(v[1], i0).v].push_back(F.mul(v[2], i0));
    }
    std::optional<Subgroup> S;
    for (auto& c : cols) {
        if (c.empty()) continue;
        if (!S) {
            S = difference_span(P.field_ptr(), c);
            if (S->size() != size) return std::nullopt;
        }
        if (!is_coset(c, *S)) return std::nullopt;
    }
    if (!S) S = Subgroup(P.field_ptr());
    return S;
}

inline std::vector<Vec3> transform(const Plane& P, const Matrix3& C, const std::vector<ProjPoint>& pts) {
    std::vector<Vec3> out;
    out.reserve(pts.size());
    for (auto& p : pts) out.push_back(P.apply(C, p.c));
    return out;
}

inline std::vector<ProjLine> two_secants(const KMArc& A) {
    const Plane& P = A.plane();
    std::set<ProjLine> ls;
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = i + 1; j < A.size(); ++j) ls.insert(P.line_through(A.points()[i], A.points()[j]));
    return {ls.begin(), ls.end()};
}

}  // namespace detail

/// Elation lines of an arc. For t > 2 the candidates are the t-secants, with
/// center the nucleus; for hyperovals every 2-secant and every center on it is tried.
inline ElationReport is_elation_arc(const KMArc& A) {
    const Plane& P = A.plane();
    ElationReport r;
    if (A.t() > 2) {
        const ProjPoint N = A.t_nucleus();
        for (auto& m : A.t_secants()) {
            auto S = detail::column_subgroup(P, detail::transform(P, canonical_frame(P, N, m), A.points()), A.t());
            if (S) r.entries.push_back({m, N, *S});
        }
    } else {
        for (auto& m : detail::two_secants(A))
            for (auto& R : P.points_on_line(m)) {
                if (A.contains(R)) continue;
                auto S = detail::column_subgroup(P, detail::transform(P, canonical_frame(P, R, m), A.points()), 2);
                if (S) r.entries.push_back({m, R, *S});
            }
    }
    r.is_elation = !r.entries.empty();
    return r;
}

/// Order of the group of elations with axis `line` that stabilize the arc.
inline std::uint64_t axis_elation_group_order(const KMArc& A, const ProjLine& line) {
    const Plane& P = A.plane();
    const Field& F = P.field();
    Matrix3 C = line_to_axis(P, line);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> aff;
    for (auto& v : detail::transform(P, C, A.points())) {
        if (v[0].is_zero()) continue;
        Elem i0 = F.inv(v[0]);
        aff.emplace_back(F.mul(v[1], i0).v, F.mul(v[2], i0).v);
    }
    if (aff.empty()) return 1;
    std::sort(aff.begin(), aff.end());
    std::uint64_t n = 0;
    // Elations with axis X=0 are the translations (x,y) -> (x+a, y+b); any stabilizing one moves aff[0] into aff.
    for (auto& d0 : aff) {
        std::uint32_t da = d0.first ^ aff[0].first, db = d0.second ^ aff[0].second;
        bool ok = true;
        for (auto& p : aff)
            if (!std::binary_search(aff.begin(), aff.end(), std::make_pair(p.first ^ da, p.second ^ db))) {
                ok = false;
                break;
            }
        n += ok;
    }
    return n;
}

/// Whether the elations with axis `line` act transitively on the arc points off the line.
/// The line must be a t-secant (a 2-secant for hyperovals).
inline bool is_translation_arc(const KMArc& A, const ProjLine& line) {
    const Plane& P = A.plane();
    std::size_t on = 0;
    for (auto& p : P.points_on_line(line)) on += A.contains(p);
    if (on != A.t()) throw ArgumentError("translation line must be a t-secant");
    return axis_elation_group_order(A, line) == A.size() - A.t();
}

/// Translation lines among the candidate secants.
inline std::vector<ProjLine> translation_lines(const KMArc& A) {
    std::vector<ProjLine> out;
    auto cands = A.t() > 2 ? A.t_secants() : detail::two_secants(A);
    for (auto& l : cands)
        if (is_translation_arc(A, l)) out.push_back(l);
    return out;
}

// --- frame search --------------------------------------------------------

struct SearchOptions {
    std::uint64_t budget = 20'000'000'000ull;  // candidate frames (including Frobenius choices)
    unsigned threads = 0;                      // 0: KMARC_THREADS or hardware concurrency
};

inline unsigned resolve_threads(unsigned requested) {
    if (requested) return requested;
    if (const char* e = std::getenv("KMARC_THREADS")) {
        int n = std::atoi(e);
        if (n > 0) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

namespace detail {

class FrameSearch {
public:
    FrameSearch(const KMArc& A, const KMArc& B, SearchOptions opt) : A_(A), B_(B), P_(A.plane()), opt_(opt) {
        if (!(A.field() == B.field())) throw ContextError("arcs live in different planes");
        const int h = A.field().h();
        hyper_ = A.t() == 2;
        if (!hyper_ && A.t_secants().size() < 3) throw ArgumentError("frame search needs at least three t-secants");
        std::vector<ProjPoint> src;
        if (hyper_) {
            if (A.size() < 4) throw ArgumentError("arc too small");
            src.assign(A.points().begin(), A.points().begin() + 4);
        } else {
            src = {A.t_nucleus(), A.sections()[0][0], A.sections()[1][0], A.sections()[2][0]};
        }
        for (int k = 0; k < h; ++k) {
            Matrix3 S = P_.frame_matrix(P_.frobenius(src[0].c, k), P_.frobenius(src[1].c, k),
                                        P_.frobenius(src[2].c, k), P_.frobenius(src[3].c, k));
            sinv_.push_back(P_.inverse(S));
            std::vector<Vec3> fr;
            for (auto& p : A.points())
                if (std::find(src.begin(), src.end(), p) == src.end()) fr.push_back(P_.frobenius(p.c, k));
            // Spread the early tests over different secants.
            frob_pts_.push_back(interleave(fr));
        }
        memberB_ = PointSet(P_, B.points());
        if (!hyper_) {
            secB_.assign(B.size(), 0);
            for (std::size_t s = 0; s < B.sections().size(); ++s)
                for (auto& p : B.sections()[s]) secB_[pos(B, p)] = static_cast<int>(s);
        }
    }

    /// Visits every collineation mapping A onto B; stops early when `first` is set.
    std::vector<Collineation> run(bool first) {
        const std::size_t n = B_.size();
        unsigned T = std::min<unsigned>(resolve_threads(opt_.threads), static_cast<unsigned>(n));
        std::vector<std::vector<std::pair<std::size_t, Collineation>>> res(T);
        std::atomic<std::size_t> best{SIZE_MAX};
        std::atomic<bool> over{false};
        std::atomic<std::uint64_t> found{0};
        auto worker = [&](unsigned tid) {
            for (std::size_t i1 = tid; i1 < n; i1 += T) {
                if (over) return;
                if (first && i1 > best) return;
                std::vector<Collineation> local;
                std::uint64_t cost = scan(i1, first, local);
                spent_ += cost;
                if (spent_ > opt_.budget) over = true;
                found += local.size();
                for (auto& g : local) res[tid].emplace_back(i1, g);
                if (first && !local.empty()) {
                    std::size_t cur = best;
                    while (i1 < cur && !best.compare_exchange_weak(cur, i1)) {}
                    return;
                }
            }
        };
        if (T == 1) worker(0);
        else {
            std::vector<std::thread> th;
            for (unsigned t = 0; t < T; ++t) th.emplace_back(worker, t);
            for (auto& x : th) x.join();
        }
        std::vector<std::pair<std::size_t, Collineation>> all;
        for (auto& r : res) all.insert(all.end(), r.begin(), r.end());
        std::sort(all.begin(), all.end());
        if (first && !all.empty()) return {all.front().second};
        if (over) throw ResourceError("frame search budget exhausted", found);
        std::vector<Collineation> out;
        for (auto& [i, g] : all) out.push_back(g);
        return out;
    }

private:
    static std::size_t pos(const KMArc& X, const ProjPoint& p) {
        const Plane& P = X.plane();
        auto it = std::lower_bound(X.points().begin(), X.points().end(), p,
                                   [&](const ProjPoint& a, const ProjPoint& b) { return P.index(a) < P.index(b); });
        return static_cast<std::size_t>(it - X.points().begin());
    }

    static std::vector<Vec3> interleave(const std::vector<Vec3>& v) {
        std::vector<Vec3> out;
        const std::size_t stride = 7;
        for (std::size_t s = 0; s < stride; ++s)
            for (std::size_t i = s; i < v.size(); i += stride) out.push_back(v[i]);
        return out;
    }

    bool in_B(const Vec3& y) const {
        const Field& F = P_.field();
        const std::uint64_t q = F.q();
        std::uint64_t idx;
        if (!y[0].is_zero()) {
            Elem i0 = F.inv(y[0]);
            idx = 1 + q + static_cast<std::uint64_t>(F.mul(y[1], i0).v) * q + F.mul(y[2], i0).v;
        } else if (!y[1].is_zero()) {
            idx = 1 + F.div(y[2], y[1]).v;
        } else {
            idx = 0;
        }
        return memberB_.contains(idx);
    }

    // Tries all frames whose second point is B[i1]; returns the number of candidates examined.
    std::uint64_t scan(std::size_t i1, bool first, std::vector<Collineation>& out) {
        const auto& Bp = B_.points();
        const std::size_t n = Bp.size();
        const int h = P_.field().h();
        std::uint64_t cost = 0;
        Vec3 f0 = hyper_ ? Vec3{} : B_.t_nucleus().c;
        auto try_tuple = [&](const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& a3, const Matrix3& binv) {
            Vec3 c = P_.apply(binv, a3);
            if (c[0].is_zero() || c[1].is_zero() || c[2].is_zero()) return false;
            Matrix3 Tm = Matrix3::from_columns(P_.scale(c[0], a0), P_.scale(c[1], a1), P_.scale(c[2], a2));
            for (int k = 0; k < h; ++k) {
                ++cost;
                Matrix3 M = P_.mul(Tm, sinv_[k]);
                bool ok = true;
                for (auto& x : frob_pts_[k])
                    if (!in_B(P_.apply(M, x))) { ok = false; break; }
                if (ok) {
                    out.push_back({P_.normalized(M), k});
                    if (first) return true;
                }
            }
            return false;
        };
        if (hyper_) {
            for (std::size_t i0 = 0; i0 < n; ++i0) {
                if (i0 == i1) continue;
                for (std::size_t i2 = 0; i2 < n; ++i2) {
                    if (i2 == i0 || i2 == i1) continue;
                    Matrix3 binv = P_.inverse(Matrix3::from_columns(Bp[i0].c, Bp[i1].c, Bp[i2].c));
                    for (std::size_t i3 = 0; i3 < n; ++i3) {
                        if (i3 == i0 || i3 == i1 || i3 == i2) continue;
                        if (try_tuple(Bp[i0].c, Bp[i1].c, Bp[i2].c, Bp[i3].c, binv) && first) return cost;
                    }
                }
            }
            return cost;
        }
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            if (secB_[i2] == secB_[i1]) continue;
            Matrix3 binv = P_.inverse(Matrix3::from_columns(f0, Bp[i1].c, Bp[i2].c));
            for (std::size_t i3 = 0; i3 < n; ++i3) {
                if (secB_[i3] == secB_[i1] || secB_[i3] == secB_[i2]) continue;
                if (try_tuple(f0, Bp[i1].c, Bp[i2].c, Bp[i3].c, binv) && first) return cost;
            }
        }
        return cost;
    }

    const KMArc& A_;
    const KMArc& B_;
    Plane P_;
    SearchOptions opt_;
    bool hyper_ = false;
    std::vector<Matrix3> sinv_;
    std::vector<std::vector<Vec3>> frob_pts_;
    PointSet memberB_;
    std::vector<int> secB_;
    std::atomic<std::uint64_t> spent_{0};
};

}  // namespace detail

/// Some collineation mapping A onto B, or nothing if none exists.
inline std::optional<Collineation> equivalent(const KMArc& A, const KMArc& B, SearchOptions opt = {}) {
    if (!(A.field() == B.field())) throw ContextError("arcs live in different planes");
    if (A.t() != B.t() || A.size() != B.size()) return std::nullopt;
    auto r = detail::FrameSearch(A, B, opt).run(true);
    if (r.empty()) return std::nullopt;
    return r.front();
}

struct StabilizerResult {
    std::uint64_t order = 0;
    std::vector<Collineation> elements;
    std::vector<Collineation> generators;
    std::vector<std::vector<ProjPoint>> orbits;  // sorted by size, then by first point
    std::uint64_t projectivity_order = 0;
    std::uint64_t elation_order = 0;  // elations in the stabilizer, identity included
};

/// Full collineation stabilizer by exhaustive frame search.
inline StabilizerResult stabilizer(const KMArc& A, SearchOptions opt = {}) {
    const Plane& P = A.plane();
    StabilizerResult r;
    r.elements = detail::FrameSearch(A, A, opt).run(false);
    std::sort(r.elements.begin(), r.elements.end());
    r.order = r.elements.size();
    const auto& pts = A.points();
    const std::size_t n = pts.size();
    auto position = [&](const ProjPoint& p) {
        auto it = std::lower_bound(pts.begin(), pts.end(), p,
                                   [&](const ProjPoint& a, const ProjPoint& b) { return P.index(a) < P.index(b); });
        return static_cast<std::uint32_t>(it - pts.begin());
    };
    using Perm = std::vector<std::uint32_t>;
    std::vector<Perm> perms;
    for (auto& g : r.elements) {
        Perm p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = position(apply(P, g, pts[i]));
        perms.push_back(std::move(p));
        r.projectivity_order += g.frob == 0;
        r.elation_order += is_elation_or_identity(P, g);
    }
    // Orbits via union-find.
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& p : perms)
        for (std::uint32_t i = 0; i < n; ++i) parent[find(i)] = find(p[i]);
    std::map<std::uint32_t, std::vector<ProjPoint>> orb;
    for (std::uint32_t i = 0; i < n; ++i) orb[find(i)].push_back(pts[i]);
    for (auto& [k, v] : orb) r.orbits.push_back(v);
    std::sort(r.orbits.begin(), r.orbits.end(), [&](auto& a, auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : P.index(a[0]) < P.index(b[0]);
    });
    // Greedy generating set: add the first element not yet generated.
    std::set<Perm> closure;
    Perm id(n);
    std::iota(id.begin(), id.end(), 0u);
    closure.insert(id);
    std::vector<Perm> gens;
    for (std::size_t e = 0; e < perms.size(); ++e) {
        if (closure.count(perms[e])) continue;
        gens.push_back(perms[e]);
        r.generators.push_back(r.elements[e]);
        std::vector<Perm> frontier(closure.begin(), closure.end());
        while (!frontier.empty()) {
            std::vector<Perm> next;
            for (auto& x : frontier)
                for (auto& g : gens) {
                    Perm y(n);
                    for (std::size_t i = 0; i < n; ++i) y[i] = g[x[i]];
                    if (closure.insert(y).second) next.push_back(std::move(y));
                }
            frontier = std::move(next);
        }
    }
    return r;
}

}  // namespace kmarc
