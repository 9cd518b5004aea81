#pragma once

#include <kmarc/f2linalg.hpp>
#include <kmarc/plane.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace kmarc {

/// Intersection size of every line that meets the point set.
struct Census {
    std::vector<std::pair<ProjLine, std::uint32_t>> lines;  // sorted by line index, sizes > 0
    std::map<std::uint32_t, std::uint64_t> histogram;       // size -> number of lines, 0 included
};

inline Census census(const Plane& P, const std::vector<ProjPoint>& pts) {
    Census c;
    auto bump = [&](auto& counts) {
        for (auto& p : pts)
            for (auto& l : P.lines_through(p)) ++counts[P.index(l)];
    };
    std::vector<std::pair<std::uint64_t, std::uint32_t>> nz;
    if (P.num_lines() <= (1ull << 24)) {
        std::vector<std::uint32_t> counts(P.num_lines(), 0);
        bump(counts);
        for (std::uint64_t i = 0; i < counts.size(); ++i)
            if (counts[i]) nz.emplace_back(i, counts[i]);
    } else {
        std::unordered_map<std::uint64_t, std::uint32_t> counts;
        bump(counts);
        nz.assign(counts.begin(), counts.end());
        std::sort(nz.begin(), nz.end());
    }
    std::uint64_t met = 0;
    for (auto& [i, n] : nz) {
        c.lines.emplace_back(P.line_at(i), n);
        ++c.histogram[n];
        ++met;
    }
    if (P.num_lines() > met) c.histogram[0] = P.num_lines() - met;
    return c;
}

struct VerificationReport {
    bool is_km = false;
    std::optional<std::uint32_t> t;
    std::optional<ProjPoint> nucleus;
    std::uint64_t secant_count = 0;  // number of t-secants
    std::map<std::uint32_t, std::uint64_t> histogram;
    std::optional<ProjLine> witness;  // first line that breaks the KM property
    std::string failure;
};

namespace detail {

inline std::vector<ProjPoint> normalize_set(const Plane& P, std::vector<ProjPoint> pts) {
    for (auto& p : pts) p = P.point(p.c);
    std::sort(pts.begin(), pts.end(), [&](const ProjPoint& a, const ProjPoint& b) { return P.index(a) < P.index(b); });
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) throw ArgumentError("point set has duplicates");
    return pts;
}

}  // namespace detail

/// Census-based check that pts is a KM-arc: every line meets it in 0, 2 or t
/// points and |pts| = q + t. For t > 2 the t-secants must share a point.
inline VerificationReport verify_km(const Plane& P, const std::vector<ProjPoint>& input) {
    auto pts = detail::normalize_set(P, input);
    VerificationReport r;
    const auto q = P.q();
    Census c = census(P, pts);
    r.histogram = c.histogram;
    if (pts.size() <= q + 1) {
        r.failure = "set has " + std::to_string(pts.size()) + " points, a KM-arc needs more than q+1";
        return r;
    }
    const std::uint32_t t = static_cast<std::uint32_t>(pts.size() - q);
    for (auto& [l, n] : c.lines)
        if (n != 2 && n != t) {
            r.witness = l;
            r.failure = "line " + P.to_hex(l) + " meets the set in " + std::to_string(n) + " points";
            return r;
        }
    r.t = t;
    std::vector<ProjLine> sec;
    for (auto& [l, n] : c.lines)
        if (n == t) sec.push_back(l);
    r.secant_count = sec.size();
    if (t > 2) {
        if (sec.size() < 2) {
            r.failure = "fewer than two t-secants";
            return r;
        }
        ProjPoint N = P.meet(sec[0], sec[1]);
        for (auto& l : sec)
            if (!P.incident(N, l)) {
                r.witness = l;
                r.failure = "t-secant " + P.to_hex(l) + " misses the common point of the others";
                return r;
            }
        r.nucleus = N;
    }
    r.is_km = true;
    return r;
}

/// A verified KM-arc. Points are sorted by index; t-secants and their sections are cached.
class KMArc {
public:
    static KMArc from_points(const Plane& P, std::vector<ProjPoint> pts) {
        auto rep = verify_km(P, pts);
        if (!rep.is_km) throw NotKMArcError("not a KM-arc: " + rep.failure);
        KMArc a;
        a.P_ = P;
        a.pts_ = detail::normalize_set(P, std::move(pts));
        a.t_ = *rep.t;
        a.nucleus_ = rep.nucleus;
        a.member_ = PointSet(P, a.pts_);
        if (a.t_ > 2) {
            for (auto& l : P.lines_through(*a.nucleus_)) {
                std::vector<ProjPoint> sec;
                for (auto& p : P.points_on_line(l))
                    if (a.member_.contains(p)) sec.push_back(p);
                if (sec.size() == a.t_) {
                    a.secants_.push_back(l);
                    a.sections_.push_back(std::move(sec));
                }
            }
        }
        return a;
    }

    const Plane& plane() const { return P_; }
    const Field& field() const { return P_.field(); }
    std::uint32_t q() const { return P_.q(); }
    std::uint32_t t() const { return t_; }
    std::size_t size() const { return pts_.size(); }
    const std::vector<ProjPoint>& points() const { return pts_; }
    bool contains(const ProjPoint& p) const { return member_.contains(p); }

    /// Absent for hyperovals (t = 2).
    const std::optional<ProjPoint>& nucleus() const { return nucleus_; }

    /// The t-nucleus; hyperovals have none.
    ProjPoint t_nucleus() const {
        if (!nucleus_) throw ArgumentError("a hyperoval (t = 2) has no t-nucleus");
        return *nucleus_;
    }

    /// t-secants through the nucleus, in index order (empty when t = 2).
    const std::vector<ProjLine>& t_secants() const { return secants_; }
    const std::vector<std::vector<ProjPoint>>& sections() const { return sections_; }

    bool operator==(const KMArc& o) const { return P_.field() == o.P_.field() && pts_ == o.pts_; }

private:
    Plane P_;
    std::vector<ProjPoint> pts_;
    std::uint32_t t_ = 0;
    std::optional<ProjPoint> nucleus_;
    PointSet member_;
    std::vector<ProjLine> secants_;
    std::vector<std::vector<ProjPoint>> sections_;
};

/// Affine coordinate on a line: inf -> infinity, zero -> 0, one -> 1.
class LineChart {
public:
    LineChart(const Plane& P, const ProjPoint& inf, const ProjPoint& zero, const ProjPoint& one)
        : P_(P), u_(inf.c), w_(zero.c) {
        if (inf == zero || inf == one || zero == one) throw ArgumentError("chart needs three distinct points");
        if (!P.collinear(inf, zero, one)) throw ArgumentError("chart points are not collinear");
        const Field& F = P.field();
        for (int i = 0; i < 3 && !found_; ++i)
            for (int j = i + 1; j < 3 && !found_; ++j) {
                Elem d = F.mul(w_[i], u_[j]) + F.mul(w_[j], u_[i]);
                if (!d.is_zero()) {
                    i_ = i;
                    j_ = j;
                    dinv_ = F.inv(d);
                    found_ = true;
                }
            }
        Elem s = raw(one);
        scale_ = F.inv(s);
    }

    /// Value of a point on the line other than the point at infinity.
    Elem operator()(const ProjPoint& x) const { return P_.field().mul(raw(x), scale_); }

private:
    // x = a*w + b*u; returns b/a.
    Elem raw(const ProjPoint& x) const {
        const Field& F = P_.field();
        Elem a = F.mul(F.mul(x[i_], u_[j_]) + F.mul(x[j_], u_[i_]), dinv_);
        Elem b = F.mul(F.mul(w_[i_], x[j_]) + F.mul(w_[j_], x[i_]), dinv_);
        if (a.is_zero()) throw ArgumentError("point at infinity has no affine value");
        return F.div(b, a);
    }

    Plane P_;
    Vec3 u_, w_;
    int i_ = 0, j_ = 1;
    Elem dinv_, scale_;
    bool found_ = false;
};

/// Affine values of the section on the i-th t-secant: the nucleus goes to
/// infinity and the two least other points of the line go to 0 and 1.
inline std::vector<Elem> section_values(const KMArc& A, std::size_t i) {
    const Plane& P = A.plane();
    ProjPoint N = A.t_nucleus();
    std::vector<ProjPoint> others;
    for (auto& p : P.points_on_line(A.t_secants().at(i)))
        if (p != N) others.push_back(p);
    LineChart chart(P, N, others[0], others[1]);
    std::vector<Elem> vals;
    for (auto& p : A.sections()[i]) vals.push_back(chart(p));
    std::sort(vals.begin(), vals.end());
    return vals;
}

/// Power sums of the values vanish for exponents 1..t-2. Vacuous when t = 2.
inline bool vandermonde_check(const Field& F, const std::vector<Elem>& values, std::uint32_t t) {
    for (std::uint32_t k = 1; k + 2 <= t; ++k) {
        Elem s;
        for (Elem y : values) s += F.pow(y, k);
        if (!s.is_zero()) return false;
    }
    return true;
}

inline bool vandermonde_check(const Field& F, const std::vector<Elem>& values) {
    return vandermonde_check(F, values, static_cast<std::uint32_t>(values.size()));
}

struct LinearSetResult {
    bool linear = false;
    std::vector<ProjPoint> heads;
};

/// Whether collinear points form an F2-linear set of size 2^j + 1: some head H
/// exists such that, with H at infinity, the other points form an additive coset.
inline LinearSetResult f2linear_section_check(const Plane& P, std::vector<ProjPoint> pts) {
    pts = detail::normalize_set(P, std::move(pts));
    LinearSetResult r;
    if (pts.size() < 3) throw ArgumentError("need at least three points");
    ProjLine l = P.line_through(pts[0], pts[1]);
    for (auto& p : pts)
        if (!P.incident(p, l)) throw ArgumentError("points are not collinear");
    std::size_t n = pts.size() - 1;
    if (n & (n - 1)) return r;
    for (std::size_t h = 0; h < pts.size(); ++h) {
        std::vector<ProjPoint> rest;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (i != h) rest.push_back(pts[i]);
        LineChart chart(P, pts[h], rest[0], rest[1]);
        std::vector<Elem> vals;
        for (auto& p : rest) vals.push_back(chart(p));
        if (is_affine_subspace(P.field_ptr(), vals)) r.heads.push_back(pts[h]);
    }
    r.linear = !r.heads.empty();
    return r;
}

struct PencilResult {
    bool linear = false;
    std::vector<ProjLine> heads;
};

/// Dualizes the t-secants through the nucleus to points of a line and tests
/// them for F2-linearity. Heads are reported as lines.
inline PencilResult linear_pencil_check(const KMArc& A) {
    const Plane& P = A.plane();
    if (A.t() <= 2) throw ArgumentError("pencil check needs t > 2");
    std::vector<ProjPoint> dual;
    for (auto& l : A.t_secants()) dual.push_back(ProjPoint{{l.c}});
    PencilResult r;
    if (dual.size() < 3) return r;
    auto lin = f2linear_section_check(P, dual);
    r.linear = lin.linear;
    for (auto& h : lin.heads) r.heads.push_back(ProjLine{{h.c}});
    return r;
}

}  // namespace kmarc
