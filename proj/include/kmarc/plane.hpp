#pragma once

#include <kmarc/gf2e.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace kmarc {

using Vec3 = std::array<Elem, 3>;

namespace detail {

struct Triple {
    Vec3 c{};
    const Elem& operator[](int i) const { return c[i]; }
    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

}  // namespace detail

/// Point of PG(2,q), normalized so the first nonzero coordinate is 1.
struct ProjPoint : detail::Triple {};
/// Line a0*X0 + a1*X1 + a2*X2 = 0, coefficients normalized like points.
struct ProjLine : detail::Triple {};

/// 3x3 matrix over GF(2^h), row-major.
struct Matrix3 {
    std::array<Elem, 9> m{};
    Elem& operator()(int r, int c) { return m[3 * r + c]; }
    Elem operator()(int r, int c) const { return m[3 * r + c]; }
    friend bool operator==(const Matrix3&, const Matrix3&) = default;
    friend auto operator<=>(const Matrix3&, const Matrix3&) = default;

    static Matrix3 identity() {
        Matrix3 I;
        I(0, 0) = I(1, 1) = I(2, 2) = Elem(1);
        return I;
    }
    static Matrix3 diag(Elem a, Elem b, Elem c) {
        Matrix3 D;
        D(0, 0) = a;
        D(1, 1) = b;
        D(2, 2) = c;
        return D;
    }
    static Matrix3 from_columns(const Vec3& a, const Vec3& b, const Vec3& c) {
        Matrix3 M;
        for (int r = 0; r < 3; ++r) {
            M(r, 0) = a[r];
            M(r, 1) = b[r];
            M(r, 2) = c[r];
        }
        return M;
    }
};

/// The projective plane PG(2,q) over a given field. Points and lines are
/// indexed in the lexicographic order of their normalized coordinates.
class Plane {
public:
    Plane() = default;
    explicit Plane(FieldPtr F) : F_(std::move(F)) {}
    explicit Plane(int h) : F_(make_field(h)) {}

    const FieldPtr& field_ptr() const { return F_; }
    const Field& field() const { return *F_; }
    std::uint32_t q() const { return F_->q(); }
    std::uint64_t num_points() const { std::uint64_t q = F_->q(); return q * q + q + 1; }
    std::uint64_t num_lines() const { return num_points(); }

    // --- vector arithmetic -------------------------------------------------

    Vec3 scale(Elem k, const Vec3& v) const { return {F_->mul(k, v[0]), F_->mul(k, v[1]), F_->mul(k, v[2])}; }
    static Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
    Elem dot(const Vec3& a, const Vec3& b) const {
        return F_->mul(a[0], b[0]) + F_->mul(a[1], b[1]) + F_->mul(a[2], b[2]);
    }
    Vec3 cross(const Vec3& a, const Vec3& b) const {
        // Characteristic 2: the minus signs vanish.
        return {F_->mul(a[1], b[2]) + F_->mul(a[2], b[1]),
                F_->mul(a[2], b[0]) + F_->mul(a[0], b[2]),
                F_->mul(a[0], b[1]) + F_->mul(a[1], b[0])};
    }
    Vec3 frobenius(const Vec3& v, int k) const {
        return {F_->frobenius(v[0], k), F_->frobenius(v[1], k), F_->frobenius(v[2], k)};
    }

    Vec3 normalized(const Vec3& v) const {
        for (int i = 0; i < 3; ++i) {
            F_->check(v[i]);
        }
        for (int i = 0; i < 3; ++i)
            if (!v[i].is_zero()) return scale(F_->inv(v[i]), v);
        throw ArgumentError("zero vector is not a projective point");
    }

    ProjPoint point(Elem a, Elem b, Elem c) const { return point(Vec3{a, b, c}); }
    ProjPoint point(const Vec3& v) const { return ProjPoint{{normalized(v)}}; }
    ProjLine line(Elem a, Elem b, Elem c) const { return line(Vec3{a, b, c}); }
    ProjLine line(const Vec3& v) const { return ProjLine{{normalized(v)}}; }

    // --- indexing ----------------------------------------------------------

    std::uint64_t index(const detail::Triple& t) const {
        const std::uint64_t q = F_->q();
        if (t[0].is_zero()) return t[1].is_zero() ? 0 : 1 + t[2].v;
        return 1 + q + static_cast<std::uint64_t>(t[1].v) * q + t[2].v;
    }

    ProjPoint point_at(std::uint64_t i) const { return ProjPoint{{triple_at(i)}}; }
    ProjLine line_at(std::uint64_t i) const { return ProjLine{{triple_at(i)}}; }

    std::vector<ProjPoint> all_points() const {
        std::vector<ProjPoint> out;
        out.reserve(num_points());
        for (std::uint64_t i = 0; i < num_points(); ++i) out.push_back(point_at(i));
        return out;
    }

    std::vector<ProjLine> all_lines() const {
        std::vector<ProjLine> out;
        out.reserve(num_lines());
        for (std::uint64_t i = 0; i < num_lines(); ++i) out.push_back(line_at(i));
        return out;
    }

    // --- incidence ---------------------------------------------------------

    bool incident(const ProjPoint& p, const ProjLine& l) const { return dot(p.c, l.c).is_zero(); }

    ProjLine line_through(const ProjPoint& p, const ProjPoint& r) const {
        if (p == r) throw ArgumentError("line_through needs two distinct points");
        return line(cross(p.c, r.c));
    }

    ProjPoint meet(const ProjLine& a, const ProjLine& b) const {
        if (a == b) throw ArgumentError("meet needs two distinct lines");
        return point(cross(a.c, b.c));
    }

    /// The q+1 points of l, sorted by index.
    std::vector<ProjPoint> points_on_line(const ProjLine& l) const {
        std::vector<ProjPoint> out;
        for (auto& t : solve_dual(l.c)) out.push_back(ProjPoint{{t}});
        return out;
    }

    /// The q+1 lines through p, sorted by index.
    std::vector<ProjLine> lines_through(const ProjPoint& p) const {
        std::vector<ProjLine> out;
        for (auto& t : solve_dual(p.c)) out.push_back(ProjLine{{t}});
        return out;
    }

    bool collinear(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c) const {
        return dot(cross(a.c, b.c), c.c).is_zero();
    }

    // --- matrices ----------------------------------------------------------

    Matrix3 mul(const Matrix3& A, const Matrix3& B) const {
        Matrix3 C;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                C(r, c) = F_->mul(A(r, 0), B(0, c)) + F_->mul(A(r, 1), B(1, c)) + F_->mul(A(r, 2), B(2, c));
        return C;
    }

    Vec3 apply(const Matrix3& A, const Vec3& v) const {
        return {F_->mul(A(0, 0), v[0]) + F_->mul(A(0, 1), v[1]) + F_->mul(A(0, 2), v[2]),
                F_->mul(A(1, 0), v[0]) + F_->mul(A(1, 1), v[1]) + F_->mul(A(1, 2), v[2]),
                F_->mul(A(2, 0), v[0]) + F_->mul(A(2, 1), v[1]) + F_->mul(A(2, 2), v[2])};
    }

    Elem det(const Matrix3& A) const {
        return F_->mul(A(0, 0), F_->mul(A(1, 1), A(2, 2)) + F_->mul(A(1, 2), A(2, 1))) +
               F_->mul(A(0, 1), F_->mul(A(1, 0), A(2, 2)) + F_->mul(A(1, 2), A(2, 0))) +
               F_->mul(A(0, 2), F_->mul(A(1, 0), A(2, 1)) + F_->mul(A(1, 1), A(2, 0)));
    }

    Matrix3 inverse(const Matrix3& A) const {
        Elem d = det(A);
        if (d.is_zero()) throw ArgumentError("singular matrix");
        Elem di = F_->inv(d);
        Matrix3 R;
        auto cof = [&](int r0, int r1, int c0, int c1) {
            return F_->mul(A(r0, c0), A(r1, c1)) + F_->mul(A(r0, c1), A(r1, c0));
        };
        R(0, 0) = cof(1, 2, 1, 2); R(0, 1) = cof(0, 2, 1, 2); R(0, 2) = cof(0, 1, 1, 2);
        R(1, 0) = cof(1, 2, 0, 2); R(1, 1) = cof(0, 2, 0, 2); R(1, 2) = cof(0, 1, 0, 2);
        R(2, 0) = cof(1, 2, 0, 1); R(2, 1) = cof(0, 2, 0, 1); R(2, 2) = cof(0, 1, 0, 1);
        for (auto& e : R.m) e = F_->mul(e, di);
        return R;
    }

    Matrix3 transpose(const Matrix3& A) const {
        Matrix3 T;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) T(r, c) = A(c, r);
        return T;
    }

    Matrix3 frobenius(const Matrix3& A, int k) const {
        Matrix3 R;
        for (int i = 0; i < 9; ++i) R.m[i] = F_->frobenius(A.m[i], k);
        return R;
    }

    /// Scales A so its first nonzero entry is 1.
    Matrix3 normalized(const Matrix3& A) const {
        for (auto e : A.m)
            if (!e.is_zero()) {
                Matrix3 R;
                Elem k = F_->inv(e);
                for (int i = 0; i < 9; ++i) R.m[i] = F_->mul(k, A.m[i]);
                return R;
            }
        throw ArgumentError("zero matrix");
    }

    /// Matrix sending e0, e1, e2, e0+e1+e2 to the given four points (in general position).
    Matrix3 frame_matrix(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3) const {
        Matrix3 B = Matrix3::from_columns(p0, p1, p2);
        Vec3 c = apply(inverse(B), p3);
        if (c[0].is_zero() || c[1].is_zero() || c[2].is_zero())
            throw ArgumentError("frame points are not in general position");
        return Matrix3::from_columns(scale(c[0], p0), scale(c[1], p1), scale(c[2], p2));
    }

    std::string to_hex(const detail::Triple& t) const {
        return "(" + F_->to_hex(t[0]) + "," + F_->to_hex(t[1]) + "," + F_->to_hex(t[2]) + ")";
    }

private:
    Vec3 triple_at(std::uint64_t i) const {
        const std::uint64_t q = F_->q();
        if (i >= num_points()) throw ArgumentError("point index out of range");
        if (i == 0) return {Elem(), Elem(), Elem(1)};
        if (i <= q) return {Elem(), Elem(1), Elem(static_cast<std::uint32_t>(i - 1))};
        i -= q + 1;
        return {Elem(1), Elem(static_cast<std::uint32_t>(i / q)), Elem(static_cast<std::uint32_t>(i % q))};
    }

    // Normalized solutions x of a.x = 0, in index order.
    std::vector<Vec3> solve_dual(const Vec3& a) const {
        const Field& F = *F_;
        const std::uint32_t q = F.q();
        std::vector<Vec3> out;
        out.reserve(q + 1);
        if (!a[2].is_zero()) {
            Elem ia2 = F.inv(a[2]);
            out.push_back({Elem(), Elem(1), F.mul(a[1], ia2)});
            for (std::uint32_t y = 0; y < q; ++y)
                out.push_back({Elem(1), Elem(y), F.mul(a[0] + F.mul(a[1], Elem(y)), ia2)});
        } else if (!a[1].is_zero()) {
            out.push_back({Elem(), Elem(), Elem(1)});
            Elem y = F.div(a[0], a[1]);
            for (std::uint32_t z = 0; z < q; ++z) out.push_back({Elem(1), y, Elem(z)});
        } else if (!a[0].is_zero()) {
            out.push_back({Elem(), Elem(), Elem(1)});
            for (std::uint32_t z = 0; z < q; ++z) out.push_back({Elem(), Elem(1), Elem(z)});
        } else {
            throw ArgumentError("zero vector is not a projective point");
        }
        return out;
    }

    FieldPtr F_;
};

/// Membership set for points of one plane, keyed by point index.
class PointSet {
public:
    PointSet() = default;
    PointSet(const Plane& P, const std::vector<ProjPoint>& pts) : P_(P) {
        dense_ = P.num_points() <= (1ull << 24);
        if (dense_) bits_.assign(P.num_points(), 0);
        for (auto& p : pts) insert(P.index(p));
    }
    void insert(std::uint64_t i) {
        if (dense_) bits_[i] = 1;
        else sparse_.push_back(i), sorted_ = false;
    }
    bool contains(std::uint64_t i) const {
        if (dense_) return bits_[i];
        if (!sorted_) {
            std::sort(sparse_.begin(), sparse_.end());
            sorted_ = true;
        }
        return std::binary_search(sparse_.begin(), sparse_.end(), i);
    }
    bool contains(const ProjPoint& p) const { return contains(P_.index(p)); }

private:
    Plane P_;
    bool dense_ = true;
    std::vector<std::uint8_t> bits_;
    mutable std::vector<std::uint64_t> sparse_;
    mutable bool sorted_ = true;
};

}  // namespace kmarc
