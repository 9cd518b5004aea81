#pragma once

#include <kmarc/gf2e.hpp>

#include <algorithm>
#include <bit>
#include <span>
#include <vector>

namespace kmarc {

namespace detail {

inline int top_bit(std::uint32_t v) { return 31 - std::countl_zero(v); }
inline int low_bit(std::uint32_t v) { return std::countr_zero(v); }
inline int parity(std::uint32_t v) { return std::popcount(v) & 1; }

}  // namespace detail

/// Bit mask m_a with Tr(a*x) = parity(m_a & x) for every x.
inline std::uint32_t trace_mask(const Field& F, Elem a) {
    std::uint32_t m = 0;
    for (int j = 0; j < F.h(); ++j)
        if (F.trace(F.mul(a, Elem(1u << j)))) m |= 1u << j;
    return m;
}

/// Additive subgroup of GF(2^h), i.e. an F2-subspace. The basis is kept in
/// reduced row-echelon form with strictly decreasing pivots, so two equal
/// subgroups always have identical bases.
class Subgroup {
public:
    Subgroup() = default;
    explicit Subgroup(FieldPtr F) : F_(std::move(F)) {}

    const FieldPtr& field() const { return F_; }
    int rank() const { return static_cast<int>(basis_.size()); }
    std::uint64_t size() const { return 1ull << basis_.size(); }
    const std::vector<Elem>& basis() const { return basis_; }

    /// Adds x to the span. Returns false if it was already contained.
    bool insert(Elem x) {
        F_->check(x);
        std::uint32_t v = reduce(x.v);
        if (!v) return false;
        int p = detail::top_bit(v);
        for (auto& b : basis_)
            if (b.v >> p & 1) b.v ^= v;
        basis_.push_back(Elem(v));
        std::sort(basis_.begin(), basis_.end(), [](Elem a, Elem b) { return a.v > b.v; });
        return true;
    }

    bool contains(Elem x) const {
        F_->check(x);
        return reduce(x.v) == 0;
    }

    /// Canonical coset representative: x reduced against the basis.
    Elem coset_leader(Elem x) const { return Elem(reduce(x.v)); }

    std::vector<Elem> elements() const {
        if (basis_.size() > 24) throw ArgumentError("subgroup too large to enumerate");
        std::vector<Elem> out{Elem()};
        for (Elem b : basis_) {
            std::size_t n = out.size();
            for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] + b);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// k*S, again a subgroup.
    Subgroup scaled(Elem k) const {
        Subgroup s(F_);
        for (Elem b : basis_) s.insert(F_->mul(k, b));
        return s;
    }

    /// S^(2^e).
    Subgroup frobenius(int e) const {
        Subgroup s(F_);
        for (Elem b : basis_) s.insert(F_->frobenius(b, e));
        return s;
    }

    bool operator==(const Subgroup& o) const { return basis_ == o.basis_; }
    bool operator<(const Subgroup& o) const {
        return std::lexicographical_compare(basis_.begin(), basis_.end(), o.basis_.begin(), o.basis_.end());
    }

private:
    std::uint32_t reduce(std::uint32_t v) const {
        for (Elem b : basis_)
            if (v >> detail::top_bit(b.v) & 1) v ^= b.v;
        return v;
    }

    FieldPtr F_;
    std::vector<Elem> basis_;
};

inline Subgroup span(const FieldPtr& F, std::span<const Elem> xs) {
    Subgroup s(F);
    for (Elem x : xs) s.insert(x);
    return s;
}

inline Subgroup span(const FieldPtr& F, std::initializer_list<Elem> xs) {
    return span(F, std::span<const Elem>(xs.begin(), xs.size()));
}

inline bool independent(const FieldPtr& F, std::span<const Elem> xs) {
    return span(F, xs).rank() == static_cast<int>(xs.size());
}

/// {y : Tr(xy) = 0 for all x in S}. Rank h - rank(S); applying twice gives S back.
inline Subgroup trace_dual(const Subgroup& S) {
    const Field& F = *S.field();
    // Echelon form of the trace masks, pivot at the highest bit, fully reduced.
    std::vector<std::uint32_t> rows;
    for (Elem b : S.basis()) {
        std::uint32_t m = trace_mask(F, b);
        for (auto r : rows)
            if (m >> detail::top_bit(r) & 1) m ^= r;
        if (!m) continue;
        int p = detail::top_bit(m);
        for (auto& r : rows)
            if (r >> p & 1) r ^= m;
        rows.push_back(m);
    }
    std::uint32_t pivots = 0;
    for (auto r : rows) pivots |= 1u << detail::top_bit(r);
    Subgroup out(S.field());
    for (int f = 0; f < F.h(); ++f) {
        if (pivots >> f & 1) continue;
        std::uint32_t y = 1u << f;
        for (auto r : rows)
            if (r >> f & 1) y |= 1u << detail::top_bit(r);
        out.insert(Elem(y));
    }
    return out;
}

/// Least x (as an integer) with Tr(alphas[i] * x) = targets[i] for all i.
/// Throws RankError when the alphas are F2-dependent.
inline Elem solve_trace_system(const Field& F, std::span<const Elem> alphas, std::span<const int> targets) {
    if (alphas.size() != targets.size()) throw ArgumentError("alphas and targets differ in length");
    struct Row { std::uint32_t m; int t; };
    std::vector<Row> rows;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        F.check(alphas[i]);
        Row r{trace_mask(F, alphas[i]), targets[i] & 1};
        for (auto& o : rows)
            if (r.m >> detail::low_bit(o.m) & 1) { r.m ^= o.m; r.t ^= o.t; }
        if (!r.m) throw RankError("trace system has dependent coefficients");
        int p = detail::low_bit(r.m);
        for (auto& o : rows)
            if (o.m >> p & 1) { o.m ^= r.m; o.t ^= r.t; }
        rows.push_back(r);
    }
    // Free bits set to zero; each pivot (lowest bit of its row) takes its target.
    std::uint32_t x = 0;
    for (auto& r : rows)
        if (r.t) x |= 1u << detail::low_bit(r.m);
    return Elem(x);
}

/// True iff the distinct values form a single coset of S. The empty set counts as a coset.
inline bool is_coset(std::span<const Elem> values, const Subgroup& S) {
    if (values.empty()) return true;
    std::vector<Elem> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) return false;
    if (v.size() != S.size()) return false;
    for (Elem x : v)
        if (!S.contains(x + v[0])) return false;
    return true;
}

/// Subgroup generated by all differences of the values.
inline Subgroup difference_span(const FieldPtr& F, std::span<const Elem> values) {
    Subgroup s(F);
    for (Elem x : values) s.insert(x + values[0]);
    return s;
}

/// True iff the distinct values form a coset of some subgroup.
inline bool is_affine_subspace(const FieldPtr& F, std::span<const Elem> values) {
    if (values.empty()) return true;
    return is_coset(values, difference_span(F, values));
}

/// All F2-subspaces of the given rank, in increasing canonical order.
inline std::vector<Subgroup> all_subgroups(const FieldPtr& F, int rank) {
    // Enumerate reduced echelon bases directly: choose pivots, then fill free bits.
    const int h = F->h();
    std::vector<Subgroup> out;
    if (rank < 0 || rank > h) return out;
    std::vector<int> piv(rank);
    auto rec_pivots = [&](auto&& self, int idx, int maxbit) -> void {
        if (idx == rank) {
            std::uint32_t pivmask = 0;
            for (int p : piv) pivmask |= 1u << p;
            // Free positions for row i: non-pivot bits below its pivot.
            std::vector<std::vector<int>> free(rank);
            int total = 0;
            for (int i = 0; i < rank; ++i) {
                for (int b = 0; b < piv[i]; ++b)
                    if (!(pivmask >> b & 1)) free[i].push_back(b);
                total += static_cast<int>(free[i].size());
            }
            for (std::uint64_t code = 0; code < (1ull << total); ++code) {
                Subgroup s(F);
                std::uint64_t c = code;
                for (int i = 0; i < rank; ++i) {
                    std::uint32_t v = 1u << piv[i];
                    for (int b : free[i]) {
                        if (c & 1) v |= 1u << b;
                        c >>= 1;
                    }
                    s.insert(Elem(v));
                }
                out.push_back(std::move(s));
            }
            return;
        }
        for (int p = maxbit; p >= rank - idx - 1; --p) {
            piv[idx] = p;
            self(self, idx + 1, p - 1);
        }
    };
    rec_pivots(rec_pivots, 0, h - 1);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace kmarc
