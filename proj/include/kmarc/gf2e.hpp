#pragma once

#include <kmarc/errors.hpp>

#include <bit>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

namespace kmarc {

/// Element of GF(2^h) in polynomial basis: bit i is the coefficient of x^i.
struct Elem {
    std::uint32_t v = 0;

    constexpr Elem() = default;
    constexpr explicit Elem(std::uint32_t bits) : v(bits) {}

    constexpr bool is_zero() const { return v == 0; }
    friend constexpr bool operator==(Elem, Elem) = default;
    friend constexpr auto operator<=>(Elem, Elem) = default;
    // Field addition is XOR in characteristic 2.
    friend constexpr Elem operator+(Elem a, Elem b) { return Elem(a.v ^ b.v); }
    Elem& operator+=(Elem o) { v ^= o.v; return *this; }
};

namespace detail {

// Carry-less product of a and b reduced modulo the degree-h polynomial mod.
inline std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, std::uint32_t mod, int h) {
    std::uint32_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        b >>= 1;
        a <<= 1;
        if (a >> h & 1) a ^= mod;
    }
    return r;
}

inline int poly_degree(std::uint64_t p) { return p ? 63 - std::countl_zero(p) : -1; }

inline std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
    int dm = poly_degree(m);
    for (int da = poly_degree(a); da >= dm; da = poly_degree(a)) a ^= m << (da - dm);
    return a;
}

inline bool is_irreducible(std::uint32_t p) {
    int d = poly_degree(p);
    if (d < 1) return false;
    for (int fd = 1; 2 * fd <= d; ++fd)
        for (std::uint64_t f = 1ull << fd; f < (2ull << fd); ++f)
            if (poly_mod(p, f) == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> ps;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) ps.push_back(n);
    return ps;
}

}  // namespace detail

/// Default modulus for GF(2^h). A few degrees use the polynomials fixed by the
/// reference data (x^4+x+1, x^6+x^4+x^3+x+1, x^7+x+1); the rest use the
/// lexicographically least irreducible polynomial.
inline std::uint32_t default_modulus(int h) {
    if (h < 1 || h > 16) throw ArgumentError("field degree must be in 1..16");
    switch (h) {
        case 4: return 0x13;
        case 6: return 0x5B;
        case 7: return 0x83;
        default: break;
    }
    for (std::uint32_t p = (1u << h) | 1u; p < (2u << h); p += 2)
        if (detail::is_irreducible(p)) return p;
    throw ArgumentError("no irreducible polynomial found");
}

/// GF(2^h) with log/antilog tables over a primitive generator.
class Field {
public:
    explicit Field(int h) : Field(h, default_modulus(h)) {}

    Field(int h, std::uint32_t modulus) : h_(h), modulus_(modulus) {
        if (h < 1 || h > 16) throw ArgumentError("field degree must be in 1..16");
        if (detail::poly_degree(modulus) != h || !detail::is_irreducible(modulus))
            throw ArgumentError("modulus is not an irreducible polynomial of degree h");
        q_ = 1u << h;
        const std::uint32_t n = q_ - 1;
        std::uint32_t g = (h == 1) ? 1 : 2;
        for (;; ++g) {
            bool primitive = true;
            for (auto p : detail::prime_factors(n))
                if (slow_pow(g, n / p) == 1) { primitive = false; break; }
            if (primitive) break;
        }
        generator_ = g;
        exp_.assign(2 * n + 1, 0);
        log_.assign(q_, 0);
        std::uint32_t x = 1;
        for (std::uint32_t i = 0; i < n; ++i) {
            exp_[i] = exp_[i + n] = x;
            log_[x] = i;
            x = detail::slow_mul(x, g, modulus_, h_);
        }
        exp_[2 * n] = 1;
        trace_.assign(q_, 0);
        for (std::uint32_t a = 0; a < q_; ++a) {
            std::uint32_t t = 0, y = a;
            for (int i = 0; i < h_; ++i) {
                t ^= y;
                y = detail::slow_mul(y, y, modulus_, h_);
            }
            trace_[a] = static_cast<std::uint8_t>(t);
        }
    }

    int h() const { return h_; }
    std::uint32_t q() const { return q_; }
    std::uint32_t modulus() const { return modulus_; }
    Elem generator() const { return Elem(generator_); }

    bool contains(Elem a) const { return a.v < q_; }
    void check(Elem a) const {
        if (a.v >= q_) throw ContextError("element does not belong to GF(2^" + std::to_string(h_) + ")");
    }

    Elem add(Elem a, Elem b) const { return a + b; }

    Elem mul(Elem a, Elem b) const {
        if (a.v == 0 || b.v == 0) return Elem();
        return Elem(exp_[log_[a.v] + log_[b.v]]);
    }

    Elem inv(Elem a) const {
        if (a.v == 0) throw DivisionByZero();
        return Elem(exp_[(q_ - 1 - log_[a.v]) % (q_ - 1)]);
    }

    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    Elem pow(Elem a, std::uint64_t e) const {
        if (e == 0) return Elem(1);
        if (a.v == 0) return Elem();
        return Elem(exp_[(static_cast<std::uint64_t>(log_[a.v]) * (e % (q_ - 1))) % (q_ - 1)]);
    }

    Elem sqr(Elem a) const { return mul(a, a); }

    /// x^(2^k); k is taken mod h.
    Elem frobenius(Elem a, int k) const {
        if (a.v == 0) return a;
        k = ((k % h_) + h_) % h_;
        std::uint64_t l = (static_cast<std::uint64_t>(log_[a.v]) << k) % (q_ - 1);
        return Elem(exp_[l]);
    }

    /// Unique square root (inverse Frobenius).
    Elem sqrt(Elem a) const { return frobenius(a, h_ - 1); }

    /// g^i for the stored generator g.
    Elem exp(std::uint64_t i) const { return Elem(exp_[i % (q_ - 1)]); }
    std::uint32_t log(Elem a) const {
        if (a.v == 0) throw DivisionByZero();
        return log_[a.v];
    }

    int trace(Elem a) const { return trace_[a.v]; }

    /// Relative trace onto GF(2^hs): sum of a^(2^(hs*i)) for i < h/hs.
    Elem trace_rel(Elem a, int hs) const {
        if (hs < 1 || h_ % hs != 0) throw ArgumentError("subfield degree must divide h");
        Elem t;
        for (int i = 0; i < h_ / hs; ++i) t += frobenius(a, hs * i);
        return t;
    }

    bool in_subfield(Elem a, int hs) const {
        if (hs < 1 || h_ % hs != 0) throw ArgumentError("subfield degree must divide h");
        return frobenius(a, hs) == a;
    }

    std::vector<Elem> subfield_elements(int hs) const {
        std::vector<Elem> out;
        for (std::uint32_t a = 0; a < q_; ++a)
            if (in_subfield(Elem(a), hs)) out.push_back(Elem(a));
        return out;
    }

    /// Evaluates a polynomial with F2 coefficients (bit i = coeff of X^i) at a.
    Elem eval_f2_poly(std::uint32_t poly, Elem a) const {
        Elem r;
        for (int i = detail::poly_degree(poly); i >= 0; --i) {
            r = mul(r, a);
            if (poly >> i & 1) r += Elem(1);
        }
        return r;
    }

    std::string to_hex(Elem a) const {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%x", a.v);
        return buf;
    }

    Elem from_hex(const std::string& s) const {
        if (s.empty() || s.size() > 8) throw ArgumentError("bad hex element '" + s + "'");
        std::uint32_t v = 0;
        for (char c : s) {
            int d;
            if (c >= '0' && c <= '9') d = c - '0';
            else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
            else throw ArgumentError("bad hex element '" + s + "'");
            v = v << 4 | static_cast<std::uint32_t>(d);
        }
        Elem e(v);
        check(e);
        return e;
    }

    bool operator==(const Field& o) const { return h_ == o.h_ && modulus_ == o.modulus_; }

private:
    std::uint32_t slow_pow(std::uint32_t a, std::uint64_t e) const {
        std::uint32_t r = 1;
        while (e) {
            if (e & 1) r = detail::slow_mul(r, a, modulus_, h_);
            a = detail::slow_mul(a, a, modulus_, h_);
            e >>= 1;
        }
        return r;
    }

    int h_;
    std::uint32_t modulus_;
    std::uint32_t q_;
    std::uint32_t generator_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
    std::vector<std::uint8_t> trace_;
};

using FieldPtr = std::shared_ptr<const Field>;

inline FieldPtr make_field(int h) { return std::make_shared<const Field>(h); }
inline FieldPtr make_field(int h, std::uint32_t modulus) { return std::make_shared<const Field>(h, modulus); }

/// Field isomorphism from `small` onto the subfield of `big` of the same order.
/// The image of x is the least root of small's modulus in big.
class SubfieldEmbedding {
public:
    SubfieldEmbedding(FieldPtr big, FieldPtr small) : big_(std::move(big)), small_(std::move(small)) {
        if (big_->h() % small_->h() != 0) throw ArgumentError("subfield degree must divide field degree");
        Elem root;
        bool found = false;
        for (std::uint32_t a = 0; a < big_->q() && !found; ++a)
            if (big_->eval_f2_poly(small_->modulus(), Elem(a)).is_zero()) {
                root = Elem(a);
                found = true;
            }
        if (!found) throw ArgumentError("no root of subfield modulus");
        to_big_.resize(small_->q());
        back_.assign(big_->q(), UINT32_MAX);
        for (std::uint32_t s = 0; s < small_->q(); ++s) {
            Elem r, p(1);
            for (int i = 0; i < small_->h(); ++i) {
                if (s >> i & 1) r += p;
                p = big_->mul(p, root);
            }
            to_big_[s] = r;
            back_[r.v] = s;
        }
    }

    const FieldPtr& big() const { return big_; }
    const FieldPtr& small() const { return small_; }

    Elem operator()(Elem s) const {
        small_->check(s);
        return to_big_[s.v];
    }

    Elem preimage(Elem b) const {
        big_->check(b);
        if (back_[b.v] == UINT32_MAX) throw ContextError("element is not in the embedded subfield");
        return Elem(back_[b.v]);
    }

    bool in_image(Elem b) const { return b.v < back_.size() && back_[b.v] != UINT32_MAX; }

private:
    FieldPtr big_, small_;
    std::vector<Elem> to_big_;
    std::vector<std::uint32_t> back_;
};

}  // namespace kmarc
