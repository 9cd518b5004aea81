#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace kmarc;

namespace {

constexpr int kRandomCases = 10000;

std::uint32_t least_irreducible(int h) {
    for (std::uint32_t p = (1u << h) | 1u; p < (2u << h); p += 2)  // x itself is never a modulus
        if (oracle::irreducible(p, h)) return p;
    return 0;
}

}  // namespace

TEST(Gf2e, DefaultModuliArePinnedOrLeastIrreducible) {
    EXPECT_EQ(Field(4).modulus(), 0x13u);
    EXPECT_EQ(Field(6).modulus(), 0x5Bu);
    EXPECT_EQ(Field(7).modulus(), 0x83u);
    for (int h = 1; h <= 12; ++h) {
        Field F(h);
        EXPECT_TRUE(oracle::irreducible(F.modulus(), h)) << h;
        if (h != 4 && h != 6 && h != 7) EXPECT_EQ(F.modulus(), least_irreducible(h)) << h;
    }
}

TEST(Gf2e, RejectsReducibleModulusAndBadDegree) {
    EXPECT_THROW(Field(4, 0x15), ArgumentError);  // x^4+x^2+1 = (x^2+x+1)^2
    EXPECT_THROW(Field(0), ArgumentError);
    EXPECT_THROW(Field(17), ArgumentError);
}

TEST(Gf2e, MultiplicationMatchesSchoolbookExhaustively) {
    for (int h = 1; h <= 6; ++h) {
        Field F(h);
        for (std::uint32_t a = 0; a < F.q(); ++a)
            for (std::uint32_t b = 0; b < F.q(); ++b)
                ASSERT_EQ(F.mul(Elem(a), Elem(b)).v, oracle::mul(a, b, F.modulus(), h)) << h << " " << a << " " << b;
    }
}

TEST(Gf2e, MultiplicationMatchesSchoolbookRandomized) {
    std::mt19937_64 rng(20240601);
    for (int h = 7; h <= 16; ++h) {
        Field F(h);
        std::uniform_int_distribution<std::uint32_t> d(0, F.q() - 1);
        for (int i = 0; i < kRandomCases; ++i) {
            std::uint32_t a = d(rng), b = d(rng);
            ASSERT_EQ(F.mul(Elem(a), Elem(b)).v, oracle::mul(a, b, F.modulus(), h));
        }
    }
}

TEST(Gf2e, FieldAxiomsExhaustiveSmall) {
    for (int h = 1; h <= 4; ++h) {
        Field F(h);
        for (std::uint32_t a = 0; a < F.q(); ++a)
            for (std::uint32_t b = 0; b < F.q(); ++b)
                for (std::uint32_t c = 0; c < F.q(); ++c) {
                    Elem x(a), y(b), z(c);
                    ASSERT_EQ(F.mul(x, F.mul(y, z)), F.mul(F.mul(x, y), z));
                    ASSERT_EQ(F.mul(x, y + z), F.mul(x, y) + F.mul(x, z));
                }
    }
}

TEST(Gf2e, FieldAxiomsRandomized) {
    std::mt19937_64 rng(7);
    for (int h = 5; h <= 8; ++h) {
        Field F(h);
        std::uniform_int_distribution<std::uint32_t> d(0, F.q() - 1);
        for (int i = 0; i < kRandomCases; ++i) {
            Elem x(d(rng)), y(d(rng)), z(d(rng));
            ASSERT_EQ(F.mul(x, F.mul(y, z)), F.mul(F.mul(x, y), z));
            ASSERT_EQ(F.mul(x, y + z), F.mul(x, y) + F.mul(x, z));
            ASSERT_EQ(F.mul(x, y), F.mul(y, x));
        }
    }
}

TEST(Gf2e, InverseAndDivision) {
    for (int h = 1; h <= 10; ++h) {
        Field F(h);
        for (std::uint32_t a = 1; a < F.q(); ++a) {
            ASSERT_EQ(F.mul(Elem(a), F.inv(Elem(a))), Elem(1));
            ASSERT_EQ(F.div(Elem(a), Elem(a)), Elem(1));
        }
        EXPECT_THROW(F.inv(Elem()), DivisionByZero);
        EXPECT_THROW(F.div(Elem(1), Elem()), DivisionByZero);
    }
}

TEST(Gf2e, GeneratorIsLeastPrimitive) {
    for (int h = 2; h <= 10; ++h) {
        Field F(h);
        auto order = [&](std::uint32_t g) {
            std::uint32_t x = g, n = 1;
            while (x != 1) {
                x = oracle::mul(x, g, F.modulus(), h);
                ++n;
            }
            return n;
        };
        ASSERT_EQ(order(F.generator().v), F.q() - 1) << h;
        for (std::uint32_t g = 2; g < F.generator().v; ++g) ASSERT_NE(order(g), F.q() - 1) << h << " " << g;
    }
}

TEST(Gf2e, PowExpLogAgreeWithRepeatedMultiplication) {
    for (int h = 2; h <= 6; ++h) {
        Field F(h);
        for (std::uint32_t a = 0; a < F.q(); ++a)
            for (std::uint64_t e = 0; e < 2 * F.q() + 3; ++e)
                ASSERT_EQ(F.pow(Elem(a), e).v, oracle::pow(a, e, F.modulus(), h)) << h << " " << a << "^" << e;
        for (std::uint32_t a = 1; a < F.q(); ++a) ASSERT_EQ(F.exp(F.log(Elem(a))), Elem(a));
        EXPECT_THROW(F.log(Elem()), DivisionByZero);
    }
}

TEST(Gf2e, FrobeniusAndSqrt) {
    for (int h = 1; h <= 8; ++h) {
        Field F(h);
        for (std::uint32_t a = 0; a < F.q(); ++a) {
            std::uint32_t y = a;
            for (int k = 0; k <= h + 1; ++k) {
                ASSERT_EQ(F.frobenius(Elem(a), k).v, y);
                y = oracle::mul(y, y, F.modulus(), h);
            }
            ASSERT_EQ(F.sqr(F.sqrt(Elem(a))), Elem(a));
            ASSERT_EQ(F.frobenius(Elem(a), -1), F.sqrt(Elem(a)));
        }
    }
}

TEST(Gf2e, AbsoluteTraceMatchesDefinition) {
    for (int h = 1; h <= 10; ++h) {
        Field F(h);
        int ones = 0;
        for (std::uint32_t a = 0; a < F.q(); ++a) {
            int t = oracle::trace(a, F.modulus(), h);
            ASSERT_TRUE(t == 0 || t == 1);
            ASSERT_EQ(F.trace(Elem(a)), t);
            ones += t;
        }
        EXPECT_EQ(ones, static_cast<int>(F.q() / 2));
    }
}

TEST(Gf2e, TraceIsAdditiveRandomized) {
    std::mt19937_64 rng(11);
    for (int h = 7; h <= 8; ++h) {
        Field F(h);
        std::uniform_int_distribution<std::uint32_t> d(0, F.q() - 1);
        for (int i = 0; i < kRandomCases; ++i) {
            Elem x(d(rng)), y(d(rng));
            ASSERT_EQ(F.trace(x + y), F.trace(x) ^ F.trace(y));
        }
    }
}

TEST(Gf2e, RelativeTraceLandsInSubfieldAndComposes) {
    for (int h : {4, 6, 8, 9, 10, 12}) {
        Field F(h);
        for (int hs = 1; hs <= h; ++hs) {
            if (h % hs) {
                EXPECT_THROW(F.trace_rel(Elem(1), hs), ArgumentError);
                continue;
            }
            for (std::uint32_t a = 0; a < F.q(); a += (F.q() > 1024 ? 7 : 1)) {
                Elem t = F.trace_rel(Elem(a), hs);
                ASSERT_TRUE(F.in_subfield(t, hs));
                // Tr_{F/F2} = Tr_{K/F2} o Tr_{F/K}, with K of degree hs evaluated inside F.
                Elem inner;
                for (int i = 0; i < hs; ++i) inner += F.frobenius(t, i);
                ASSERT_EQ(static_cast<int>(inner.v), F.trace(Elem(a)));
            }
        }
        EXPECT_EQ(F.trace_rel(Elem(3), 1).v, static_cast<std::uint32_t>(F.trace(Elem(3))));
    }
}

TEST(Gf2e, SubfieldElements) {
    Field F(12);
    for (int hs : {1, 2, 3, 4, 6, 12}) {
        auto s = F.subfield_elements(hs);
        EXPECT_EQ(s.size(), 1u << hs);
        for (Elem x : s)
            for (Elem y : s) ASSERT_TRUE(F.in_subfield(F.mul(x, y), hs));
    }
    EXPECT_THROW(F.subfield_elements(5), ArgumentError);
}

TEST(Gf2e, ContextChecks) {
    Field F(4);
    EXPECT_THROW(F.check(Elem(16)), ContextError);
    EXPECT_NO_THROW(F.check(Elem(15)));
    EXPECT_THROW(F.from_hex("10"), ContextError);
    EXPECT_THROW(F.from_hex("g"), ArgumentError);
    EXPECT_THROW(F.from_hex(""), ArgumentError);
    EXPECT_FALSE(F.contains(Elem(16)));
}

TEST(Gf2e, HexRoundTrip) {
    Field F(10);
    for (std::uint32_t a = 0; a < F.q(); ++a) ASSERT_EQ(F.from_hex(F.to_hex(Elem(a))), Elem(a));
    EXPECT_EQ(F.to_hex(Elem(0x2af)), "2af");
    EXPECT_EQ(F.from_hex("2AF"), Elem(0x2af));
}

TEST(Gf2e, EvalPolynomial) {
    Field F(4);
    for (std::uint32_t a = 0; a < 16; ++a) {
        std::uint32_t expect = oracle::mul(oracle::mul(a, a, 0x13, 4), oracle::mul(a, a, 0x13, 4), 0x13, 4) ^ a ^ 1;
        ASSERT_EQ(F.eval_f2_poly(0x13, Elem(a)).v, expect);
    }
}

TEST(Gf2e, SubfieldEmbeddingIsAHomomorphism) {
    for (auto [hb, hs] : {std::pair{4, 2}, {6, 2}, {6, 3}, {8, 4}, {10, 5}, {12, 4}}) {
        auto big = make_field(hb), small = make_field(hs);
        SubfieldEmbedding e(big, small);
        std::set<std::uint32_t> image;
        for (std::uint32_t a = 0; a < small->q(); ++a) {
            image.insert(e(Elem(a)).v);
            ASSERT_TRUE(big->in_subfield(e(Elem(a)), hs));
            ASSERT_EQ(e.preimage(e(Elem(a))), Elem(a));
            for (std::uint32_t b = 0; b < small->q(); ++b) {
                ASSERT_EQ(e(Elem(a) + Elem(b)), e(Elem(a)) + e(Elem(b)));
                ASSERT_EQ(e(small->mul(Elem(a), Elem(b))), big->mul(e(Elem(a)), e(Elem(b))));
            }
        }
        EXPECT_EQ(image.size(), small->q());
        EXPECT_EQ(e(Elem(1)), Elem(1));
    }
    EXPECT_THROW(SubfieldEmbedding(make_field(6), make_field(4)), ArgumentError);
    SubfieldEmbedding e(make_field(4), make_field(2));
    std::uint32_t outside = 0;
    while (e.in_image(Elem(outside))) ++outside;
    EXPECT_THROW(e.preimage(Elem(outside)), ContextError);
    EXPECT_THROW(e(Elem(4)), ContextError);
}
