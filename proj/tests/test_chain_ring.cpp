#include <gtest/gtest.h>

#include <random>
#include <set>

#include "nilquat/chain_ring.hpp"

namespace nilquat {
namespace {

Ring zmod(std::uint32_t p, unsigned n) { return Ring(RingSpec::parse("zmod:" + std::to_string(p) + "^" + std::to_string(n))); }
Ring polyq(std::uint32_t p, unsigned r, unsigned n) {
    return Ring(RingSpec::parse("polyq:" + std::to_string(p) + "^" + std::to_string(r) + "^" + std::to_string(n)));
}

TEST(GaloisField, SmallestIrreducible) {
    EXPECT_EQ(smallest_irreducible(3, 2), (std::vector<std::uint32_t>{1, 0, 1}));  // t^2 + 1
    EXPECT_EQ(smallest_irreducible(5, 2), (std::vector<std::uint32_t>{2, 0, 1}));  // t^2 + 2
    EXPECT_THROW(GaloisField(3, 2, {2, 0, 1}), std::invalid_argument);             // t^2 - 1
}

TEST(GaloisField, FieldAxiomsGF9) {
    GaloisField f(3, 2);
    ASSERT_EQ(f.order(), 9u);
    for (std::uint32_t a = 1; a < 9; ++a) EXPECT_EQ(f.mul(a, f.inverse(a)), 1u);
    for (std::uint32_t a = 0; a < 9; ++a)
        for (std::uint32_t b = 0; b < 9; ++b) {
            EXPECT_EQ(f.mul(a, b), f.mul(b, a));
            for (std::uint32_t c = 0; c < 9; ++c) EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        }
}

TEST(RingSpec, ParseAndRender) {
    auto z = RingSpec::parse("zmod:3^2");
    EXPECT_EQ(z.family, Family::IntegersModPn);
    EXPECT_EQ(z.p, 3u);
    EXPECT_EQ(z.n, 2u);
    EXPECT_EQ(z.to_string(), "zmod:3^2");
    auto pq = RingSpec::parse("polyq:5^2^3");
    EXPECT_EQ(pq.family, Family::PolyQuotient);
    EXPECT_EQ(pq.r, 2u);
    EXPECT_EQ(pq.to_string(), "polyq:5^2^3");
    EXPECT_THROW(RingSpec::parse("zmod:3"), std::invalid_argument);
    EXPECT_THROW(RingSpec::parse("gf:3^1"), std::invalid_argument);
    EXPECT_THROW(RingSpec::parse("polyq:3^x^2"), std::invalid_argument);
}

TEST(Ring, MakeRing) {
    Ring z9 = zmod(3, 2);
    EXPECT_EQ(z9.size(), 9u);
    EXPECT_EQ(z9.q(), 3u);
    EXPECT_EQ(z9.uniformizer(), Elem{3});
    Ring gf3 = zmod(3, 1);
    EXPECT_EQ(gf3.size(), 3u);
    EXPECT_EQ(gf3.uniformizer(), gf3.zero());
}

TEST(Ring, RejectsInvalidSpecs) {
    try {
        zmod(2, 1);
        FAIL() << "p = 2 accepted";
    } catch (const std::invalid_argument& e) {
        EXPECT_STREQ(e.what(), "odd order required");
    }
    RingSpec bad{3, 2, 1, Family::IntegersModPn, {}};
    EXPECT_THROW(Ring{bad}, std::invalid_argument);
    RingSpec reducible{3, 2, 2, Family::PolyQuotient, {2, 0, 1}};
    EXPECT_THROW(Ring{reducible}, std::invalid_argument);
    EXPECT_THROW(zmod(9, 1), std::invalid_argument);
}

TEST(Ring, Z9Arithmetic) {
    Ring z9 = zmod(3, 2);
    EXPECT_EQ(z9.mul({2}, {5}), Elem{1});
    EXPECT_EQ(z9.add({8}, {1}), Elem{0});
    EXPECT_EQ(z9.valuation({3}), 1u);
    EXPECT_EQ(z9.valuation({0}), 2u);
    EXPECT_EQ(z9.valuation({7}), 0u);
    EXPECT_FALSE(z9.is_unit({6}));
    EXPECT_EQ(z9.residue({7}), 1u);
    EXPECT_EQ(z9.lift(2), Elem{2});
    EXPECT_THROW(z9.inverse({6}), std::domain_error);
}

TEST(Ring, InverseMatchesExhaustiveSearch) {
    for (Ring r : {zmod(3, 2), zmod(5, 2), polyq(3, 1, 3), polyq(3, 2, 2), zmod(3, 7)}) {
        std::mt19937 rng(7);
        for (int i = 0; i < 200; ++i) {
            Elem a{static_cast<std::uint32_t>(rng() % r.size())};
            if (!r.is_unit(a)) continue;
            Elem found{};
            bool any = false;
            for (std::uint32_t x = 0; x < r.size() && !any; ++x)
                if (r.mul(a, {x}) == r.one()) {
                    found = {x};
                    any = true;
                }
            ASSERT_TRUE(any) << r.name();
            EXPECT_EQ(r.inverse(a), found) << r.name();
        }
    }
    EXPECT_EQ(zmod(3, 2).inverse({2}), Elem{5});
}

TEST(Ring, PolyQuotientArithmetic) {
    Ring r = polyq(3, 1, 2);
    const Elem t = r.uniformizer();
    EXPECT_EQ(r.mul(t, t), r.zero());
    const Elem one_plus_t = r.add(r.one(), t);
    EXPECT_EQ(r.inverse(one_plus_t), r.sub(r.one(), t));
    const Elem two_plus_t = r.from_digits(std::vector<std::uint32_t>{2, 1});
    EXPECT_EQ(r.residue(two_plus_t), 2u);
    EXPECT_EQ(r.render(two_plus_t), "(2,1)");
}

TEST(Ring, LargeRingSlowPathAgreesWithTables) {
    // 3^7 exceeds the table limit; compare with integer arithmetic.
    Ring r = zmod(3, 7);
    ASSERT_GT(r.size(), Ring::kTableLimit);
    std::mt19937 rng(11);
    for (int i = 0; i < 1000; ++i) {
        std::uint32_t a = rng() % r.size(), b = rng() % r.size();
        EXPECT_EQ(r.mul({a}, {b}).index, static_cast<std::uint32_t>(std::uint64_t{a} * b % r.size()));
        EXPECT_EQ(r.add({a}, {b}).index, (a + b) % r.size());
    }
    // GF(9)[t]/(t^4) has 6561 elements: compare slow multiplication with a
    // digit-level convolution done here.
    Ring pr = polyq(3, 2, 4);
    const GaloisField& f = pr.residue_field();
    for (int i = 0; i < 500; ++i) {
        Elem a{static_cast<std::uint32_t>(rng() % pr.size())}, b{static_cast<std::uint32_t>(rng() % pr.size())};
        auto da = pr.digits(a), db = pr.digits(b);
        std::vector<std::uint32_t> want(4, 0);
        for (int x = 0; x < 4; ++x)
            for (int y = 0; x + y < 4; ++y) want[x + y] = f.add(want[x + y], f.mul(da[x], db[y]));
        EXPECT_EQ(pr.digits(pr.mul(a, b)), want);
    }
}

TEST(Ring, Enumeration) {
    Ring z9 = zmod(3, 2);
    EXPECT_EQ(z9.elements().size(), 9u);
    EXPECT_EQ(z9.ideal(1).size(), 3u);
    EXPECT_EQ(z9.ideal(0).size(), 9u);
    EXPECT_EQ(z9.ideal(2), std::vector<Elem>{Elem{0}});
    EXPECT_THROW(z9.ideal(3), std::out_of_range);
}

TEST(Ring, ParseElements) {
    Ring z9 = zmod(3, 2);
    EXPECT_EQ(z9.parse("(2,1)"), Elem{5});
    EXPECT_EQ(z9.parse("7"), Elem{7});
    EXPECT_EQ(z9.parse("-1"), Elem{8});
    EXPECT_THROW(z9.parse("(3,0)"), std::invalid_argument);
    EXPECT_THROW(z9.parse("(1)"), std::invalid_argument);
    EXPECT_THROW(z9.parse("9"), std::invalid_argument);
}

// Properties below run exhaustively on small rings.
class SmallRings : public ::testing::TestWithParam<const char*> {};

TEST_P(SmallRings, CommutativeRingAxioms) {
    Ring r(RingSpec::parse(GetParam()));
    const auto els = r.elements();
    for (auto a : els)
        for (auto b : els) {
            ASSERT_EQ(r.mul(a, b), r.mul(b, a));
            ASSERT_EQ(r.add(a, b), r.add(b, a));
            for (auto c : els) {
                ASSERT_EQ(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
                ASSERT_EQ(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
                ASSERT_EQ(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
            }
        }
}

TEST_P(SmallRings, ValuationIsAdditive) {
    Ring r(RingSpec::parse(GetParam()));
    for (auto a : r.elements())
        for (auto b : r.elements()) ASSERT_EQ(r.valuation(r.mul(a, b)), std::min(r.valuation(a) + r.valuation(b), r.n()));
}

TEST_P(SmallRings, UnitPlusRadicalIsUnit) {
    Ring r(RingSpec::parse(GetParam()));
    for (auto u : r.elements()) {
        EXPECT_EQ(r.is_unit(u), r.valuation(u) == 0);
        if (!r.is_unit(u)) continue;
        EXPECT_EQ(r.mul(u, r.inverse(u)), r.one());
        for (auto j : r.ideal(1)) ASSERT_TRUE(r.is_unit(r.add(u, j)));
    }
}

TEST_P(SmallRings, IdealsArePowersOfUniformizer) {
    Ring r(RingSpec::parse(GetParam()));
    for (unsigned k = 0; k <= r.n(); ++k) {
        const auto ideal = r.ideal(k);
        std::set<Elem> generated;
        for (auto x : r.elements()) generated.insert(r.mul(r.pow(r.uniformizer(), k), x));
        EXPECT_EQ(std::set<Elem>(ideal.begin(), ideal.end()), generated);
        EXPECT_EQ(ideal.size(), detail::ipow(r.q(), r.n() - k));
    }
}

TEST_P(SmallRings, ResidueIsAHomomorphism) {
    Ring r(RingSpec::parse(GetParam()));
    const GaloisField& f = r.residue_field();
    for (auto a : r.elements()) {
        EXPECT_EQ(r.residue(r.lift(r.residue(a))), r.residue(a));
        EXPECT_EQ(r.residue(a) == 0, !r.is_unit(a));
        for (auto b : r.elements()) {
            ASSERT_EQ(r.residue(r.mul(a, b)), f.mul(r.residue(a), r.residue(b)));
            ASSERT_EQ(r.residue(r.add(a, b)), f.add(r.residue(a), r.residue(b)));
        }
    }
}

INSTANTIATE_TEST_SUITE_P(All, SmallRings,
                         ::testing::Values("zmod:3^1", "zmod:5^1", "zmod:3^2", "zmod:3^3", "zmod:3^4", "polyq:3^1^2",
                                           "polyq:3^2^1", "polyq:3^1^3", "polyq:3^1^4", "polyq:3^2^2", "zmod:7^2"));

TEST(SumOfSquares, FixedExamples) {
    auto [a3, b3] = zmod(3, 1).solve_sum_of_squares();
    EXPECT_EQ(a3, Elem{1});
    EXPECT_EQ(b3, Elem{1});
    auto [a5, b5] = zmod(5, 1).solve_sum_of_squares();
    EXPECT_EQ(a5, Elem{2});
    EXPECT_EQ(b5, Elem{0});
    // Residue solution (1, 1) lifts to (4, 1) in Z/9: 16 + 1 + 1 = 18.
    auto [a9, b9] = zmod(3, 2).solve_sum_of_squares();
    EXPECT_EQ(a9, Elem{4});
    EXPECT_EQ(b9, Elem{1});
}

TEST(SumOfSquares, Z9ExhaustiveSolutionsInclude22) {
    Ring z9 = zmod(3, 2);
    std::set<std::pair<std::uint32_t, std::uint32_t>> sols;
    for (auto a : z9.elements())
        for (auto b : z9.elements())
            if (z9.add(z9.add(z9.mul(a, a), z9.mul(b, b)), z9.one()) == z9.zero()) sols.insert({a.index, b.index});
    EXPECT_TRUE(sols.count({2, 2}));
    EXPECT_TRUE(sols.count({4, 1}));
}

TEST(SumOfSquares, AllSmallRings) {
    for (const char* spec : {"zmod:3^1", "zmod:3^2", "zmod:3^3", "zmod:3^4", "zmod:3^5", "zmod:3^6", "zmod:5^1",
                             "zmod:5^2", "zmod:5^3", "zmod:5^4", "zmod:7^1", "zmod:7^2", "zmod:7^3", "zmod:11^2",
                             "zmod:13^2", "polyq:3^1^6", "polyq:3^2^3", "polyq:3^3^2", "polyq:3^6^1", "polyq:5^2^2",
                             "polyq:7^2^1", "polyq:7^3^1"}) {
        Ring r(RingSpec::parse(spec));
        auto [a, b] = r.solve_sum_of_squares();
        EXPECT_EQ(r.add(r.add(r.mul(a, a), r.mul(b, b)), r.one()), r.zero()) << spec;
        EXPECT_TRUE(r.is_unit(a)) << spec;
    }
}

}  // namespace
}  // namespace nilquat
