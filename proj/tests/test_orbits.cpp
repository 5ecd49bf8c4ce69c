#include <gtest/gtest.h>

#include "nilquat/orbits.hpp"
#include "oracles.hpp"

namespace nilquat {
namespace {

OrbitEngine engine(const char* spec, unsigned threads = 1) {
    return OrbitEngine(MatrixRing(Ring(RingSpec::parse(spec))), EngineOptions{kDefaultCap, threads});
}

TEST(Orbits, Conjugate) {
    auto e = engine("zmod:3^1");
    const MatrixRing& m = e.matrices();
    const Ring& r = m.ring();
    const Mat2 a = m.make_int(1, 2, 0, 1);
    EXPECT_EQ(e.conjugate(a, m.identity()), a);
    const auto t1 = Conjugator::translation(m, r.one());
    EXPECT_EQ(e.conjugate(m.m_ab(r.one(), r.one()), t1), m.m_ab(r.one(), r.from_int(2)));
    EXPECT_EQ(e.conjugate(m.make_int(1, -1, 1, -1), t1), m.make_int(0, 0, 1, 0));
    EXPECT_THROW(Conjugator::scaling(m, r.zero()), std::domain_error);
    EXPECT_THROW(Conjugator::general(m, m.zero()), std::domain_error);
}

TEST(Orbits, OrbitSizes) {
    auto e = engine("zmod:3^1");
    const MatrixRing& m = e.matrices();
    EXPECT_EQ(e.orbit_of(m.m_ab(m.ring().one(), m.ring().zero())).size(), 12u);
    EXPECT_EQ(e.orbit_of(m.zero()).size(), 1u);
    EXPECT_EQ(e.orbit_of(m.identity()).size(), 1u);
    auto e5 = engine("zmod:5^1");
    EXPECT_EQ(e5.orbit_of(e5.matrices().m_ab(Elem{1}, Elem{0})).size(), 30u);
}

TEST(Orbits, InMOrbit) {
    auto z9 = engine("zmod:3^2");
    EXPECT_FALSE(z9.in_m_orbit(z9.matrices().make_int(3, 3, 0, 3)).has_value());

    auto e = engine("zmod:3^1");
    const MatrixRing& m = e.matrices();
    const Mat2 target = m.make_int(0, 0, 1, 0);
    const auto cert = e.in_m_orbit(target);
    ASSERT_TRUE(cert.has_value());
    EXPECT_EQ(cert->a, Elem{0});
    EXPECT_EQ(cert->b, Elem{1});
    EXPECT_TRUE(e.certifies(target, *cert));
    // The swap matrix is one valid conjugator.
    const Mat2 swap = m.make_int(0, 1, 1, 0);
    EXPECT_EQ(e.conjugate(m.m_ab(Elem{0}, Elem{1}), swap), target);

    for (auto a : m.ring().elements())
        for (auto b : m.ring().elements()) {
            const auto c = e.in_m_orbit(m.m_ab(a, b));
            ASSERT_TRUE(c.has_value());
            EXPECT_EQ(c->a, a);
            EXPECT_TRUE(e.certifies(m.m_ab(a, b), *c));
        }
}

TEST(Orbits, UnionSizes) {
    EXPECT_EQ(engine("zmod:3^1").m_orbit_union().members.count(), 33u);
    EXPECT_EQ(engine("zmod:3^2").m_orbit_union().members.count(), 897u);
    EXPECT_EQ(engine("zmod:5^1").m_orbit_union().members.count(), 145u);
    EXPECT_EQ(engine("polyq:3^1^2").m_orbit_union().members.count(), 897u);
}

class UnionVsOracle : public ::testing::TestWithParam<const char*> {};

TEST_P(UnionVsOracle, SameMembers) {
    auto e = engine(GetParam());
    const Ring& r = e.matrices().ring();
    std::vector<std::pair<oracle::M, oracle::M>> gl;
    for (const auto& p : e.invertibles()) {
        const Mat2 pi = e.matrices().inverse(p);
        gl.push_back({{p.e[0].index, p.e[1].index, p.e[2].index, p.e[3].index},
                      {pi.e[0].index, pi.e[1].index, pi.e[2].index, pi.e[3].index}});
    }
    const auto want = oracle::m_orbit_union(r, gl);
    const auto& got = e.m_orbit_union().members;
    EXPECT_EQ(got.count(), want.size());
    for (const auto& x : want) EXPECT_TRUE(got.test(e.matrices().pack(e.matrices().make({x[0]}, {x[1]}, {x[2]}, {x[3]}))));
}

INSTANTIATE_TEST_SUITE_P(Small, UnionVsOracle, ::testing::Values("zmod:3^1", "zmod:5^1", "zmod:3^2", "polyq:3^1^2"));

TEST(Orbits, UnionIsSingularMatricesForFields) {
    for (const char* spec : {"zmod:3^1", "zmod:5^1", "zmod:7^1", "polyq:3^2^1"}) {
        auto e = engine(spec);
        const MatrixRing& m = e.matrices();
        const auto& u = e.m_orbit_union().members;
        for (std::uint64_t i = 0; i < m.matrix_count(); ++i) ASSERT_EQ(u.test(i), !m.is_invertible(m.unpack(i))) << spec;
    }
}

TEST(Orbits, ThreadCountDoesNotChangeUnion) {
    // The union itself is memoized per ring, so compare orbit sweeps.
    auto one = engine("zmod:3^2", 1);
    auto four = engine("zmod:3^2", 4);
    EXPECT_EQ(one.orbit_of(one.matrices().make_int(1, 3, 0, 0)).members,
              four.orbit_of(four.matrices().make_int(1, 3, 0, 0)).members);
}

TEST(Orbits, MemoizedUnionStillHonorsCap) {
    auto full = engine("zmod:3^1");
    EXPECT_EQ(full.m_orbit_union().members.count(), 33u);
    OrbitEngine capped(MatrixRing(Ring(RingSpec::parse("zmod:3^1"))), EngineOptions{80, 1});
    EXPECT_THROW(capped.m_orbit_union(), CapExceeded);
}

TEST(Orbits, MembershipCertificatesOverZ9) {
    auto e = engine("zmod:3^2");
    const MatrixRing& m = e.matrices();
    const auto& u = e.m_orbit_union().members;
    for (std::uint64_t i = 0; i < m.matrix_count(); i += 7) {
        const Mat2 x = m.unpack(i);
        const auto cert = e.in_m_orbit(x);
        ASSERT_EQ(cert.has_value(), u.test(i));
        if (cert) {
            ASSERT_TRUE(e.certifies(x, *cert));
        }
    }
}

TEST(Orbits, OrbitShapes) {
    // [[t, j1], [j2, 0]] with v(t) < v(j1) and j2 in J^(n-1), and
    // [[0, j1], [0, j2]] with j1, j2 in J^(n-1), lie in the union.
    auto e = engine("zmod:3^3");
    const MatrixRing& m = e.matrices();
    const Ring& r = m.ring();
    const unsigned n = r.n();
    const auto& u = e.m_orbit_union().members;
    for (auto t : r.elements())
        for (auto j1 : r.elements())
            for (auto j2 : r.ideal(n - 1))
                if (r.valuation(t) < r.valuation(j1)) {
                    ASSERT_TRUE(u.test(m.pack(m.make(t, j1, j2, r.zero()))));
                }
    for (auto j1 : r.ideal(n - 1))
        for (auto j2 : r.ideal(n - 1)) ASSERT_TRUE(u.test(m.pack(m.make(r.zero(), j1, r.zero(), j2))));
}

}  // namespace
}  // namespace nilquat
