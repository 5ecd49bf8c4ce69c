#include <gtest/gtest.h>

#include <sstream>

#include "nilquat/report.hpp"

namespace nilquat {
namespace {

TEST(Report, CensusJsonKeyOrderAndRoundTrip) {
    const NilFactorEngine eng(Ring(RingSpec::parse("zmod:3^2")), EngineOptions{});
    const CensusReport r = eng.census_set_product(3);
    EXPECT_EQ(census_to_json(r, true).dump(),
              R"({"ring":"zmod:3^2","q":3,"n":2,"s":3,"brute_count":897,"formula_count":897,"match":true,"method":"set-product"})");
    const auto back = census_from_json(census_to_json(r, false));
    EXPECT_EQ(back.ring, r.ring);
    EXPECT_EQ(back.brute_count, r.brute_count);
    EXPECT_EQ(back.formula_count, r.formula_count);
    EXPECT_EQ(back.match, r.match);
    EXPECT_EQ(back.elapsed_ms, r.elapsed_ms);
}

TEST(Report, AbsentFormulaIsNull) {
    const NilFactorEngine eng(Ring(RingSpec::parse("zmod:3^2")), EngineOptions{});
    const auto j = census_to_json(eng.census_set_product(2), true);
    EXPECT_TRUE(j["formula_count"].is_null());
    EXPECT_TRUE(j["match"].is_null());
    EXPECT_EQ(j["brute_count"], 711);
    EXPECT_EQ(csv_row(eng.census_set_product(2)), "zmod:3^2,3,2,2,711,,,set-product,");
}

TEST(Report, HugeFormulaSerializesAsString) {
    CensusReport r;
    r.ring = "zmod:13^6";
    r.q = 13;
    r.n = 6;
    r.s = 11;
    r.method = CensusMethod::FormulaOnly;
    r.formula_count = formula_count(2197, 6, 11);
    const auto j = census_to_json(r, true);
    ASSERT_TRUE(j["formula_count"].is_string());
    EXPECT_EQ(census_from_json(j).formula_count, r.formula_count);
}

TEST(Report, FactorizationRoundTrip) {
    const NilFactorEngine eng(Ring(RingSpec::parse("zmod:3^2")), EngineOptions{});
    const MatrixRing& m = eng.matrices();
    const auto f = eng.decompose(m.make_int(4, 3, 0, 0), 4);
    const auto j = factorization_to_json(m, f, eng.check(f));
    EXPECT_EQ(j["verified"], true);
    const auto back = factorization_from_json(m, nlohmann::ordered_json::parse(j.dump()));
    EXPECT_EQ(back.target, f.target);
    EXPECT_EQ(back.factors, f.factors);
    EXPECT_EQ(back.conjugator, f.conjugator);
    EXPECT_TRUE(eng.check(back));
}

TEST(Report, BitsetRoundTrip) {
    const NilFactorEngine eng(Ring(RingSpec::parse("zmod:3^2")), EngineOptions{});
    const auto& u = eng.orbits().m_orbit_union().members;
    std::stringstream ss;
    write_bitset(ss, "zmod:3^2", u);
    const BitsetFile f = read_bitset(ss);
    EXPECT_EQ(f.ring, "zmod:3^2");
    EXPECT_EQ(f.set, u);
    std::stringstream bad("nope\n");
    EXPECT_THROW(read_bitset(bad), std::runtime_error);
}

TEST(Report, PackedIndicesRoundTrip) {
    const std::vector<std::uint64_t> idx{0, 1, 6560, std::uint64_t{1} << 40};
    for (bool binary : {false, true}) {
        std::stringstream ss;
        write_packed_indices(ss, idx, binary);
        EXPECT_EQ(read_packed_indices(ss, binary), idx);
    }
}

}  // namespace
}  // namespace nilquat
