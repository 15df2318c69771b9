#include <gtest/gtest.h>

#include "pwhs/poincare.hpp"
#include "pwhs/reference_systems.hpp"

using namespace pwhs;

namespace {

StripReturnParams params(double x0, double x1) {
    StripReturnParams p;
    p.x0 = x0;
    p.x1 = x1;
    return p;
}

const double EPI = std::exp(-PI);

}  // namespace

TEST(HalfReturn, Lower) {
    EXPECT_NEAR(half_return_lower(params(1, 1), 1.0), 1.0, 1e-15);
    EXPECT_NEAR(half_return_lower(params(1, 1), 0.0), 1 + EPI, 1e-15);
    EXPECT_NEAR(half_return_lower(params(0, 1), -1.0), EPI, 1e-15);
}

TEST(HalfReturn, Upper) {
    EXPECT_NEAR(half_return_upper(params(1, 1), -1.0), -1.0, 1e-15);
    EXPECT_NEAR(half_return_upper(params(1, 1), 0.0), -EPI - 1, 1e-15);
}

TEST(HalfReturn, AgreesWithIntegration) {
    auto p = params(0, 1);
    PiecewiseSystem sys = p.system();
    // minus zone: from s - i to the next crossing of Im z = -1
    auto run = integrate_in_zone(sys, Complex(-1.0, -1.0 - 1e-13), Zone::Minus, 0.0, 100.0);
    ASSERT_TRUE(run.exit);
    EXPECT_NEAR(run.exit->z.real(), half_return_lower(p, -1.0), 1e-8);
    auto up = integrate_in_zone(sys, Complex(0.0, 1.0 + 1e-13), Zone::Plus, 0.0, 100.0);
    ASSERT_TRUE(up.exit);
    EXPECT_NEAR(up.exit->z.real(), half_return_upper(p, 0.0), 1e-8);
}

TEST(PoincareMap, PureContraction) {
    auto p = params(0, 0);
    for (double s : {-3.0, 0.5, 7.0}) EXPECT_NEAR(poincare_map(p, s), s * std::exp(-2 * PI), 1e-15);
    EXPECT_NEAR(poincare_slope(p), std::exp(-2 * PI), 1e-16);
}

TEST(PoincareMap, ClosedFormValue) {
    EXPECT_NEAR(poincare_map(params(1, 1), 0.0), (-EPI - 2) * EPI - 1, 1e-15);
}

TEST(PoincareMap, IsCompositionOfHalves) {
    StripReturnParams p;
    p.a = -0.4;
    p.b = 1.3;
    p.c = -0.7;
    p.d = 0.8;
    p.x0 = 1.2;
    p.x1 = 0.3;
    for (double s : {-2.0, 0.0, 3.0}) EXPECT_NEAR(poincare_map(p, s), half_return_upper(p, half_return_lower(p, s)), 1e-13);
}

TEST(FixedPoint, Examples) {
    EXPECT_NEAR(poincare_fixed_point(params(0, 0)), 0.0, 1e-15);
    double e2 = std::exp(-2 * PI);
    double want = (-e2 - 2 * EPI - 1) / (1 - e2);
    auto p = params(1, 1);
    EXPECT_NEAR(poincare_fixed_point(p), want, 1e-14);
    EXPECT_NEAR(poincare_map(p, want), want, 1e-14);
}

TEST(FixedPoint, NumericIterationConverges) {
    auto p = params(1, 1);
    double s = numeric_fixed_point(p.system(), -0.5);
    EXPECT_NEAR(s, poincare_fixed_point(p), 1e-8);
}

TEST(NumericPoincare, AgreesWithClosedFormForEveryCentralField) {
    for (const auto& c : reference::strip_cases()) {
        auto sys = c.params.system();
        for (double s : {-3.0, -2.5, -2.0}) {
            SCOPED_TRACE(c.name);
            EXPECT_NEAR(numeric_poincare(sys, s), poincare_map(c.params, s), 1e-7);
        }
    }
}

TEST(CentralTransit, Examples) {
    EXPECT_EQ(central_transit(HolomorphicField::monomial(1, I), 2.0, Direction::Up), 2.0);
    EXPECT_EQ(central_transit(HolomorphicField::monomial(3, I), 2.0, Direction::Up), 2.0);
    auto f = HolomorphicField::rational_normal(2, 1.0, I);
    EXPECT_EQ(central_transit(f, 3.0, Direction::Up), 3.0);
    auto L = level_function(f);
    EXPECT_NEAR(L(3, -1), L(3, 1), 1e-14);
    EXPECT_EQ(central_transit(HolomorphicField::monomial(1, I), -2.0, Direction::Down), -2.0);
}

TEST(CentralTransit, CubicReachesUpperLine) {
    PiecewiseSystem sys({PartitionKind::ParallelStrip}, HolomorphicField::monomial(3, I),
                        HolomorphicField::monomial(3, I), HolomorphicField::monomial(3, I));
    auto run = integrate_in_zone(sys, Complex(2, -1), Zone::Central, 0.0, 10.0);
    ASSERT_TRUE(run.exit);
    EXPECT_LE(std::abs(run.exit->z - Complex(2, 1)), 1e-7);
}

TEST(CentralTransit, NoTransit) {
    EXPECT_THROW(central_transit(HolomorphicField::monomial(1, I), -2.0, Direction::Up), NoTransit);
    EXPECT_THROW(central_transit(HolomorphicField::monomial(1, I), 2.0, Direction::Down), NoTransit);
}

TEST(StripParams, Validation) {
    StripReturnParams p;
    p.central_field = HolomorphicField::monomial(2, I);
    EXPECT_THROW(p.validate(), UnsupportedField);
    p = StripReturnParams{};
    p.a = 0.5;
    EXPECT_THROW(p.validate(), ConfigError);
}

TEST(MappedStrip, ReturnMapIsConjugate) {
    const std::array<MoebiusMap, 4> ms{MoebiusMap::strip_to_external(), MoebiusMap::strip_to_internal(),
                                       moebius_inverse(MoebiusMap::external()),
                                       moebius_inverse(MoebiusMap::internal())};
    auto c = reference::strip_cases()[0];
    for (const auto& m : ms) {
        MappedStripSystem mapped(m, c.params.system());
        for (double s : {-2.0, -1.0}) EXPECT_NEAR(mapped.poincare(s), poincare_map(c.params, s), 1e-7);
    }
}

TEST(MappedStrip, RejectsMapsOffTheCirclePair) {
    EXPECT_THROW(MappedStripSystem::image_partition(MoebiusMap::identity()), ConfigError);
}
