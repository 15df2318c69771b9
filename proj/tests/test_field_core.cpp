#include <gtest/gtest.h>

#include <random>

#include "pwhs/field_core.hpp"

using namespace pwhs;

namespace {

// classical RK4 at a fixed small step, used as an independent integrator
Complex rk4(const std::function<Complex(Complex)>& f, Complex z, double t, int steps = 4000) {
    double h = t / steps;
    for (int k = 0; k < steps; ++k) {
        Complex k1 = f(z), k2 = f(z + 0.5 * h * k1), k3 = f(z + 0.5 * h * k2), k4 = f(z + h * k3);
        z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return z;
}

std::vector<HolomorphicField> catalog_fields() {
    return {HolomorphicField::constant({0.3, -1.2}),
            HolomorphicField::linear_center({-0.4, 1.3}, {0.5, -0.25}),
            HolomorphicField::monomial(3, {0.0, 2.0}),
            HolomorphicField::rational_normal(2, {1.5, -0.5}, I),
            HolomorphicField::rational_normal(4, {0.2, 0.1}, {1.0, 1.0}),
            HolomorphicField::inverse_power(3, {0.0, -1.0}),
            HolomorphicField::reciprocal_roots({1.0, -1.0}, {{0.0, -2.0}, {3.0, -2.0}})};
}

}  // namespace

TEST(EvalField, DirectArithmetic) {
    EXPECT_NEAR(std::abs(eval_field(HolomorphicField::monomial(1, I), 1.0) - I), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(eval_field(HolomorphicField::monomial(3, I), I) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(eval_field(HolomorphicField::inverse_power(1, I), 2.0) - 0.5 * I), 0.0, 1e-15);
}

TEST(EvalField, PoleThrows) {
    EXPECT_THROW(eval_field(HolomorphicField::inverse_power(2, I), 0.0), PoleEvaluation);
    EXPECT_THROW(eval_field(HolomorphicField::rational_normal(2, 1.0, I), -1.0), PoleEvaluation);
    auto f = HolomorphicField::rational({1.0}, {-1.0, 0.0, 1.0});
    EXPECT_THROW(eval_field(f, 1.0), PoleEvaluation);
}

TEST(EvalField, CatalogTagMatchesRationalForm) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (const auto& f : catalog_fields()) {
        HolomorphicField plain = HolomorphicField::rational(f.numerator, f.denominator);
        for (int k = 0; k < 8; ++k) {
            Complex z(u(rng), u(rng));
            Complex a = eval_field(f, z), b = eval_field(plain, z);
            EXPECT_LE(std::abs(a - b), 1e-12 * (1 + std::abs(a)));
        }
    }
}

TEST(HolomorphicField, RejectsZeroDenominator) {
    EXPECT_THROW(HolomorphicField::rational({1.0}, {}), UnsupportedField);
    EXPECT_THROW(HolomorphicField::rational({1.0}, {0.0, 0.0}), UnsupportedField);
}

TEST(LinearFlow, IdentityAtTimeZero) {
    Complex z0(0.7, -2.1);
    EXPECT_EQ(linear_flow({-0.3, 2.0}, {1.0, 1.0}, z0, 0.0), z0);
}

TEST(LinearFlow, QuarterRotation) {
    EXPECT_NEAR(std::abs(linear_flow(I, 0.0, 1.0, PI / 2) - I), 0.0, 1e-15);
}

TEST(LinearFlow, HalfTurnFromLowerLine) {
    double c = -1, d = 1, x0 = 1.5, s = -0.75;
    Complex got = linear_flow({c, d}, {x0, -1.0}, {s, -1.0}, PI / d);
    Complex want(-(s - x0) * std::exp(c * PI / d) + x0, -1.0);
    EXPECT_NEAR(std::abs(got - want), 0.0, 1e-14);
}

TEST(LinearFlow, AgreesWithIntegration) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 100; ++k) {
        Complex lam(u(rng), 2 * u(rng)), c(u(rng), u(rng)), z0(2 * u(rng), 2 * u(rng));
        double t = 1.0 + u(rng);
        Complex exact = linear_flow(lam, c, z0, t);
        Complex num = rk4([&](Complex z) { return lam * (z - c); }, z0, t);
        EXPECT_LE(std::abs(exact - num), 1e-9);
    }
}

TEST(LevelFunction, RationalNormalClosedForm) {
    auto L = level_function(HolomorphicField::rational_normal(2, 1.0, I));
    for (double x : {-3.0, -0.5, 0.4, 2.0})
        for (double y : {-2.0, -0.3, 0.7, 1.5}) {
            double want = -x / (x * x + y * y) + 0.5 * std::log(x * x + y * y);
            EXPECT_NEAR(L(x, y), want, 1e-13);
        }
}

TEST(LevelFunction, ReciprocalLinearIsQuadratic) {
    auto L = level_function(HolomorphicField::reciprocal_roots(I, {Complex(0, -4)}));
    for (double x : {-3.0, 0.0, 2.5})
        for (double y : {-2.0, 1.0, 4.0}) EXPECT_NEAR(L(x, y), (-x * x + y * y) / 2 + 4 * y, 1e-12);
}

TEST(LevelFunction, LinearCenterOrbitsAreCircles) {
    auto L = level_function(HolomorphicField::monomial(1, I));
    for (double r : {0.5, 1.0, 3.0}) EXPECT_NEAR(L(r, 0), L(0, r), 1e-14);
}

TEST(LevelFunction, OddCentralFieldsAreSymmetric) {
    for (const auto& f : {HolomorphicField::monomial(1, I), HolomorphicField::monomial(3, I),
                          HolomorphicField::monomial(5, I), HolomorphicField::inverse_power(1, I),
                          HolomorphicField::inverse_power(3, I)}) {
        auto L = level_function(f);
        for (int i = 0; i < 50; ++i)
            for (int j = 0; j < 50; ++j) {
                double x = -2.0 + 4.0 * (i + 0.5) / 50, y = -2.0 + 4.0 * (j + 0.5) / 50;
                EXPECT_LE(std::abs(L(x, y) - L(x, -y)), 1e-12);
            }
    }
}

TEST(LevelFunction, RationalNormalEqualOnBothLines) {
    auto L = level_function(HolomorphicField::rational_normal(2, 1.0, I));
    for (int k = 0; k <= 200; ++k) {
        double x = -10 + 20.0 * k / 200;
        EXPECT_LE(std::abs(L(x, 1) - L(x, -1)), 1e-12);
    }
}

TEST(LevelFunction, UnsupportedWithoutClosedForm) {
    auto f = HolomorphicField::rational({0.0, 1.0}, {1.0, 0.0, 1.0});
    EXPECT_THROW(level_function(f), UnsupportedField);
}

TEST(LevelFunction, ConservedAlongOrbits) {
    for (const auto& f : {HolomorphicField::monomial(1, I), HolomorphicField::inverse_power(1, I),
                          HolomorphicField::rational_normal(2, 1.0, I),
                          HolomorphicField::linear_center({-0.2, 1.0}, {0.5, 0.5}),
                          HolomorphicField::reciprocal_roots({1.0, -1.0}, {{0.0, -2.0}, {3.0, -2.0}})}) {
        auto L = level_function(f);
        Complex z(2.5, 0.3);
        double h0 = L(z.real(), z.imag()), worst = 0;
        for (int k = 0; k < 50; ++k) {
            z = rk4([&](Complex w) { return eval_field(f, w); }, z, 0.05, 100);
            worst = std::max(worst, std::abs(L(z.real(), z.imag()) - h0));
        }
        EXPECT_LE(worst, 1e-7);
    }
}

TEST(LevelGradient, FiniteDifferenceQuadratic) {
    LevelFunction L;
    L.H = [](double x, double y) { return (x * x + y * y) / 2; };
    auto [hx, hy] = level_gradient(L, {1.0, 1.0});
    EXPECT_NEAR(hx, 1.0, 1e-8);
    EXPECT_NEAR(hy, 1.0, 1e-8);
}

TEST(LevelGradient, ClosedFormReciprocalLinear) {
    auto L = level_function(HolomorphicField::reciprocal_roots(I, {Complex(0, -4)}));
    auto [hx, hy] = level_gradient(L, {2.0, -1.0});
    EXPECT_NEAR(hx, -2.0, 1e-14);
    EXPECT_NEAR(hy, 3.0, 1e-14);
}

TEST(LevelGradient, ClosedFormMatchesFiniteDifferences) {
    auto L = level_function(HolomorphicField::rational_normal(2, 1.0, I));
    LevelFunction fd;
    fd.H = L.H;
    for (Complex p : {Complex(3, 0), Complex(-2, 0.5), Complex(0.7, -1.3)}) {
        auto a = level_gradient(L, p), b = level_gradient(fd, p);
        EXPECT_NEAR(a.first, b.first, 1e-6);
        EXPECT_NEAR(a.second, b.second, 1e-6);
    }
}

TEST(LevelGradient, ExclusionPoint) {
    auto L = level_function(HolomorphicField::monomial(1, I));
    EXPECT_THROW(level_gradient(L, 0.0), ExclusionPoint);
}
