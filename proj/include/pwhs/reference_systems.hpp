#pragma once

#include <array>
#include <string>
#include <vector>

#include "pwhs/crossing_solver.hpp"
#include "pwhs/poincare.hpp"

namespace pwhs::reference {

struct StripCase {
    std::string name;
    StripReturnParams params;
};

// the four strip systems with a = c = -1, b = d = 1
inline std::vector<StripCase> strip_cases() {
    auto mk = [](std::string name, HolomorphicField f, double x) {
        StripReturnParams p;
        p.x0 = p.x1 = x;
        p.central_field = std::move(f);
        return StripCase{std::move(name), p};
    };
    return {mk("iz", HolomorphicField::monomial(1, I), 1.0), mk("iz^3", HolomorphicField::monomial(3, I), 2.0),
            mk("iz^2/(1+z)", HolomorphicField::rational_normal(2, 1.0, I), 2.0),
            mk("i/z", HolomorphicField::inverse_power(1, I), 1.0)};
}

struct StripCrossingCase {
    std::string name;
    HolomorphicField plus, central, minus;
    int central_degree;

    PiecewiseSystem system() const { return {{PartitionKind::ParallelStrip}, plus, central, minus}; }
    CrossingSystem<long double> crossing() const { return build_crossing_system(plus, central, minus); }
};

inline StripCrossingCase strip_linear_example() {
    return {"strip, linear central zone", HolomorphicField::reciprocal_roots(-I, {Complex(2.25, 6.0)}),
            HolomorphicField::reciprocal_roots(Complex(1, -1), {Complex(0.5, -1.0)}),
            HolomorphicField::reciprocal_roots(-I, {Complex(0.0, -4.0)}), 1};
}

inline StripCrossingCase strip_quadratic_example() {
    return {"strip, quadratic central zone", HolomorphicField::reciprocal_roots(I, {Complex(0.47, 6.0)}),
            HolomorphicField::reciprocal_roots(Complex(1, -1), {Complex(0.0, -2.0), Complex(3.0, -2.0)}),
            HolomorphicField::reciprocal_roots(I, {Complex(1.8, -4.0)}), 2};
}

struct CircleCrossingCase {
    std::string name;
    CircleClass kind;
    std::array<Complex, 3> centers;  // Plus, Central, Minus
    std::array<Complex, 3> lambdas;

    PiecewiseSystem system() const {
        return {{circle_partition(kind)}, HolomorphicField::linear_center(lambdas[0], centers[0]),
                HolomorphicField::linear_center(lambdas[1], centers[1]),
                HolomorphicField::linear_center(lambdas[2], centers[2])};
    }
};

inline CircleCrossingCase external_circles_example() {
    return {"external circles",
            CircleClass::External,
            {Complex(1.0980423999, -0.80012406276), Complex(1.0, 0.995016), Complex(3.2900009902, 0.9400008902)},
            {I, I, -I}};
}

inline CircleCrossingCase internal_circles_example() {
    return {"internal circles", CircleClass::Internal, {Complex(-0.2, -0.6), Complex(1.0, 1.0), Complex(-0.6, -0.4)}, {I, -I, I}};
}

}  // namespace pwhs::reference
