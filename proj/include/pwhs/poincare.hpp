#pragma once

#include <cmath>
#include <functional>

#include "pwhs/pwhs_system.hpp"

namespace pwhs {

// Strip system with linear foci lambda_+ = a+ib about -x1+i and lambda_- = c+id about x0-i.
struct StripReturnParams {
    double a = -1, b = 1, c = -1, d = 1;
    double x0 = 1, x1 = 1;
    HolomorphicField central_field = HolomorphicField::monomial(1, I);

    void validate() const {
        if (!(a < 0 && c < 0 && b > 0 && d > 0)) throw ConfigError("need a, c < 0 and b, d > 0");
        if (central_field.tag) {
            if (auto* m = std::get_if<catalog::Monomial>(&*central_field.tag); m && m->n % 2 == 0)
                throw UnsupportedField("even central monomials break the symmetry argument");
            if (auto* m = std::get_if<catalog::InversePower>(&*central_field.tag); m && m->n % 2 == 0)
                throw UnsupportedField("even central inverse powers break the symmetry argument");
        }
    }

    HolomorphicField plus_field() const { return HolomorphicField::linear_center({a, b}, {-x1, 1.0}); }
    HolomorphicField minus_field() const { return HolomorphicField::linear_center({c, d}, {x0, -1.0}); }

    PiecewiseSystem system() const {
        return PiecewiseSystem({PartitionKind::ParallelStrip}, plus_field(), central_field, minus_field());
    }
};

inline double half_return_lower(const StripReturnParams& p, double s) {
    return -(s - p.x0) * std::exp(p.c * PI / p.d) + p.x0;
}

inline double half_return_upper(const StripReturnParams& p, double u) {
    return -(u + p.x1) * std::exp(p.a * PI / p.b) - p.x1;
}

inline double poincare_map(const StripReturnParams& p, double s) {
    return ((s - p.x0) * std::exp(p.c * PI / p.d) - p.x0 - p.x1) * std::exp(p.a * PI / p.b) - p.x1;
}

inline double poincare_slope(const StripReturnParams& p) {
    return std::exp(p.c * PI / p.d + p.a * PI / p.b);
}

inline double poincare_fixed_point(const StripReturnParams& p) {
    double ec = std::exp(p.c * PI / p.d + p.a * PI / p.b);
    double ea = std::exp(p.a * PI / p.b);
    return (-p.x0 * ec - (p.x0 + p.x1) * ea - p.x1) / (1.0 - ec);
}

enum class Direction { Up, Down };

// The catalog central fields carry x -/+ i to x +/- i; the crossing is confirmed by integration.
inline double central_transit(const HolomorphicField& central, double x, Direction dir,
                              const FlowOptions& opt = {}) {
    PiecewiseSystem sys({PartitionKind::ParallelStrip}, central, central, central);
    Complex z0(x, dir == Direction::Up ? -1.0 : 1.0);
    Complex v = eval_field(central, z0);
    if ((dir == Direction::Up && !(v.imag() > 0)) || (dir == Direction::Down && !(v.imag() < 0)))
        throw NoTransit("central orbit does not enter the strip");
    FlowOptions o = opt;
    o.max_time = std::min(opt.max_time, 200.0);
    ZoneRun run = integrate_in_zone(sys, z0, Zone::Central, 0.0, o.max_time, o);
    if (!run.exit) throw NoTransit("central orbit does not leave the strip");
    int target = dir == Direction::Up ? 1 : 2;
    if (run.exit->boundary != target) throw NoTransit("central orbit returns to its entry line");
    double xe = run.exit->z.real();
    if (std::abs(xe - x) > 1e-6 * (1.0 + std::abs(x))) throw NoTransit("central transit is not symmetric");
    return x;
}

// x-coordinate of the first return to Im z = -1 computed by integration
inline double numeric_poincare(const PiecewiseSystem& sys, double s, const FlowOptions& opt = {}) {
    return return_point(sys, Complex(s, -1.0), 4, opt).real();
}

// fixed point of P by secant iteration on P(s) - s
inline double secant_fixed_point(const std::function<double(double)>& P, double s0, int iters = 30,
                                 double tol = 1e-12) {
    double prev = s0, fprev = P(s0) - s0;
    double s = s0 + fprev;
    for (int k = 0; k < iters; ++k) {
        double fs = P(s) - s;
        if (std::abs(fs) < tol) return s;
        double den = fs - fprev;
        double next = den != 0.0 ? s - fs * (s - prev) / den : s + fs;
        prev = s;
        fprev = fs;
        s = next;
    }
    return s;
}

inline double numeric_fixed_point(const PiecewiseSystem& sys, double s0, const FlowOptions& opt = {},
                                  int iters = 30, double tol = 1e-12) {
    return secant_fixed_point([&](double s) { return numeric_poincare(sys, s, opt); }, s0, iters, tol);
}

// A strip system moved by a Moebius map, with its return map read back in strip coordinates.
struct MappedStripSystem {
    MoebiusMap map;
    PiecewiseSystem system;

    static PartitionKind image_partition(const MoebiusMap& m) {
        Complex p = moebius_apply(m, Complex(0.0, 1.0) + 1.0).z;  // a point of Im z = 1
        if (std::abs(std::abs(p) - 1.0) < 1e-9) return PartitionKind::ExternalCircles;
        if (std::abs(std::abs(p - 2.0 / 3.0) - 1.0 / 3.0) < 1e-9) return PartitionKind::InternalCircles;
        throw ConfigError("map does not carry the strip onto a tangent-circle partition");
    }

    MappedStripSystem(const MoebiusMap& m, const PiecewiseSystem& strip)
        : map(m),
          system({image_partition(m)}, pushforward_field(m, strip.fields[0]), pushforward_field(m, strip.fields[1]),
                 pushforward_field(m, strip.fields[2])) {}

    Complex image(double s) const { return moebius_apply(map, Complex(s, -1.0)).z; }

    double poincare(double s, const FlowOptions& opt = {}) const {
        Complex w = return_point(system, image(s), 4, opt);
        auto z = moebius_apply(moebius_inverse(map), w);
        if (z.infinite) throw Error("return point maps to infinity");
        return z.z.real();
    }
};

}  // namespace pwhs
