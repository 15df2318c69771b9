#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pwhs/geometry.hpp"
#include "pwhs/pwhs_system.hpp"

namespace pwhs {

// H = -Im G(z) for a polynomial G (zones with fields 1/p(z))
template <class Real>
struct PolynomialPotential {
    CPoly<Real> G;
};

// H = |m^{-1}(w) - z0|^2, a linear center moved into the strip by m
template <class Real>
struct MoebiusCenter {
    MoebiusMap m;
    std::complex<Real> z0;
};

template <class Real>
using ZoneForm = std::variant<PolynomialPotential<Real>, MoebiusCenter<Real>>;

// N(x)/Q(x): a zone's level function restricted to a horizontal line
template <class Real>
struct LineRational {
    Poly<Real> N, Q;

    Real value(Real x) const { return N(x) / Q(x); }
    Real derivative(Real x) const {
        Real q = Q(x);
        return (N.derivative()(x) * q - N(x) * Q.derivative()(x)) / (q * q);
    }
};

template <class Real>
LineRational<Real> restrict_form(const ZoneForm<Real>& form, Real y) {
    using C = std::complex<Real>;
    if (auto* p = std::get_if<PolynomialPotential<Real>>(&form)) {
        auto [re, im] = restrict_to_line(p->G, y);
        return {im * Real(-1), Poly<Real>{Real(1)}};
    }
    const auto& mc = std::get<MoebiusCenter<Real>>(form);
    C a(mc.m.a), b(mc.m.b), c(mc.m.c), d(mc.m.d);
    C alpha = d + c * mc.z0, beta = b + a * mc.z0;
    // |p x + u|^2 = |p|^2 x^2 + 2 Re(p conj u) x + |u|^2
    auto sq = [](C p, C u) {
        return Poly<Real>{std::norm(u), Real(2) * (p * std::conj(u)).real(), std::norm(p)};
    };
    C iy(0, y);
    return {sq(alpha, alpha * iy - beta), sq(-c, a - c * iy)};
}

template <class Real>
Real eval_form(const ZoneForm<Real>& form, Real x, Real y) {
    using C = std::complex<Real>;
    if (auto* p = std::get_if<PolynomialPotential<Real>>(&form)) return -p->G(C(x, y)).imag();
    const auto& mc = std::get<MoebiusCenter<Real>>(form);
    C w(x, y), a(mc.m.a), b(mc.m.b), c(mc.m.c), d(mc.m.d);
    return std::norm((d * w - b) / (a - c * w) - mc.z0);
}

// x2 with H(x2) = H(x1) and x2 != x1 for a level function of degree <= 2 on a line
template <class Real>
struct Involution {
    Real A = 0, B = 0, C = 0;

    static Involution from(const LineRational<Real>& h) {
        if (h.N.degree() > 2 || h.Q.degree() > 2)
            throw UnsupportedZoneForm("outer zone level function is not quadratic on the line");
        auto n = [&](int k) { return k < static_cast<int>(h.N.c.size()) ? h.N.c[k] : Real(0); };
        auto q = [&](int k) { return k < static_cast<int>(h.Q.c.size()) ? h.Q.c[k] : Real(0); };
        Involution v{n(2) * q(0) - n(0) * q(2), n(1) * q(0) - n(0) * q(1), n(2) * q(1) - n(1) * q(2)};
        if (std::abs(v.A) + std::abs(v.C) == Real(0))
            throw UnsupportedZoneForm("outer zone level function is constant on the line");
        return v;
    }
    Real operator()(Real x) const {
        Real den = C * x + A;
        if (den == Real(0)) throw UnsupportedZoneForm("reduction denominator vanishes");
        return -(A * x + B) / den;
    }
    Real derivative(Real x) const {
        Real den = C * x + A;
        return -(A * A - B * C) / (den * den);
    }
    // s2 = p - q s1 when the map is affine
    std::optional<std::pair<Real, Real>> affine() const {
        if (C != Real(0)) return std::nullopt;
        return std::pair<Real, Real>{-B / A, Real(1)};
    }
};

// Matching conditions at crossing points (s, -1) and (t, 1):
//   H-(s1) = H-(s2), Hc(s2) = Hc(t2), H+(t2) = H+(t1), Hc(t1) = Hc(s1)
// with s2, t2 eliminated through the outer-zone involutions.
template <class Real = long double>
struct CrossingSystem {
    std::array<ZoneForm<Real>, 3> zones;  // Plus, Central, Minus
    LineRational<Real> central_lower, central_upper;
    Involution<Real> lower, upper;
    int central_degree = 1;

    Real s2(Real s1) const { return lower(s1); }
    Real t2(Real t1) const { return upper(t1); }

    std::array<Real, 2> residual(Real s1, Real t1) const {
        return {central_lower.value(s2(s1)) - central_upper.value(t2(t1)),
                central_upper.value(t1) - central_lower.value(s1)};
    }
    Real scale(Real s1, Real t1) const {
        return Real(1) + std::max({std::abs(central_lower.value(s1)), std::abs(central_upper.value(t1)),
                                   std::abs(central_lower.value(s2(s1))), std::abs(central_upper.value(t2(t1)))});
    }
    Eigen::Matrix<Real, 2, 2> jacobian(Real s1, Real t1) const {
        Eigen::Matrix<Real, 2, 2> J;
        J(0, 0) = central_lower.derivative(s2(s1)) * lower.derivative(s1);
        J(0, 1) = -central_upper.derivative(t2(t1)) * upper.derivative(t1);
        J(1, 0) = -central_lower.derivative(s1);
        J(1, 1) = central_upper.derivative(t1);
        return J;
    }
    Real zone_value(Zone z, Real x, Real y) const { return eval_form(zones[static_cast<int>(z)], x, y); }
};

template <class Real = long double>
CrossingSystem<Real> build_crossing_system(const ZoneForm<Real>& plus, const ZoneForm<Real>& central,
                                           const ZoneForm<Real>& minus, int central_degree = 1) {
    CrossingSystem<Real> cs;
    cs.zones = {plus, central, minus};
    cs.central_lower = restrict_form(central, Real(-1));
    cs.central_upper = restrict_form(central, Real(1));
    cs.lower = Involution<Real>::from(restrict_form(minus, Real(-1)));
    cs.upper = Involution<Real>::from(restrict_form(plus, Real(1)));
    cs.central_degree = central_degree;
    return cs;
}

// level-function form of a zone field 1/p(z) (up to a constant numerator)
template <class Real = long double>
ZoneForm<Real> polynomial_potential(const HolomorphicField& f) {
    if (f.numerator.degree() != 0) throw UnsupportedZoneForm("zone field is not the reciprocal of a polynomial");
    CPoly<double> g = (f.denominator * (1.0 / f.numerator.c[0])).antiderivative();
    return PolynomialPotential<Real>{g.template cast<std::complex<Real>>()};
}

template <class Real = long double>
CrossingSystem<Real> build_crossing_system(const HolomorphicField& plus, const HolomorphicField& central,
                                           const HolomorphicField& minus) {
    for (const auto* f : {&plus, &minus})
        if (f->denominator.degree() != 1)
            throw UnsupportedZoneForm("outer zones must be reciprocals of linear polynomials");
    return build_crossing_system<Real>(polynomial_potential<Real>(plus), polynomial_potential<Real>(central),
                                       polynomial_potential<Real>(minus), central.denominator.degree());
}

struct CycleCandidate {
    double s1 = 0, s2 = 0, t1 = 0, t2 = 0;
    bool valid = false;
    std::string source;
    double residual = 0.0;  // max abs of the reduced residual at (s1, t1)
};

struct SearchBox {
    double s_lo = -20, s_hi = 20, t_lo = -20, t_hi = 20;
};

struct CycleReport {
    std::vector<CycleCandidate> candidates;
    std::vector<std::array<double, 2>> roots;  // every deduplicated (s1, t1) root
    bool non_isolated = false;
};

inline int bezout_bound(int n) {
    if (n < 1) throw Error("bezout_bound needs n >= 1");
    return n * (n + 1) / 2;
}

// canonical labelling s1 < s2; valid iff also t1 < t2
inline CycleCandidate canonical_cycle(double s1, double t1, double s2, double t2) {
    if (s1 > s2) {
        std::swap(s1, s2);
        std::swap(t1, t2);
    }
    CycleCandidate c;
    c.s1 = s1;
    c.s2 = s2;
    c.t1 = t1;
    c.t2 = t2;
    c.valid = s1 < s2 && t1 < t2;
    return c;
}

inline std::vector<CycleCandidate> filter_valid_cycles(const std::vector<CycleCandidate>& cands) {
    std::vector<CycleCandidate> out;
    for (const auto& c : cands)
        if (c.s1 < c.s2 && c.t1 < c.t2) out.push_back(c);
    return out;
}

namespace detail {

template <class Real>
std::optional<std::array<Real, 2>> newton(const CrossingSystem<Real>& cs, Real s, Real t, int max_iter = 80) {
    auto norm = [](const std::array<Real, 2>& f) { return std::max(std::abs(f[0]), std::abs(f[1])); };
    try {
        auto F = cs.residual(s, t);
        for (int it = 0; it < max_iter; ++it) {
            Real fn = norm(F);
            if (!std::isfinite(static_cast<double>(fn))) return std::nullopt;
            if (fn <= Real(1e-12) * cs.scale(s, t)) {
                // a couple of polishing steps
                for (int k = 0; k < 2; ++k) {
                    Eigen::Matrix<Real, 2, 1> rhs(-F[0], -F[1]);
                    Eigen::Matrix<Real, 2, 1> d = cs.jacobian(s, t).completeOrthogonalDecomposition().solve(rhs);
                    auto Fn = cs.residual(s + d(0), t + d(1));
                    if (norm(Fn) < fn) {
                        s += d(0);
                        t += d(1);
                        F = Fn;
                        fn = norm(F);
                    }
                }
                return std::array<Real, 2>{s, t};
            }
            Eigen::Matrix<Real, 2, 1> rhs(-F[0], -F[1]);
            Eigen::Matrix<Real, 2, 1> d = cs.jacobian(s, t).completeOrthogonalDecomposition().solve(rhs);
            if (!std::isfinite(static_cast<double>(d(0))) || !std::isfinite(static_cast<double>(d(1))))
                return std::nullopt;
            Real lam = 1;
            bool moved = false;
            for (int k = 0; k < 30; ++k) {
                Real sn = s + lam * d(0), tn = t + lam * d(1);
                try {
                    auto Fn = cs.residual(sn, tn);
                    if (norm(Fn) < fn) {
                        s = sn;
                        t = tn;
                        F = Fn;
                        moved = true;
                        break;
                    }
                } catch (const UnsupportedZoneForm&) {
                }
                lam /= 2;
            }
            if (!moved) return std::nullopt;
            if (std::abs(s) > 1e6 || std::abs(t) > 1e6) return std::nullopt;
        }
    } catch (const UnsupportedZoneForm&) {
    }
    return std::nullopt;
}

}  // namespace detail

template <class Real>
CycleReport solve_cycles(const CrossingSystem<Real>& cs, const SearchBox& box = {}, int seeds_per_axis = 40,
                         const std::string& source = "") {
    if (seeds_per_axis < 20) throw Error("seeds_per_axis must be at least 20");
    CycleReport rep;
    auto add_root = [&](double s, double t) {
        for (const auto& r : rep.roots)
            if (std::hypot(r[0] - s, r[1] - t) < 1e-6) return false;
        rep.roots.push_back({s, t});
        return true;
    };
    for (int i = 0; i < seeds_per_axis; ++i) {
        for (int j = 0; j < seeds_per_axis; ++j) {
            Real s = box.s_lo + (box.s_hi - box.s_lo) * (i + 0.5) / seeds_per_axis;
            Real t = box.t_lo + (box.t_hi - box.t_lo) * (j + 0.5) / seeds_per_axis;
            auto r = detail::newton(cs, s, t);
            if (!r) continue;
            add_root(static_cast<double>((*r)[0]), static_cast<double>((*r)[1]));
            if (rep.roots.size() > 50) {
                rep.non_isolated = true;
                return rep;
            }
        }
    }
    // pair every root with its involution partner
    std::vector<std::array<Real, 2>> full;
    for (const auto& r : rep.roots) {
        auto p = detail::newton(cs, Real(r[0]), Real(r[1]));
        if (p) full.push_back(*p);
    }
    std::vector<CycleCandidate> cycles;
    for (const auto& r : full) {
        Real s1 = r[0], t1 = r[1], s2 = cs.s2(s1), t2 = cs.t2(t1);
        CycleCandidate c = canonical_cycle(static_cast<double>(s1), static_cast<double>(t1),
                                           static_cast<double>(s2), static_cast<double>(t2));
        bool dup = false;
        for (const auto& o : cycles)
            if (std::hypot(o.s1 - c.s1, o.t1 - c.t1) < 1e-6) dup = true;
        if (dup) continue;
        // degenerate: the two crossings on a line coincide
        if (std::abs(c.s1 - c.s2) < 1e-9 || std::abs(c.t1 - c.t2) < 1e-9) c.valid = false;
        auto F = cs.residual(Real(c.s1), Real(c.t1));
        c.residual = static_cast<double>(std::max(std::abs(F[0]), std::abs(F[1])));
        c.source = source;
        cycles.push_back(c);
    }
    std::sort(cycles.begin(), cycles.end(), [](const auto& a, const auto& b) { return a.s1 < b.s1; });
    rep.candidates = std::move(cycles);
    return rep;
}

// ---------------------------------------------------------------- circle classes

enum class CircleClass { External, Internal };

inline MoebiusMap circle_map(CircleClass k) {
    return k == CircleClass::External ? MoebiusMap::external() : MoebiusMap::internal();
}

inline PartitionKind circle_partition(CircleClass k) {
    return k == CircleClass::External ? PartitionKind::ExternalCircles : PartitionKind::InternalCircles;
}

struct CircleCycle {
    CycleCandidate strip;             // crossings on Im w = -1 (s) and Im w = 1 (t)
    std::array<Complex, 4> circle;    // m^{-1} of (s1,-1), (s2,-1), (t2,1), (t1,1)
};

struct CircleReport {
    CycleReport strip;
    std::vector<CircleCycle> cycles;
};

template <class Real = long double>
CrossingSystem<Real> circle_crossing_system(CircleClass k, const std::array<Complex, 3>& centers) {
    MoebiusMap m = circle_map(k);
    auto form = [&](Complex z0) { return ZoneForm<Real>(MoebiusCenter<Real>{m, std::complex<Real>(z0)}); };
    return build_crossing_system<Real>(form(centers[0]), form(centers[1]), form(centers[2]), 1);
}

// centers indexed Plus, Central, Minus
inline CircleReport solve_circle_class(CircleClass k, const std::array<Complex, 3>& centers, const SearchBox& box = {},
                                       int seeds_per_axis = 40, const std::string& source = "") {
    auto cs = circle_crossing_system<long double>(k, centers);
    CircleReport rep;
    rep.strip = solve_cycles(cs, box, seeds_per_axis, source);
    MoebiusMap inv = moebius_inverse(circle_map(k));
    auto back = [&](double x, double y) {
        auto p = moebius_apply(inv, Complex(x, y));
        return p.infinite ? Complex(std::numeric_limits<double>::infinity()) : p.z;
    };
    for (const auto& c : rep.strip.candidates)
        rep.cycles.push_back({c, {back(c.s1, -1), back(c.s2, -1), back(c.t2, 1), back(c.t1, 1)}});
    return rep;
}

// distance between the start and the fourth crossing of the integrated trajectory; infinity on halts
inline double closure_residual(const PiecewiseSystem& sys, Complex start, const FlowOptions& opt = {}) {
    try {
        return std::abs(return_point(sys, start, 4, opt) - start);
    } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace pwhs
