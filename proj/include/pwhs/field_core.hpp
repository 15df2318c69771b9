#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pwhs/error.hpp"
#include "pwhs/poly.hpp"

namespace pwhs {

using Complex = std::complex<double>;
inline constexpr Complex I{0.0, 1.0};
inline constexpr double PI = 3.141592653589793238462643383279502884;

namespace catalog {
struct Constant { Complex value; };
// f = lambda (z - center), lambda = a + ib
struct LinearCenter { Complex lambda; Complex center; };
// f = scale z^n
struct Monomial { int n; Complex scale{1.0, 0.0}; };
// f = scale z^n / (1 + c z^(n-1))
struct RationalNormal { int n; Complex c; Complex scale{1.0, 0.0}; };
// f = scale / z^n
struct InversePower { int n; Complex scale{1.0, 0.0}; };
// f = 1 / p(z)
struct ReciprocalPoly { CPoly<double> p; };
}  // namespace catalog

using CatalogTag = std::variant<catalog::Constant, catalog::LinearCenter, catalog::Monomial,
                                catalog::RationalNormal, catalog::InversePower,
                                catalog::ReciprocalPoly>;

struct HolomorphicField {
    CPoly<double> numerator;
    CPoly<double> denominator;
    std::optional<CatalogTag> tag;

    static HolomorphicField rational(CPoly<double> num, CPoly<double> den) {
        if (den.is_zero()) throw UnsupportedField("denominator is the zero polynomial");
        return {std::move(num), std::move(den), std::nullopt};
    }
    static HolomorphicField constant(Complex v) {
        return {CPoly<double>{v}, CPoly<double>{1.0}, catalog::Constant{v}};
    }
    static HolomorphicField linear_center(Complex lambda, Complex center) {
        return {CPoly<double>{-lambda * center, lambda}, CPoly<double>{1.0},
                catalog::LinearCenter{lambda, center}};
    }
    static HolomorphicField monomial(int n, Complex scale = 1.0) {
        if (n < 0) throw UnsupportedField("monomial degree must be non-negative");
        CPoly<double> num;
        num.c.assign(static_cast<std::size_t>(n) + 1, 0.0);
        num.c.back() = scale;
        return {num, CPoly<double>{1.0}, catalog::Monomial{n, scale}};
    }
    static HolomorphicField rational_normal(int n, Complex c, Complex scale = 1.0) {
        if (n < 1) throw UnsupportedField("rational normal form needs n >= 1");
        CPoly<double> num, den;
        num.c.assign(static_cast<std::size_t>(n) + 1, 0.0);
        num.c.back() = scale;
        den.c.assign(static_cast<std::size_t>(n), 0.0);
        den.c[0] += 1.0;
        den.c[static_cast<std::size_t>(n) - 1] += c;
        return {num, den, catalog::RationalNormal{n, c, scale}};
    }
    static HolomorphicField inverse_power(int n, Complex scale = 1.0) {
        if (n < 1) throw UnsupportedField("inverse power needs n >= 1");
        CPoly<double> den;
        den.c.assign(static_cast<std::size_t>(n) + 1, 0.0);
        den.c.back() = 1.0;
        return {CPoly<double>{scale}, den, catalog::InversePower{n, scale}};
    }
    static HolomorphicField reciprocal_poly(CPoly<double> p) {
        if (p.is_zero()) throw UnsupportedField("reciprocal of the zero polynomial");
        return {CPoly<double>{1.0}, p, catalog::ReciprocalPoly{p}};
    }
    // 1 / (z1 * prod (z - root))
    static HolomorphicField reciprocal_roots(Complex z1, const std::vector<Complex>& roots) {
        CPoly<double> p{z1};
        for (const auto& r : roots) p = p * CPoly<double>{-r, 1.0};
        return reciprocal_poly(p);
    }

    // magnitude scale used for the relative pole test
    double denominator_scale(Complex z) const {
        double s = 0.0, az = std::abs(z), pw = 1.0;
        for (const auto& v : denominator.c) {
            s += std::abs(v) * pw;
            pw *= az;
        }
        return s;
    }
};

inline Complex eval_rational(const HolomorphicField& f, Complex z) {
    Complex den = f.denominator(z);
    double scale = f.denominator_scale(z);
    if (std::abs(den) <= 1e-14 * (scale > 0.0 ? scale : 1.0))
        throw PoleEvaluation("field evaluated at a pole");
    return f.numerator(z) / den;
}

inline Complex eval_field(const HolomorphicField& f, Complex z) {
    if (!f.tag) return eval_rational(f, z);
    Complex den = f.denominator(z);
    double scale = f.denominator_scale(z);
    if (std::abs(den) <= 1e-14 * (scale > 0.0 ? scale : 1.0))
        throw PoleEvaluation("field evaluated at a pole");
    return std::visit(
        [&](const auto& t) -> Complex {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, catalog::Constant>) return t.value;
            else if constexpr (std::is_same_v<T, catalog::LinearCenter>) return t.lambda * (z - t.center);
            else if constexpr (std::is_same_v<T, catalog::Monomial>) return t.scale * std::pow(z, t.n);
            else if constexpr (std::is_same_v<T, catalog::RationalNormal>)
                return t.scale * std::pow(z, t.n) / (1.0 + t.c * std::pow(z, t.n - 1));
            else if constexpr (std::is_same_v<T, catalog::InversePower>) return t.scale / std::pow(z, t.n);
            else return 1.0 / t.p(z);
        },
        *f.tag);
}

// exact flow of zdot = lambda (z - center)
inline Complex linear_flow(Complex lambda, Complex center, Complex z0, double t) {
    return (z0 - center) * std::exp(lambda * t) + center;
}

struct LevelFunction {
    std::function<double(double, double)> H;
    // closed-form (H_x, H_y); empty means finite differences
    std::function<std::pair<double, double>(double, double)> gradient;
    std::vector<Complex> domain_exclusions;

    double operator()(double x, double y) const { return H(x, y); }
};

namespace detail {

// G with G' = 1/f for the closed-form branch
inline std::function<Complex(Complex)> antiderivative_of_reciprocal(const HolomorphicField& f,
                                                                   std::vector<Complex>& excl) {
    auto poly_g = [](CPoly<double> p) {
        CPoly<double> g = p.antiderivative();
        return std::function<Complex(Complex)>([g](Complex z) { return g(z); });
    };
    if (f.tag) {
        return std::visit(
            [&](const auto& t) -> std::function<Complex(Complex)> {
                using T = std::decay_t<decltype(t)>;
                if constexpr (std::is_same_v<T, catalog::Constant>) {
                    Complex v = t.value;
                    return [v](Complex z) { return z / v; };
                } else if constexpr (std::is_same_v<T, catalog::LinearCenter>) {
                    excl.push_back(t.center);
                    Complex l = t.lambda, c = t.center;
                    return [l, c](Complex z) { return std::log(z - c) / l; };
                } else if constexpr (std::is_same_v<T, catalog::Monomial>) {
                    int n = t.n;
                    Complex k = t.scale;
                    if (n >= 1) excl.push_back(0.0);
                    if (n == 1) return [k](Complex z) { return std::log(z) / k; };
                    return [n, k](Complex z) { return std::pow(z, 1 - n) / (double(1 - n) * k); };
                } else if constexpr (std::is_same_v<T, catalog::RationalNormal>) {
                    int n = t.n;
                    Complex k = t.scale, c = t.c;
                    excl.push_back(0.0);
                    if (n == 1) return [k, c](Complex z) { return (1.0 + c) * std::log(z) / k; };
                    return [n, k, c](Complex z) {
                        return (std::pow(z, 1 - n) / double(1 - n) + c * std::log(z)) / k;
                    };
                } else if constexpr (std::is_same_v<T, catalog::InversePower>) {
                    int n = t.n;
                    Complex k = t.scale;
                    return [n, k](Complex z) { return std::pow(z, n + 1) / (double(n + 1) * k); };
                } else {
                    return poly_g(t.p);
                }
            },
            *f.tag);
    }
    if (f.numerator.degree() == 0) return poly_g(f.denominator * (1.0 / f.numerator.c[0]));
    throw UnsupportedField("no closed-form level function for this field");
}

}  // namespace detail

// H = -Im G with G' = 1/f and G without constant term.
inline LevelFunction level_function(const HolomorphicField& f) {
    LevelFunction L;
    auto G = detail::antiderivative_of_reciprocal(f, L.domain_exclusions);
    L.H = [G](double x, double y) { return -G(Complex(x, y)).imag(); };
    L.gradient = [f](double x, double y) {
        Complex z(x, y);
        Complex r = f.denominator(z) / f.numerator(z);
        return std::pair<double, double>{-r.imag(), -r.real()};
    };
    return L;
}

inline std::pair<double, double> level_gradient(const LevelFunction& L, Complex p) {
    for (const auto& e : L.domain_exclusions)
        if (std::abs(p - e) < 1e-12) throw ExclusionPoint("gradient requested at an excluded point");
    if (L.gradient) return L.gradient(p.real(), p.imag());
    double h = 1e-6 * (1.0 + std::abs(p));
    double x = p.real(), y = p.imag();
    return {(L.H(x + h, y) - L.H(x - h, y)) / (2 * h), (L.H(x, y + h) - L.H(x, y - h)) / (2 * h)};
}

}  // namespace pwhs
