#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pwhs/field_core.hpp"
#include "pwhs/geometry.hpp"
#include "pwhs/jet.hpp"
#include "pwhs/quadrature.hpp"

namespace pwhs {

enum class BasisName { Strip, External, InternalInner, InternalOuter };

inline std::string to_string(BasisName b) {
    switch (b) {
        case BasisName::Strip: return "strip";
        case BasisName::External: return "external";
        case BasisName::InternalInner: return "internal_inner";
        case BasisName::InternalOuter: return "internal_outer";
    }
    return "?";
}

inline BasisName basis_from_string(const std::string& s) {
    if (s == "strip") return BasisName::Strip;
    if (s == "external") return BasisName::External;
    if (s == "internal_inner") return BasisName::InternalInner;
    if (s == "internal_outer") return BasisName::InternalOuter;
    throw ConfigError("unknown basis '" + s + "' (expected strip, external, internal_inner or internal_outer)");
}

inline std::pair<double, double> basis_domain(BasisName b) {
    const double inf = std::numeric_limits<double>::infinity();
    switch (b) {
        case BasisName::InternalInner: return {1.0, 3.0};
        case BasisName::InternalOuter: return {3.0, inf};
        default: return {1.0, inf};
    }
}

// default perturbation degree of each family
inline int basis_ell(BasisName b) {
    return (b == BasisName::InternalInner || b == BasisName::InternalOuter) ? 3 : 4;
}

// The six terms of the closed series for the strip family; the sixth equals twice the fourth.
template <class T>
std::vector<T> strip_terms(const T& r) {
    using std::asin;
    using std::cos;
    using std::sin;
    T th = asin(T(1) / r);
    T r2 = r * r, r3 = r2 * r;
    return {r * cos(th), r2, r2 * th, r3 * cos(th), r3 * r2 * cos(T(3) * th), r2 * r2 * sin(T(2) * th)};
}

template <class T>
std::vector<T> basis_terms(BasisName b, const T& r) {
    using std::asin;
    using std::cos;
    using std::sin;
    const T pi = T(3.141592653589793238462643383279502884L);
    T r2 = r * r, r3 = r2 * r;
    switch (b) {
        case BasisName::Strip: {
            auto t = strip_terms(r);
            t.pop_back();
            return t;
        }
        case BasisName::External: {
            T th = asin(T(1) / r);
            return {r3 * cos(th), r2 * (T(2) * th - pi), r2 * th, sin(T(2) * th), r * cos(th),
                    cos(T(3) * th) / r};
        }
        case BasisName::InternalInner: {
            T t1 = asin(T(1) / r);
            return {r3 * cos(t1), r2 * (pi + T(2) * t1), r2 * (pi - T(2) * t1), r * cos(t1), sin(T(2) * t1)};
        }
        case BasisName::InternalOuter: {
            T t1 = asin(T(1) / r), t2 = asin(T(3) / r);
            return {r3 * cos(t1),        r2 * (pi + T(2) * t1), r * cos(t1),  sin(T(2) * t1), r3 * cos(t2),
                    r2 * (pi - T(2) * t2), r * cos(t2),         sin(T(2) * t2), r2 * (t2 - t1)};
        }
    }
    return {};
}

struct MelnikovBasis {
    BasisName name;
    std::vector<std::function<double(double)>> functions;
    std::pair<double, double> domain;
};

inline MelnikovBasis make_basis(BasisName b) {
    MelnikovBasis mb{b, {}, basis_domain(b)};
    std::size_t n = basis_terms(b, 2.0 + basis_domain(b).first).size();
    for (std::size_t i = 0; i < n; ++i)
        mb.functions.push_back([b, i](double r) { return basis_terms(b, r)[i]; });
    return mb;
}

// ---------------------------------------------------------------- Wronskians

using WJet = Jet<long double, 8>;

inline long double determinant(const Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>& m) {
    return m.partialPivLu().determinant();
}

// det [f_j^(i)(x)] with derivatives propagated by Taylor arithmetic (n <= 9)
inline long double wronskian(const std::vector<std::function<WJet(const WJet&)>>& funcs, long double x) {
    const auto n = static_cast<Eigen::Index>(funcs.size());
    if (n > 9) throw Error("wronskian supports at most 9 functions");
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
    WJet v = WJet::variable(x);
    for (Eigen::Index j = 0; j < n; ++j) {
        WJet fj = funcs[static_cast<std::size_t>(j)](v);
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = fj.derivative(static_cast<std::size_t>(i));
    }
    return determinant(m);
}

// Wronskian of a family's basis with respect to the energy h, r = sqrt(2h)
inline long double basis_wronskian(BasisName b, long double h) {
    std::size_t n = basis_terms(b, 2.0 + basis_domain(b).first).size();
    std::vector<std::function<WJet(const WJet&)>> fs;
    for (std::size_t i = 0; i < n; ++i)
        fs.push_back([b, i](const WJet& hv) { return basis_terms(b, sqrt(WJet(2.0L) * hv))[i]; });
    return wronskian(fs, h);
}

// k-th derivative by central differences with one Richardson step (k <= 8)
inline double numeric_derivative(const std::function<double(double)>& f, double x, int k, double h) {
    auto central = [&](double s) {
        double acc = 0.0, binom = 1.0;
        for (int j = 0; j <= k; ++j) {
            acc += ((j % 2) ? -binom : binom) * f(x + (0.5 * k - j) * s);
            binom = binom * (k - j) / (j + 1);
        }
        return acc / std::pow(s, k);
    };
    if (k == 0) return f(x);
    return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

inline double wronskian_numeric(const std::vector<std::function<double(double)>>& funcs, double x, double h) {
    const auto n = static_cast<Eigen::Index>(funcs.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            m(i, j) = numeric_derivative(funcs[static_cast<std::size_t>(j)], x, static_cast<int>(i), h);
    return m.partialPivLu().determinant();
}

// ---------------------------------------------------------------- coefficients

struct PerturbationCoeffs {
    int ell = 4;
    std::array<std::vector<double>, 3> a, b;  // indexed by Zone, j = 0..ell

    static PerturbationCoeffs zeros(int ell) {
        PerturbationCoeffs p;
        p.ell = ell;
        for (int s = 0; s < 3; ++s) {
            p.a[s].assign(static_cast<std::size_t>(ell) + 1, 0.0);
            p.b[s].assign(static_cast<std::size_t>(ell) + 1, 0.0);
        }
        return p;
    }
    void validate() const {
        for (int s = 0; s < 3; ++s)
            if (a[s].size() != static_cast<std::size_t>(ell) + 1 || b[s].size() != static_cast<std::size_t>(ell) + 1)
                throw ConfigError("perturbation coefficient lists must have length ell + 1");
    }
    double A(Zone z, int j) const {
        const auto& v = a[static_cast<int>(z)];
        return j >= 0 && j < static_cast<int>(v.size()) ? v[static_cast<std::size_t>(j)] : 0.0;
    }
    double B(Zone z, int j) const {
        const auto& v = b[static_cast<int>(z)];
        return j >= 0 && j < static_cast<int>(v.size()) ? v[static_cast<std::size_t>(j)] : 0.0;
    }
    std::size_t size() const { return 6 * (static_cast<std::size_t>(ell) + 1); }
    std::vector<double> flatten() const {
        std::vector<double> v;
        for (int s = 0; s < 3; ++s) {
            v.insert(v.end(), a[s].begin(), a[s].end());
            v.insert(v.end(), b[s].begin(), b[s].end());
        }
        return v;
    }
    static PerturbationCoeffs unflatten(int ell, const std::vector<double>& v) {
        PerturbationCoeffs p = zeros(ell);
        std::size_t k = 0, m = static_cast<std::size_t>(ell) + 1;
        for (int s = 0; s < 3; ++s) {
            for (std::size_t j = 0; j < m; ++j) p.a[s][j] = v[k++];
            for (std::size_t j = 0; j < m; ++j) p.b[s][j] = v[k++];
        }
        return p;
    }
    // perturbation polynomial sum (a_j + i b_j) z^j
    CPoly<double> polynomial(Zone z) const {
        CPoly<double> p;
        for (int j = 0; j <= ell; ++j) p.c.push_back(Complex(A(z, j), B(z, j)));
        return p;
    }
};

// beta[zone][k] = c_{2-k} + i d_{2-k}
struct TransformedCoeffs {
    int ell = 4;
    std::array<std::vector<Complex>, 3> beta;

    Complex at(Zone z, int m) const {
        int k = 2 - m;
        const auto& v = beta[static_cast<int>(z)];
        return k >= 0 && k < static_cast<int>(v.size()) ? v[static_cast<std::size_t>(k)] : Complex(0.0);
    }
    double c(Zone z, int m) const { return at(z, m).real(); }
    double d(Zone z, int m) const { return at(z, m).imag(); }
};

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline TransformedCoeffs transform_coeffs(const PerturbationCoeffs& p) {
    TransformedCoeffs t;
    t.ell = p.ell;
    for (Zone z : {Zone::Plus, Zone::Central, Zone::Minus}) {
        auto& out = t.beta[static_cast<int>(z)];
        Complex m2i(1.0);
        for (int k = 0; k <= p.ell; ++k) {
            Complex s(0.0);
            for (int j = k; j <= p.ell; ++j) s += binomial(j, k) * Complex(p.B(z, j), -p.A(z, j)) / 2.0;
            out.push_back(m2i * s);
            m2i *= -2.0 * I;
        }
    }
    return t;
}

// closed-series coefficients A1..A6 of the strip family
inline std::array<double, 6> strip_series_coeffs(const PerturbationCoeffs& p) {
    const Zone P = Zone::Plus, C = Zone::Central, M = Zone::Minus;
    return {2 * p.B(M, 0) - 2 * p.B(P, 0),
            -PI * (p.A(M, 1) + p.A(P, 1)),
            2 * p.A(M, 1) - 4 * p.A(C, 1) + 2 * p.A(P, 1),
            2 * p.B(P, 2) - 2 * p.B(M, 2),
            (2.0 / 3.0) * (p.B(P, 4) - p.B(M, 4)),
            p.A(M, 3) + p.A(P, 3) - 2 * p.A(C, 3)};
}

inline double strip_series(const std::array<double, 6>& A, double r) {
    auto t = strip_terms(r);
    double s = 0.0;
    for (std::size_t i = 0; i < 6; ++i) s += A[i] * t[i];
    return s;
}

inline void check_ell(BasisName b, const PerturbationCoeffs& p) {
    p.validate();
    if (p.ell > basis_ell(b))
        throw DomainViolation("closed series of basis " + to_string(b) + " covers ell <= " +
                              std::to_string(basis_ell(b)));
}

// coefficients alpha_i of M(r) = sum alpha_i f_i(r) in the family basis
inline std::vector<double> assemble(BasisName b, const PerturbationCoeffs& p) {
    check_ell(b, p);
    const Zone P = Zone::Plus, C = Zone::Central, M = Zone::Minus;
    if (b == BasisName::Strip) {
        auto A = strip_series_coeffs(p);
        return {A[0], A[1], A[2], A[3] + 2 * A[5], A[4]};
    }
    TransformedCoeffs t = transform_coeffs(p);
    auto c = [&](Zone z, int m) { return t.c(z, m); };
    auto d = [&](Zone z, int m) { return t.d(z, m); };
    switch (b) {
        case BasisName::External:
            return {2 * (d(P, 2) - d(M, 2)),
                    c(P, 1) + c(M, 1),
                    -4 * c(C, 1),
                    c(P, -1) + c(M, -1) - 2 * c(C, -1),
                    2 * (d(M, 0) - d(P, 0)),
                    (2.0 / 3.0) * (d(M, -2) - d(P, -2))};
        case BasisName::InternalInner:
            return {2 * (d(C, 2) - d(M, 2)), -c(M, 1), -c(C, 1), 2 * (d(M, 0) - d(C, 0)), c(C, -1) - c(M, -1)};
        case BasisName::InternalOuter:
            return {2 * (d(C, 2) - d(M, 2)), -c(M, 1),         2 * (d(M, 0) - d(C, 0)),
                    c(C, -1) - c(M, -1),      2 * (d(P, 2) - d(C, 2)), -c(P, 1),
                    2 * (d(C, 0) - d(P, 0)),  c(P, -1) - c(C, -1), -2 * c(C, 1)};
        default: break;
    }
    return {};
}

inline void check_domain(BasisName b, double r) {
    auto [lo, hi] = basis_domain(b);
    if (!(r > lo && r < hi)) throw DomainViolation("r = " + std::to_string(r) + " outside the family domain");
}

inline double series_value(BasisName b, const std::vector<double>& alpha, double r) {
    check_domain(b, r);
    auto f = basis_terms(b, r);
    if (alpha.size() != f.size()) throw Error("coefficient count does not match the basis");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += alpha[i] * f[i];
    return s;
}

inline double melnikov_closed(BasisName b, const PerturbationCoeffs& p, double r) {
    return series_value(b, assemble(b, p), r);
}

// ---------------------------------------------------------------- arc integrals

struct ArcSpec {
    Complex center;
    double radius;
    double t_start, t_end;

    Complex at(double t) const { return center + radius * std::exp(I * t); }
    Complex tangent(double t) const { return I * radius * std::exp(I * t); }
};

// Re of the integral of i conj(B(z)) dz along the arc
inline double arc_melnikov_integral(const std::function<Complex(Complex)>& B, const ArcSpec& arc,
                                    const std::vector<Complex>& poles = {}, double abs_tol = 1e-12) {
    if (!(arc.radius > 0)) throw Error("arc radius must be positive");
    for (const auto& p : poles) {
        for (int k = 0; k <= 400; ++k) {
            double t = arc.t_start + (arc.t_end - arc.t_start) * k / 400.0;
            if (std::abs(arc.at(t) - p) < 1e-6) throw PoleOnArc("perturbation pole on the integration arc");
        }
    }
    auto f = [&](double t) { return (I * std::conj(B(arc.at(t))) * arc.tangent(t)).real(); };
    return integrate(f, arc.t_start, arc.t_end, abs_tol);
}

inline std::vector<std::pair<Zone, ArcSpec>> family_arcs(BasisName b, double r) {
    check_domain(b, r);
    double th = std::asin(1.0 / r);
    switch (b) {
        case BasisName::Strip:
        case BasisName::External:
            return {{Zone::Minus, {0.0, r, PI + th, 2 * PI - th}},
                    {Zone::Central, {0.0, r, -th, th}},
                    {Zone::Plus, {0.0, r, th, PI - th}},
                    {Zone::Central, {0.0, r, PI - th, PI + th}}};
        case BasisName::InternalInner:
            return {{Zone::Minus, {-2.0 * I, r, PI - th, 2 * PI + th}},
                    {Zone::Central, {-2.0 * I, r, th, PI - th}}};
        case BasisName::InternalOuter: {
            double t2 = std::asin(3.0 / r);
            return {{Zone::Minus, {-2.0 * I, r, PI - th, 2 * PI + th}},
                    {Zone::Central, {-2.0 * I, r, th, t2}},
                    {Zone::Plus, {-2.0 * I, r, t2, PI - t2}},
                    {Zone::Central, {-2.0 * I, r, PI - t2, PI - th}}};
        }
    }
    return {};
}

// perturbation of zone z in the plane where the family's orbits are circles
inline std::function<Complex(Complex)> zone_perturbation(BasisName b, const PerturbationCoeffs& p, Zone z) {
    std::vector<Complex> g;
    for (int j = 0; j <= p.ell; ++j) g.push_back(Complex(p.A(z, j), p.B(z, j)));
    if (b == BasisName::Strip)
        return [g](Complex u) {
            Complex s(0.0);
            for (std::size_t j = g.size(); j-- > 0;) s = s * u + g[j];
            return s;
        };
    // (b_j - i a_j)/2 = -i (a_j + i b_j)/2
    bool inner = b != BasisName::External;
    return [g, inner](Complex w) {
        Complex s(0.0);
        for (std::size_t j = 0; j < g.size(); ++j) {
            Complex k = -I * g[j] / 2.0;
            int jj = static_cast<int>(j);
            if (inner) s += k * std::pow(w, jj) * std::pow(w + 2.0 * I, 2 - jj);
            else s += k * std::pow(w - 2.0 * I, jj) * std::pow(w, 2 - jj);
        }
        return s;
    };
}

inline double melnikov_quadrature(BasisName b, const PerturbationCoeffs& p, double r) {
    double s = 0.0;
    for (const auto& [zone, arc] : family_arcs(b, r)) s += arc_melnikov_integral(zone_perturbation(b, p, zone), arc);
    return s;
}

// ---------------------------------------------------------------- weighted formula

struct ZoneMelnikovData {
    LevelFunction H;
    std::function<double(Complex)> R = [](Complex) { return 1.0; };
    std::function<Complex(Complex)> perturbation;  // f + i g
};

struct FourArcFamily {
    ArcSpec minus, c1, plus, c2;
    Complex Am, Ap, Bp, Bm;
};

// integral of R (g dx - f dy) along the arc
inline double arc_line_integral(const ZoneMelnikovData& zd, const ArcSpec& arc) {
    auto f = [&](double t) {
        Complex z = arc.at(t), dz = arc.tangent(t), fg = zd.perturbation(z);
        return zd.R(z) * (fg.imag() * dz.real() - fg.real() * dz.imag());
    };
    return integrate(f, arc.t_start, arc.t_end, 1e-12);
}

inline void require_on_line(Complex p, double y) {
    if (std::abs(p.imag() - y) > 1e-9) throw FamilyAbsent("crossing point not on the line Im z = " + std::to_string(y));
}

inline double melnikov_weighted(const std::array<ZoneMelnikovData, 3>& zones, const FourArcFamily& fam) {
    require_on_line(fam.Am, -1);
    require_on_line(fam.Bm, -1);
    require_on_line(fam.Ap, 1);
    require_on_line(fam.Bp, 1);
    const auto& P = zones[0];
    const auto& C = zones[1];
    const auto& M = zones[2];
    auto hx = [](const ZoneMelnikovData& zd, Complex p) { return level_gradient(zd.H, p).first; };
    double w1 = hx(M, fam.Am) / hx(C, fam.Am);
    double w2 = w1 * hx(C, fam.Ap) / hx(P, fam.Ap);
    double w3 = w2 * hx(P, fam.Bp) / hx(C, fam.Bp);
    double w4 = w3 * hx(C, fam.Bm) / hx(M, fam.Bm);
    return w1 * arc_line_integral(C, fam.c1) + w2 * arc_line_integral(P, fam.plus) +
           w3 * arc_line_integral(C, fam.c2) + w4 * arc_line_integral(M, fam.minus);
}

enum class CrossedLine { Upper, Lower };

// families meeting a single line: the first zone is the outer one (Plus or Minus)
inline double melnikov_one_line(const ZoneMelnikovData& outer, const ZoneMelnikovData& central,
                                const ArcSpec& outer_arc, const ArcSpec& central_arc, Complex A, Complex B,
                                CrossedLine line) {
    double y = line == CrossedLine::Upper ? 1.0 : -1.0;
    require_on_line(A, y);
    require_on_line(B, y);
    auto hx = [](const ZoneMelnikovData& zd, Complex p) { return level_gradient(zd.H, p).first; };
    if (line == CrossedLine::Upper) {
        double w1 = hx(outer, A) / hx(central, A);
        double w2 = w1 * hx(central, B) / hx(outer, B);
        return w1 * arc_line_integral(central, central_arc) + w2 * arc_line_integral(outer, outer_arc);
    }
    double w1 = hx(central, A) / hx(outer, A);
    double w2 = w1 * hx(outer, B) / hx(central, B);
    return w1 * arc_line_integral(outer, outer_arc) + w2 * arc_line_integral(central, central_arc);
}

// the circle family of zdot = iz at level h = r^2/2 with its four crossing points
inline FourArcFamily linear_center_family(double h) {
    if (!(h > 0.5)) throw FamilyAbsent("orbits with h <= 1/2 do not cross both lines");
    double r = std::sqrt(2 * h), th = std::asin(1.0 / r), x = r * std::cos(th);
    FourArcFamily f;
    f.minus = {0.0, r, PI + th, 2 * PI - th};
    f.c1 = {0.0, r, -th, th};
    f.plus = {0.0, r, th, PI - th};
    f.c2 = {0.0, r, PI - th, PI + th};
    f.Am = {-x, -1};
    f.Bm = {x, -1};
    f.Bp = {x, 1};
    f.Ap = {-x, 1};
    return f;
}

// ---------------------------------------------------------------- zeros

struct ZeroReport {
    int count = 0;
    std::vector<double> locations;
};

inline ZeroReport count_simple_zeros(const std::function<double(double)>& f, double lo, double hi, int grid_n = 2000) {
    if (grid_n < 100) throw Error("grid_n must be at least 100");
    ZeroReport rep;
    double dx = (hi - lo) / grid_n;
    double xp = lo, fp = f(lo);
    for (int i = 1; i <= grid_n; ++i) {
        double x = lo + i * dx, fx = f(x);
        if (fp == 0.0 || (fp > 0) == (fx > 0)) {
            xp = x;
            fp = fx;
            continue;
        }
        double a = xp, b = x, fa = fp;
        while (b - a > 1e-12 * (1.0 + std::abs(a))) {
            double m = 0.5 * (a + b), fm = f(m);
            if (fm == 0.0) { a = b = m; break; }
            if ((fm > 0) == (fa > 0)) { a = m; fa = fm; } else { b = m; }
        }
        double root = 0.5 * (a + b);
        double d = 1e-7 * (1.0 + std::abs(root));
        double fl = f(root - d), fr = f(root + d);
        double deriv = (fr - fl) / (2 * d);
        if ((fl > 0) != (fr > 0) && std::abs(deriv) > 1e-10) {
            ++rep.count;
            rep.locations.push_back(root);
        }
        xp = x;
        fp = fx;
    }
    return rep;
}

// nonzero C with sum C_i f_i vanishing at every target, each a simple zero
inline std::vector<double> choose_coefficients(const std::vector<std::function<double(double)>>& basis,
                                               std::vector<double> targets) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    const auto k = static_cast<Eigen::Index>(targets.size());
    if (k > n - 1) throw Error("at most n - 1 targets for n basis functions");
    for (int attempt = 0; attempt < 6; ++attempt) {
        Eigen::MatrixXd F(std::max<Eigen::Index>(k, 1), n);
        F.setZero();
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                F(i, j) = basis[static_cast<std::size_t>(j)](targets[static_cast<std::size_t>(i)]);
        // equilibrate columns before taking the null vector
        Eigen::VectorXd cs = F.colwise().norm().transpose();
        for (Eigen::Index j = 0; j < n; ++j)
            if (cs(j) == 0.0) cs(j) = 1.0;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(F * cs.cwiseInverse().asDiagonal(), Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (k > 0) {
            double cond = sv(0) / sv(k - 1);
            if (!(cond < 1e12)) throw RankDeficient("interpolation matrix is numerically singular");
        }
        Eigen::VectorXd c = cs.cwiseInverse().asDiagonal() * svd.matrixV().col(n - 1);
        std::vector<double> coef(c.data(), c.data() + n);
        auto M = [&](double x) {
            double s = 0.0;
            for (std::size_t j = 0; j < coef.size(); ++j) s += coef[j] * basis[j](x);
            return s;
        };
        // nearly dependent bases leave M tiny; rescale to unit size between the targets
        std::vector<double> sorted = targets;
        std::sort(sorted.begin(), sorted.end());
        double peak = 0.0;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
            for (int q = 1; q < 8; ++q) peak = std::max(peak, std::abs(M(sorted[i] + (sorted[i + 1] - sorted[i]) * q / 8.0)));
        if (peak > 0.0)
            for (auto& v : coef) v /= peak;
        bool ok = true;
        for (double x : targets) {
            double d = 1e-5 * (1.0 + std::abs(x));
            double fl = M(x - d), fr = M(x + d);
            if ((fl > 0) == (fr > 0) || std::abs((fr - fl) / (2 * d)) <= 1e-10) ok = false;
        }
        if (ok) return coef;
        for (std::size_t i = 0; i < targets.size(); ++i) targets[i] += 1e-6 * static_cast<double>(i + 1);
    }
    throw RankDeficient("targets could not be realized as simple zeros");
}

// perturbation coefficients whose assembled series equals alpha (minimum norm)
inline PerturbationCoeffs realize_coefficients(BasisName b, const std::vector<double>& alpha, int ell = -1) {
    if (ell < 0) ell = basis_ell(b);
    PerturbationCoeffs z = PerturbationCoeffs::zeros(ell);
    const auto m = static_cast<Eigen::Index>(alpha.size());
    const auto np = static_cast<Eigen::Index>(z.size());
    Eigen::MatrixXd L(m, np);
    for (Eigen::Index j = 0; j < np; ++j) {
        std::vector<double> e(static_cast<std::size_t>(np), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        auto col = assemble(b, PerturbationCoeffs::unflatten(ell, e));
        if (static_cast<Eigen::Index>(col.size()) != m) throw Error("coefficient count does not match the basis");
        for (Eigen::Index i = 0; i < m; ++i) L(i, j) = col[static_cast<std::size_t>(i)];
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(L);
    if (cod.rank() < m) throw RankDeficient("perturbation coefficients do not span the basis");
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd p = cod.solve(rhs);
    return PerturbationCoeffs::unflatten(ell, std::vector<double>(p.data(), p.data() + np));
}

}  // namespace pwhs
