#pragma once

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pwhs/crossing_solver.hpp"
#include "pwhs/format.hpp"
#include "pwhs/melnikov.hpp"
#include "pwhs/poincare.hpp"
#include "pwhs/reference_systems.hpp"

namespace pwhs::verify {

struct Item {
    std::string what;
    bool pass;
};

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = true;
    std::vector<Item> items;
    double seconds = 0.0;
    double time_limit = 0.0;

    void expect(bool ok, std::string what) {
        pass = pass && ok;
        items.push_back({std::move(what), ok});
    }
};

// substitution points for mutation testing of the suite itself
struct Hooks {
    std::function<double(BasisName, const PerturbationCoeffs&, double)> closed = melnikov_closed;
};

inline std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
inline std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

namespace detail {

template <class F>
CheckResult timed(int id, std::string name, double limit, F&& body) {
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    r.time_limit = limit;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.expect(false, std::string("unexpected exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.expect(r.seconds < limit, fmt("runtime below %.0f s", limit));
    return r;
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

inline PerturbationCoeffs random_coeffs(std::mt19937_64& rng, int ell) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(PerturbationCoeffs::zeros(ell).size());
    for (auto& x : v) x = u(rng);
    return PerturbationCoeffs::unflatten(ell, v);
}

}  // namespace detail

inline CheckResult wronskians() {
    return detail::timed(1, "Wronskian values", 1.0, [](CheckResult& r) {
        struct Case {
            BasisName b;
            long double h;
            double want, tol;
            bool relative;
        };
        const Case cases[] = {{BasisName::Strip, 2, 8.0, 1e-5, true},
                              {BasisName::External, 2, -std::sqrt(3.0) * PI / 64, 1e-5, true},
                              {BasisName::InternalInner, 1, -384 * PI, 1e-5, true},
                              {BasisName::InternalOuter, 5, 0.55155, 1e-3, false}};
        for (const auto& c : cases) {
            double got = static_cast<double>(basis_wronskian(c.b, c.h));
            double err = c.relative ? detail::rel_err(got, c.want) : std::abs(got - c.want);
            r.expect(err <= c.tol, fmt("W[%s](%g) = %.10g, expected %.10g (%s error %.2e, tol %.0e)",
                                       to_string(c.b).c_str(), static_cast<double>(c.h), got, c.want,
                                       c.relative ? "relative" : "absolute", err, c.tol));
        }
    });
}

inline CheckResult strip_poincare() {
    return detail::timed(2, "strip Poincare agreement", 30.0, [](CheckResult& r) {
        for (const auto& c : reference::strip_cases()) {
            auto sys = c.params.system();
            double sstar = poincare_fixed_point(c.params);
            double snum = numeric_fixed_point(sys, sstar - 0.3);
            r.expect(std::abs(snum - sstar) <= 1e-6,
                     fmt("%s: closed-form s* = %.12g, numeric fixed point %.12g (diff %.2e)", c.name.c_str(), sstar,
                         snum, std::abs(snum - sstar)));
            double cl = closure_residual(sys, Complex(sstar, -1.0));
            r.expect(cl <= 1e-5, fmt("%s: cycle closure %.2e", c.name.c_str(), cl));
        }
    });
}

inline std::vector<std::pair<std::string, MoebiusMap>> strip_maps() {
    return {{"(z-2i)/z", MoebiusMap::strip_to_external()},
            {"z/(z+2i)", MoebiusMap::strip_to_internal()},
            {"inverse of -2i/(z-1)", moebius_inverse(MoebiusMap::external())},
            {"inverse of -2iz/(z-1)", moebius_inverse(MoebiusMap::internal())}};
}

inline CheckResult mapped_strip_systems() {
    return detail::timed(3, "mapped strip systems", 60.0, [](CheckResult& r) {
        for (const auto& c : reference::strip_cases()) {
            auto sys = c.params.system();
            double sstar = poincare_fixed_point(c.params);
            for (const auto& [mname, m] : strip_maps()) {
                MappedStripSystem ms(m, sys);
                double sf = secant_fixed_point([&](double s) { return ms.poincare(s); }, sstar - 0.3);
                double cl = closure_residual(ms.system, ms.image(sf));
                r.expect(std::abs(sf - sstar) <= 1e-6 && cl <= 1e-5,
                         fmt("%s through %s: fixed point %.12g (closed form %.12g), closure %.2e", c.name.c_str(),
                             mname.c_str(), sf, sstar, cl));
            }
        }
    });
}

inline std::vector<double> sample_radii(BasisName b) {
    switch (b) {
        case BasisName::InternalInner: return {1.5, 2.0, 2.5};
        case BasisName::InternalOuter: return {3.5, 5.0, 8.0};
        default: return {1.5, 2.0, 3.0};
    }
}

inline CheckResult melnikov_consistency(const Hooks& hooks = {}) {
    return detail::timed(4, "Melnikov closed series vs arc integrals", 60.0, [&](CheckResult& r) {
        std::mt19937_64 rng(20240611);
        for (BasisName b : {BasisName::Strip, BasisName::External, BasisName::InternalInner, BasisName::InternalOuter}) {
            double worst = 0.0;
            for (int k = 0; k < 20; ++k) {
                auto p = detail::random_coeffs(rng, basis_ell(b));
                for (double rr : sample_radii(b))
                    worst = std::max(worst, std::abs(hooks.closed(b, p, rr) - melnikov_quadrature(b, p, rr)));
            }
            r.expect(worst <= 1e-8, fmt("basis %s: max |closed - quadrature| = %.2e over 20 sets x 3 radii",
                                        to_string(b).c_str(), worst));
        }
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            auto p = detail::random_coeffs(rng, 4);
            auto t = transform_coeffs(p);
            for (int q = 0; q < 10; ++q) {
                Complex w(u(rng), u(rng));
                if (std::abs(w) < 0.3) w += 1.0;
                for (Zone z : {Zone::Plus, Zone::Central, Zone::Minus}) {
                    Complex lhs(0.0), rhs(0.0);
                    for (int j = 0; j <= 4; ++j) {
                        lhs += t.at(z, 2 - j) * std::pow(w, 2 - j);
                        rhs += Complex(p.B(z, j), -p.A(z, j)) / 2.0 * std::pow(w - 2.0 * I, j) * std::pow(w, 2 - j);
                    }
                    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
                }
            }
        }
        r.expect(worst <= 1e-10, fmt("transformed coefficients vs direct substitution: max error %.2e", worst));
    });
}

struct ZeroTarget {
    BasisName basis;
    std::vector<double> targets;
    double lo, hi;
    int need;
};

inline std::vector<ZeroTarget> zero_targets() {
    return {{BasisName::Strip, {1.5, 2, 3, 4}, 1.0, 40.0, 4},
            {BasisName::External, {1.5, 2, 3, 4, 6}, 1.0, 40.0, 5},
            {BasisName::InternalInner, {1.3, 1.7, 2.2, 2.7}, 1.0, 3.0, 4},
            {BasisName::InternalOuter, {3.1, 3.3, 3.6, 4, 4.5, 5.1, 5.8, 6.6}, 3.0, 40.0, 8}};
}

inline CheckResult zero_counts(const Hooks& hooks = {}) {
    return detail::timed(5, "zero-count realizations", 10.0, [&](CheckResult& r) {
        for (const auto& zt : zero_targets()) {
            auto basis = make_basis(zt.basis);
            auto alpha = choose_coefficients(basis.functions, zt.targets);
            auto p = realize_coefficients(zt.basis, alpha);
            auto M = [&](double x) { return hooks.closed(zt.basis, p, x); };
            double eps = 1e-9 * (1.0 + zt.lo);
            auto rep = count_simple_zeros(M, zt.lo + eps, zt.hi - (std::isinf(zt.hi) ? 0 : eps), 4000);
            std::string locs;
            for (double x : rep.locations) locs += fmt(" %.9g", x);
            r.expect(rep.count >= zt.need, fmt("basis %s: %d simple zeros on (%g, %g), need >= %d:%s",
                                               to_string(zt.basis).c_str(), rep.count, zt.lo, zt.hi, zt.need,
                                               locs.c_str()));
        }
    });
}

inline CheckResult crossing_cycles() {
    return detail::timed(6, "crossing-cycle reproduction", 60.0, [](CheckResult& r) {
        auto closure_items = [&](const std::string& name, const PiecewiseSystem& sys, Complex start) {
            double cl = closure_residual(sys, start);
            r.expect(cl <= 1e-5, fmt("%s: cycle through (%.9g, %.9g) integrated closure %.2e", name.c_str(),
                                     start.real(), start.imag(), cl));
        };
        {
            auto c = reference::strip_linear_example();
            auto rep = solve_cycles(c.crossing(), {}, 40, c.name);
            auto valid = filter_valid_cycles(rep.candidates);
            bool hit = false;
            for (const auto& v : valid)
                hit = hit || (std::abs(v.s1 - -1.652018966) <= 1e-6 && std::abs(v.t1 - -1.054037933) <= 1e-6);
            r.expect(valid.size() == 1 && hit, fmt("strip, linear central zone: %zu valid cycle(s), root (-1.652018966, -1.054037933) %s",
                                                   valid.size(), hit ? "found" : "missing"));
            for (const auto& v : valid) closure_items(c.name, c.system(), Complex(v.s1, -1.0));
        }
        {
            auto c = reference::strip_quadratic_example();
            auto rep = solve_cycles(c.crossing(), {}, 40, c.name);
            auto valid = filter_valid_cycles(rep.candidates);
            bool rejected = false;
            for (const auto& v : rep.candidates)
                rejected = rejected || (!v.valid && std::abs(v.s1 - -1.9801740022092) <= 1e-6 &&
                                        std::abs(v.t1 - 3.2995684935354) <= 1e-6);
            r.expect(rep.candidates.size() == 3 && valid.size() == 2 && rejected,
                     fmt("strip, quadratic central zone: %zu candidates, %zu valid, (-1.98017400221, 3.29956849354) %s",
                         rep.candidates.size(), valid.size(), rejected ? "rejected" : "not rejected"));
            for (const auto& v : valid) closure_items(c.name, c.system(), Complex(v.s1, -1.0));
        }
        auto circle = [&](const reference::CircleCrossingCase& c, const std::vector<std::array<double, 2>>& want,
                          bool check_t) {
            auto rep = solve_circle_class(c.kind, c.centers, {}, 40, c.name);
            std::vector<const CircleCycle*> valid;
            for (const auto& cy : rep.cycles)
                if (cy.strip.valid) valid.push_back(&cy);
            int found = 0;
            for (const auto& w : want)
                for (const auto* v : valid)
                    if (std::abs(v->strip.s1 - w[0]) <= 1e-6 && (!check_t || std::abs(v->strip.t1 - w[1]) <= 1e-6))
                        ++found;
            r.expect(valid.size() == want.size() && found == static_cast<int>(want.size()),
                     fmt("%s: %zu valid cycles, %d of %zu expected crossings matched", c.name.c_str(), valid.size(),
                         found, want.size()));
            auto sys = c.system();
            for (const auto* v : valid) closure_items(c.name, sys, v->circle[0]);
        };
        circle(reference::external_circles_example(), {{-2.422768823, 0}, {-1.632401134, 0}}, false);
        circle(reference::internal_circles_example(), {{-1.260240290, -2.5680344499}, {-1.128596670, -1.6659961088}}, true);
    });
}

inline CheckResult identities() {
    return detail::timed(7, "identity and symmetry suite", 10.0, [](CheckResult& r) {
        double worst = 0.0;
        for (int k = 1; k <= 1000; ++k) {
            double rr = 1.0 + 9.0 * k / 1001.0;
            auto A6 = strip_series({0, 0, 0, 0, 0, 1.7}, rr);
            auto A4 = strip_series({0, 0, 0, 2 * 1.7, 0, 0}, rr);
            worst = std::max(worst, std::abs(A6 - A4));
        }
        r.expect(worst <= 1e-12, fmt("f6 = 2 f4 on 1000 radii in (1, 10): max diff %.2e", worst));

        auto H = level_function(HolomorphicField::rational_normal(2, 1.0, I));
        worst = 0.0;
        for (int k = 0; k <= 1000; ++k) {
            double x = -10.0 + 20.0 * k / 1000.0;
            worst = std::max(worst, std::abs(H(x, 1.0) - H(x, -1.0)));
        }
        r.expect(worst <= 1e-12, fmt("iz^2/(1+z): max |H(x,1) - H(x,-1)| = %.2e", worst));

        for (auto [name, f] : {std::pair<const char*, HolomorphicField>{"iz^3", HolomorphicField::monomial(3, I)},
                               {"i/z", HolomorphicField::inverse_power(1, I)}}) {
            auto L = level_function(f);
            worst = 0.0;
            for (int i = 0; i < 50; ++i)
                for (int j = 0; j < 50; ++j) {
                    double x = -3.0 + 6.0 * (i + 0.5) / 50, y = -3.0 + 6.0 * (j + 0.5) / 50;
                    worst = std::max(worst, std::abs(L(x, y) - L(x, -y)));
                }
            r.expect(worst <= 1e-12, fmt("%s: max |H(x,y) - H(x,-y)| on 50x50 grid = %.2e", name, worst));
        }

        auto partner_residual = [](const CrossingSystem<long double>& cs, const CycleReport& rep) {
            long double w = 0;
            for (const auto& c : rep.candidates) {
                auto F = cs.residual(cs.s2(c.s1), cs.t2(c.t1));
                w = std::max({w, std::abs(F[0]), std::abs(F[1])});
            }
            return static_cast<double>(w);
        };
        for (const auto& c : {reference::strip_linear_example(), reference::strip_quadratic_example()}) {
            auto cs = c.crossing();
            double w = partner_residual(cs, solve_cycles(cs));
            r.expect(w <= 1e-9, fmt("%s: involution partner residual %.2e", c.name.c_str(), w));
        }
        for (const auto& c : {reference::external_circles_example(), reference::internal_circles_example()}) {
            auto cs = circle_crossing_system<long double>(c.kind, c.centers);
            double w = partner_residual(cs, solve_cycles(cs));
            r.expect(w <= 1e-9, fmt("%s: involution partner residual %.2e", c.name.c_str(), w));
        }
    });
}

inline CheckResult bezout() {
    return detail::timed(8, "Bezout bound", 10.0, [](CheckResult& r) {
        r.expect(bezout_bound(1) == 1, fmt("bezout_bound(1) = %d", bezout_bound(1)));
        r.expect(bezout_bound(2) == 3, fmt("bezout_bound(2) = %d", bezout_bound(2)));
        for (const auto& c : {reference::strip_linear_example(), reference::strip_quadratic_example()}) {
            auto valid = filter_valid_cycles(solve_cycles(c.crossing()).candidates);
            int bound = bezout_bound(c.central_degree);
            r.expect(static_cast<int>(valid.size()) <= bound,
                     fmt("%s: %zu valid cycles <= bound %d", c.name.c_str(), valid.size(), bound));
        }
    });
}

inline std::vector<CheckResult> run_all(const Hooks& hooks = {}) {
    return {wronskians(),           strip_poincare(),  mapped_strip_systems(), melnikov_consistency(hooks),
            zero_counts(hooks),     crossing_cycles(), identities(),          bezout()};
}

inline Json to_json(const std::vector<CheckResult>& results) {
    Json checks = Json::array();
    bool all = true;
    for (const auto& r : results) {
        Json items = Json::array();
        for (const auto& it : r.items) items.push_back({{"detail", it.what}, {"pass", it.pass}});
        checks.push_back({{"check", r.id}, {"name", r.name}, {"pass", r.pass}, {"items", items}});
        all = all && r.pass;
    }
    return {{"checks", checks}, {"pass", all}};
}

}  // namespace pwhs::verify
