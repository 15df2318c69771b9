#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pwhs/geometry.hpp"

namespace pwhs {

struct PiecewiseSystem {
    PartitionConfig config;
    std::array<HolomorphicField, 3> fields;  // indexed by Zone
    std::array<CPoly<double>, 3> perturbation{};
    double epsilon = 0.0;
    int ell = 4;  // maximum perturbation degree

    PiecewiseSystem(PartitionConfig cfg, HolomorphicField plus, HolomorphicField central,
                    HolomorphicField minus)
        : config(cfg), fields{std::move(plus), std::move(central), std::move(minus)} {}

    const HolomorphicField& field(Zone z) const { return fields[static_cast<int>(z)]; }

    void set_perturbation(Zone z, CPoly<double> h) { perturbation[static_cast<int>(z)] = std::move(h); }

    void validate() const {
        if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be >= 0");
        for (const auto& p : perturbation)
            if (p.degree() > ell) throw ConfigError("perturbation degree exceeds ell");
    }

    Complex rhs(Zone z, Complex w) const {
        Complex v = eval_field(field(z), w);
        const auto& h = perturbation[static_cast<int>(z)];
        if (epsilon != 0.0 && !h.c.empty()) v += epsilon * h(w);
        return v;
    }
};

struct Sample {
    double t;
    Complex z;
};

struct Segment {
    Zone zone;
    std::vector<Sample> samples;
};

struct CrossingEvent {
    double t;
    Complex z;
    int boundary;
    int direction;  // +1 when g increases through the crossing
};

struct Trajectory {
    std::vector<Segment> segments;
    std::vector<CrossingEvent> events;

    Complex start() const { return segments.front().samples.front().z; }
    Complex end() const { return segments.back().samples.back().z; }
    double end_time() const { return segments.back().samples.back().t; }
};

// flow halted by a non-transversal contact with the discontinuity set
class FlowHalt : public Error {
public:
    FlowHalt(const std::string& what, Trajectory partial) : Error(what), partial_(std::move(partial)) {}
    const Trajectory& partial() const { return partial_; }

private:
    Trajectory partial_;
};

class TangencyEncountered : public FlowHalt {
public:
    using FlowHalt::FlowHalt;
};

class SlidingEncountered : public FlowHalt {
public:
    using FlowHalt::FlowHalt;
};

struct FlowOptions {
    double rtol = 1e-10;
    double atol = 1e-10;
    double h0 = 1e-3;
    double hmin = 1e-12;
    double hmax = 0.05;
    double event_tol = 1e-9;
    double normal_tol = 1e-9;
    double pole_tol = 1e-8;
    double max_time = 1e3;
    int max_crossings = -1;  // negative: unlimited
};

enum class CrossingType { Transversal, Tangency, SlidingRegion };

inline std::string to_string(CrossingType c) {
    switch (c) {
        case CrossingType::Transversal: return "transversal";
        case CrossingType::Tangency: return "tangency";
        case CrossingType::SlidingRegion: return "sliding";
    }
    return "?";
}

namespace detail {

// Dormand-Prince 5(4)
struct DP45 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    template <class F>
    static std::pair<Complex, Complex> step(const F& f, Complex z, double h) {
        Complex k1 = f(z);
        Complex k2 = f(z + h * (a21 * k1));
        Complex k3 = f(z + h * (a31 * k1 + a32 * k2));
        Complex k4 = f(z + h * (a41 * k1 + a42 * k2 + a43 * k3));
        Complex k5 = f(z + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        Complex k6 = f(z + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Complex z5 = z + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Complex k7 = f(z5);
        Complex err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        return {z5, err};
    }
};

}  // namespace detail

inline double normal_component(const PartitionConfig& cfg, int boundary, Complex z, Complex v) {
    Complex n = cfg.grad(boundary, z);
    return n.real() * v.real() + n.imag() * v.imag();
}

inline int on_boundary(const PartitionConfig& cfg, Complex z, double tol = 1e-9) {
    double g1 = std::abs(cfg.g(1, z)), g2 = std::abs(cfg.g(2, z));
    if (g1 <= tol && g1 <= g2) return 1;
    if (g2 <= tol) return 2;
    return 0;
}

// Classification of a boundary point from the normal components of both adjacent fields.
inline CrossingType crossing_type(const PiecewiseSystem& sys, Complex z, const FlowOptions& opt = {}) {
    int id = on_boundary(sys.config, z, opt.event_tol);
    if (id == 0) throw Error("crossing_type called away from the discontinuity set");
    double n1 = normal_component(sys.config, id, z, sys.rhs(sys.config.side(id, +1), z));
    double n2 = normal_component(sys.config, id, z, sys.rhs(sys.config.side(id, -1), z));
    if (std::abs(n1) < opt.normal_tol || std::abs(n2) < opt.normal_tol) return CrossingType::Tangency;
    return (n1 > 0) == (n2 > 0) ? CrossingType::Transversal : CrossingType::SlidingRegion;
}

struct ZoneRun {
    Segment segment;
    std::optional<CrossingEvent> exit;
};

inline ZoneRun integrate_in_zone(const PiecewiseSystem& sys, Complex z0, Zone zone, double t0,
                                 double t_max, const FlowOptions& opt = {}) {
    const auto& cfg = sys.config;
    const auto cons = cfg.constraints(zone);
    const auto& fld = sys.field(zone);
    auto f = [&](Complex w) { return sys.rhs(zone, w); };
    auto check_pole = [&](Complex w) {
        if (std::abs(fld.denominator(w)) < opt.pole_tol) throw PoleApproach("trajectory approached a pole");
    };

    ZoneRun run{{zone, {{t0, z0}}}, std::nullopt};
    double t = t0, h = opt.h0;
    Complex z = z0;
    while (t < t_max) {
        h = std::min({h, opt.hmax, t_max - t});
        auto [zn, err] = detail::DP45::step(f, z, h);
        double sc = opt.atol + opt.rtol * std::max(std::abs(z), std::abs(zn));
        double en = std::abs(err) / sc;
        if (!std::isfinite(en)) en = 1e10;
        if (en > 1.0 && h > opt.hmin) {
            h = std::max(opt.hmin, h * std::max(0.2, 0.9 * std::pow(en, -0.2)));
            continue;
        }
        // first constraint violated over this step
        const PartitionConfig::Constraint* hit = nullptr;
        for (const auto& c : cons)
            if (c.sign * cfg.g(c.boundary, zn) < 0.0) hit = &c;
        if (hit) {
            double lo = 0.0, hi = h;
            Complex zl = z, zh = zn;
            // earliest crossing among violated constraints
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                Complex zm = detail::DP45::step(f, z, mid).first;
                bool out = false;
                for (const auto& c : cons) {
                    if (c.sign * cfg.g(c.boundary, zm) < 0.0) {
                        out = true;
                        hit = &c;
                    }
                }
                if (out) {
                    hi = mid;
                    zh = zm;
                } else {
                    lo = mid;
                    zl = zm;
                }
                if (std::abs(cfg.g(hit->boundary, zh)) <= 1e-13 && std::abs(cfg.g(hit->boundary, zl)) <= 1e-13)
                    break;
            }
            Complex ze = std::abs(cfg.g(hit->boundary, zl)) <= std::abs(cfg.g(hit->boundary, zh)) ? zl : zh;
            double te = t + (ze == zl ? lo : hi);
            run.segment.samples.push_back({te, ze});
            run.exit = CrossingEvent{te, ze, hit->boundary, -hit->sign};
            return run;
        }
        check_pole(zn);
        t += h;
        z = zn;
        run.segment.samples.push_back({t, z});
        h *= (en > 0.0) ? std::min(5.0, 0.9 * std::pow(en, -0.2)) : 5.0;
    }
    return run;
}

namespace detail {
inline Zone entry_zone(const PiecewiseSystem& sys, Complex z, int id, Trajectory& tr,
                       const FlowOptions& opt) {
    auto ct = crossing_type(sys, z, opt);
    if (ct == CrossingType::Tangency) throw TangencyEncountered("tangency with the discontinuity set", tr);
    if (ct == CrossingType::SlidingRegion) throw SlidingEncountered("sliding region reached", tr);
    double n = normal_component(sys.config, id, z, sys.rhs(sys.config.side(id, +1), z));
    return sys.config.side(id, n > 0 ? +1 : -1);
}
}  // namespace detail

inline Trajectory flow(const PiecewiseSystem& sys, Complex z0, const FlowOptions& opt = {}) {
    sys.validate();
    Trajectory tr;
    auto tag = classify(sys.config, z0, opt.event_tol);
    if (tag.kind == ZoneTag::Kind::Tangency) {
        tr.segments.push_back({Zone::Central, {{0.0, z0}}});
        throw TangencyEncountered("start point is the tangency point of the circles", tr);
    }
    Zone zone;
    if (tag.kind == ZoneTag::Kind::Boundary) {
        tr.segments.push_back({Zone::Central, {{0.0, z0}}});
        zone = detail::entry_zone(sys, z0, tag.boundary, tr, opt);
        tr.segments.clear();
    } else {
        zone = tag.zone();
    }
    double t = 0.0;
    Complex z = z0;
    int crossings = 0;
    while (true) {
        ZoneRun run = integrate_in_zone(sys, z, zone, t, opt.max_time, opt);
        tr.segments.push_back(std::move(run.segment));
        if (!run.exit) break;
        const auto& ev = *run.exit;
        tr.events.push_back(ev);
        ++crossings;
        t = ev.t;
        z = ev.z;
        if (sys.config.has_tangency_point() && std::abs(z - 1.0) <= opt.event_tol)
            throw TangencyEncountered("trajectory reached the tangency point of the circles", tr);
        auto ct = crossing_type(sys, z, opt);
        if (ct == CrossingType::Tangency) throw TangencyEncountered("tangency with the discontinuity set", tr);
        if (ct == CrossingType::SlidingRegion) throw SlidingEncountered("sliding region reached", tr);
        if (opt.max_crossings >= 0 && crossings >= opt.max_crossings) break;
        zone = sys.config.side(ev.boundary, ev.direction);
    }
    return tr;
}

// Return point after n crossings; Timeout if they do not occur within max_time.
inline Complex return_point(const PiecewiseSystem& sys, Complex z0, int n = 4, FlowOptions opt = {}) {
    opt.max_crossings = n;
    Trajectory tr = flow(sys, z0, opt);
    if (static_cast<int>(tr.events.size()) < n) throw Timeout("fewer crossings than requested");
    return tr.events.back().z;
}

namespace detail {
inline std::string shortest(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}
}  // namespace detail

inline void write_csv(std::ostream& os, const Trajectory& tr) {
    os << "t,re,im,zone,event_flag\n";
    std::size_t ev = 0;
    for (std::size_t s = 0; s < tr.segments.size(); ++s) {
        const auto& seg = tr.segments[s];
        for (std::size_t k = 0; k < seg.samples.size(); ++k) {
            if (s > 0 && k == 0) continue;  // junction already written
            const auto& p = seg.samples[k];
            bool is_event = (k + 1 == seg.samples.size()) && ev < tr.events.size() &&
                            tr.events[ev].t == p.t;
            if (is_event) ++ev;
            os << detail::shortest(p.t) << ',' << detail::shortest(p.z.real()) << ','
               << detail::shortest(p.z.imag()) << ',' << to_string(seg.zone) << ',' << (is_event ? 1 : 0)
               << '\n';
        }
    }
}

}  // namespace pwhs
