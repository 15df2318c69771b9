#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "pwhs/field_core.hpp"

namespace pwhs {

struct ExtendedPoint {
    Complex z{};
    bool infinite = false;

    static ExtendedPoint infinity() { return {Complex{}, true}; }
};

struct MoebiusMap {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    Complex det() const { return a * d - b * c; }

    void validate() const {
        double m = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
        if (std::abs(det()) <= 1e-12 * m * m) throw DegenerateMap("ad - bc vanishes");
    }

    static MoebiusMap identity() { return {}; }
    // w = -2i/(z-1): |z|=1 -> Im w = 1, |z-2|=1 -> Im w = -1
    static MoebiusMap external() { return {0.0, -2.0 * I, 1.0, -1.0}; }
    // w = -2iz/(z-1): |z-2/3|=1/3 -> Im w = 1, |z|=1 -> Im w = -1
    static MoebiusMap internal() { return {-2.0 * I, 0.0, 1.0, -1.0}; }
    // w = (z-2i)/z, strip -> external circles
    static MoebiusMap strip_to_external() { return {1.0, -2.0 * I, 1.0, 0.0}; }
    // w = z/(z+2i), strip -> internal circles
    static MoebiusMap strip_to_internal() { return {1.0, 0.0, 1.0, 2.0 * I}; }

    Complex derivative(Complex z) const {
        Complex q = c * z + d;
        return det() / (q * q);
    }

    // this after other
    MoebiusMap after(const MoebiusMap& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

inline ExtendedPoint moebius_apply(const MoebiusMap& m, Complex z) {
    Complex den = m.c * z + m.d;
    double scale = std::abs(m.c) * std::abs(z) + std::abs(m.d);
    if (std::abs(den) <= 1e-300 || std::abs(den) <= 1e-15 * scale) return ExtendedPoint::infinity();
    return {(m.a * z + m.b) / den, false};
}

inline ExtendedPoint moebius_apply(const MoebiusMap& m, const ExtendedPoint& p) {
    if (!p.infinite) return moebius_apply(m, p.z);
    if (std::abs(m.c) == 0.0) return ExtendedPoint::infinity();
    return {m.a / m.c, false};
}

// standard inverse (dw - b)/(-cw + a)
inline MoebiusMap moebius_inverse(const MoebiusMap& m) {
    m.validate();
    return {m.d, -m.b, -m.c, m.a};
}

// wdot = m'(z) f(z), z = m^{-1}(w), cleared to a single rational function
inline HolomorphicField pushforward_field(const MoebiusMap& m, const HolomorphicField& f) {
    m.validate();
    const CPoly<double> U{-m.b, m.d};
    const CPoly<double> V{m.a, -m.c};
    int p = std::max(f.numerator.degree(), 0);
    int q = std::max(f.denominator.degree(), 0);
    CPoly<double> P = f.numerator.homogenize(U, V, static_cast<unsigned>(p));
    CPoly<double> Q = f.denominator.homogenize(U, V, static_cast<unsigned>(q));
    int e = 2 + q - p;
    CPoly<double> num = e > 0 ? V.pow(static_cast<unsigned>(e)) * P : P;
    CPoly<double> den = (e < 0 ? V.pow(static_cast<unsigned>(-e)) * Q : Q) * m.det();
    return HolomorphicField::rational(num, den);
}

enum class PartitionKind { ParallelStrip, ExternalCircles, InternalCircles };

inline std::string to_string(PartitionKind k) {
    switch (k) {
        case PartitionKind::ParallelStrip: return "strip";
        case PartitionKind::ExternalCircles: return "external";
        case PartitionKind::InternalCircles: return "internal";
    }
    return "?";
}

enum class Zone { Plus = 0, Central = 1, Minus = 2 };

inline std::string to_string(Zone z) {
    switch (z) {
        case Zone::Plus: return "plus";
        case Zone::Central: return "central";
        case Zone::Minus: return "minus";
    }
    return "?";
}

struct ZoneTag {
    enum class Kind { Plus, Central, Minus, Boundary, Tangency } kind;
    int boundary = 0;  // 1 or 2 when kind == Boundary

    bool operator==(const ZoneTag&) const = default;
    static ZoneTag of(Zone z) {
        switch (z) {
            case Zone::Plus: return {Kind::Plus};
            case Zone::Central: return {Kind::Central};
            default: return {Kind::Minus};
        }
    }
    bool is_zone() const { return kind == Kind::Plus || kind == Kind::Central || kind == Kind::Minus; }
    Zone zone() const {
        return kind == Kind::Plus ? Zone::Plus : kind == Kind::Central ? Zone::Central : Zone::Minus;
    }
};

// Boundary 1 always separates Plus from Central, boundary 2 Central from Minus.
struct PartitionConfig {
    PartitionKind kind = PartitionKind::ParallelStrip;

    struct Constraint {
        int boundary;
        int sign;  // inside the zone iff sign * g > 0
    };

    double g(int id, Complex z) const {
        switch (kind) {
            case PartitionKind::ParallelStrip: return id == 1 ? z.imag() - 1.0 : z.imag() + 1.0;
            case PartitionKind::ExternalCircles:
                return id == 1 ? std::abs(z) - 1.0 : std::abs(z - 2.0) - 1.0;
            case PartitionKind::InternalCircles:
                return id == 1 ? std::abs(z - 2.0 / 3.0) - 1.0 / 3.0 : std::abs(z) - 1.0;
        }
        return 0.0;
    }

    // unit gradient of g as a complex number g_x + i g_y
    Complex grad(int id, Complex z) const {
        if (kind == PartitionKind::ParallelStrip) return I;
        Complex c = center(id);
        Complex u = z - c;
        double n = std::abs(u);
        return n > 0.0 ? u / n : Complex(0.0);
    }

    Complex center(int id) const {
        if (kind == PartitionKind::ExternalCircles) return id == 1 ? 0.0 : 2.0;
        if (kind == PartitionKind::InternalCircles) return id == 1 ? 2.0 / 3.0 : 0.0;
        return 0.0;
    }

    std::vector<Constraint> constraints(Zone zone) const {
        switch (kind) {
            case PartitionKind::ParallelStrip:
                if (zone == Zone::Plus) return {{1, +1}};
                if (zone == Zone::Central) return {{1, -1}, {2, +1}};
                return {{2, -1}};
            case PartitionKind::ExternalCircles:
                if (zone == Zone::Plus) return {{1, -1}};
                if (zone == Zone::Central) return {{1, +1}, {2, +1}};
                return {{2, -1}};
            case PartitionKind::InternalCircles:
                if (zone == Zone::Plus) return {{1, -1}};
                if (zone == Zone::Central) return {{1, +1}, {2, -1}};
                return {{2, +1}};
        }
        return {};
    }

    // the zone on the side of boundary id where sign * g > 0
    Zone side(int id, int sign) const {
        for (Zone z : {Zone::Plus, Zone::Central, Zone::Minus})
            for (const auto& c : constraints(z))
                if (c.boundary == id && c.sign == sign) return z;
        return Zone::Central;
    }

    bool has_tangency_point() const { return kind != PartitionKind::ParallelStrip; }
};

inline ZoneTag classify(const PartitionConfig& cfg, Complex z, double tol = 1e-9) {
    if (cfg.has_tangency_point() && std::abs(z - 1.0) <= tol) return {ZoneTag::Kind::Tangency};
    for (int id : {1, 2})
        if (std::abs(cfg.g(id, z)) <= tol) return {ZoneTag::Kind::Boundary, id};
    for (Zone zone : {Zone::Plus, Zone::Central, Zone::Minus}) {
        bool in = true;
        for (const auto& c : cfg.constraints(zone)) in = in && c.sign * cfg.g(c.boundary, z) > 0.0;
        if (in) return ZoneTag::of(zone);
    }
    return {ZoneTag::Kind::Tangency};
}

inline std::function<double(Complex)> boundary_event_function(const PartitionConfig& cfg, int id) {
    if (id != 1 && id != 2) throw Error("boundary id must be 1 or 2");
    return [cfg, id](Complex z) { return cfg.g(id, z); };
}

}  // namespace pwhs
