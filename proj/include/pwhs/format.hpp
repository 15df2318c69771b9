#pragma once

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "pwhs/field_core.hpp"

namespace pwhs {

using Json = nlohmann::json;

// value rounded to 15 significant digits, for byte-stable JSON
inline double round15(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

inline Json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round15(v);
}

inline Json json_complex(Complex z) { return Json::array({json_number(z.real()), json_number(z.imag())}); }

// shortest round-trip representation
inline std::string csv_number(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace pwhs
