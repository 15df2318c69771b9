#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pwhs/format.hpp"
#include "pwhs/geometry.hpp"
#include "pwhs/melnikov.hpp"
#include "pwhs/pwhs_system.hpp"

namespace pwhs {

// Typed access into a JSON document; errors name the offending field path.
class ConfigNode {
public:
    ConfigNode(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    const Json& json() const { return *j_; }
    bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

    ConfigNode operator[](const std::string& key) const {
        if (!j_->is_object()) fail("expected an object");
        auto it = j_->find(key);
        if (it == j_->end()) throw ConfigError("missing field '" + child_path(key) + "'");
        return {*it, child_path(key)};
    }
    ConfigNode operator[](std::size_t i) const {
        if (!j_->is_array() || i >= j_->size()) fail("index out of range");
        return {(*j_)[i], path_ + "[" + std::to_string(i) + "]"};
    }
    std::size_t size() const {
        if (!j_->is_array()) fail("expected an array");
        return j_->size();
    }

    double number() const {
        if (!j_->is_number()) fail("expected a number");
        double v = j_->get<double>();
        if (!std::isfinite(v)) fail("value must be finite");
        return v;
    }
    int integer() const {
        if (!j_->is_number_integer()) fail("expected an integer");
        return j_->get<int>();
    }
    std::string string() const {
        if (!j_->is_string()) fail("expected a string");
        return j_->get<std::string>();
    }
    // [re, im] or a real number
    Complex complex() const {
        if (j_->is_number()) return number();
        if (!j_->is_array() || j_->size() != 2) fail("expected a complex number [re, im]");
        return {(*this)[0].number(), (*this)[1].number()};
    }
    std::vector<double> numbers() const {
        std::vector<double> v;
        for (std::size_t i = 0; i < size(); ++i) v.push_back((*this)[i].number());
        return v;
    }
    std::vector<Complex> complexes() const {
        std::vector<Complex> v;
        for (std::size_t i = 0; i < size(); ++i) v.push_back((*this)[i].complex());
        return v;
    }

    double number_or(const std::string& key, double dflt) const { return has(key) ? (*this)[key].number() : dflt; }
    int integer_or(const std::string& key, int dflt) const { return has(key) ? (*this)[key].integer() : dflt; }
    std::string string_or(const std::string& key, const std::string& dflt) const {
        return has(key) ? (*this)[key].string() : dflt;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("field '" + (path_.empty() ? std::string("<root>") : path_) + "': " + msg);
    }

private:
    std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    const Json* j_;
    std::string path_;
};

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

inline PartitionKind partition_from_string(const ConfigNode& n) {
    std::string s = n.string();
    if (s == "strip") return PartitionKind::ParallelStrip;
    if (s == "external") return PartitionKind::ExternalCircles;
    if (s == "internal") return PartitionKind::InternalCircles;
    n.fail("unknown partition '" + s + "' (expected strip, external or internal)");
}

inline CPoly<double> poly_from(const ConfigNode& n) { return CPoly<double>(n.complexes()); }

inline HolomorphicField field_from_json(const ConfigNode& n) {
    std::string type = n["type"].string();
    auto scale = [&] { return n.has("scale") ? n["scale"].complex() : Complex(1.0); };
    try {
        if (type == "constant") return HolomorphicField::constant(n["value"].complex());
        if (type == "linear_center") return HolomorphicField::linear_center(n["lambda"].complex(), n["center"].complex());
        if (type == "monomial") return HolomorphicField::monomial(n["n"].integer(), scale());
        if (type == "rational_normal")
            return HolomorphicField::rational_normal(n["n"].integer(), n["c"].complex(), scale());
        if (type == "inverse_power") return HolomorphicField::inverse_power(n["n"].integer(), scale());
        if (type == "reciprocal_poly") {
            if (n.has("roots")) return HolomorphicField::reciprocal_roots(scale(), n["roots"].complexes());
            return HolomorphicField::reciprocal_poly(poly_from(n["coefficients"]));
        }
        if (type == "rational") return HolomorphicField::rational(poly_from(n["numerator"]), poly_from(n["denominator"]));
    } catch (const UnsupportedField& e) {
        n.fail(e.what());
    }
    n["type"].fail("unknown field type '" + type + "'");
}

inline Json poly_to_json(const CPoly<double>& p) {
    Json a = Json::array();
    for (const auto& c : p.c) a.push_back(json_complex(c));
    return a;
}

inline Json field_to_json(const HolomorphicField& f) {
    return Json{{"type", "rational"}, {"numerator", poly_to_json(f.numerator)}, {"denominator", poly_to_json(f.denominator)}};
}

inline const char* zone_key(Zone z) {
    switch (z) {
        case Zone::Plus: return "plus";
        case Zone::Central: return "central";
        default: return "minus";
    }
}

inline PerturbationCoeffs perturbation_from_json(const ConfigNode& n, int ell) {
    PerturbationCoeffs p = PerturbationCoeffs::zeros(ell);
    for (Zone z : {Zone::Plus, Zone::Central, Zone::Minus}) {
        if (!n.has(zone_key(z))) continue;
        ConfigNode zn = n[zone_key(z)];
        for (const char* key : {"a", "b"}) {
            if (!zn.has(key)) continue;
            auto v = zn[key].numbers();
            if (v.size() > static_cast<std::size_t>(ell) + 1) zn[key].fail("more than ell + 1 coefficients");
            v.resize(static_cast<std::size_t>(ell) + 1, 0.0);
            (key[0] == 'a' ? p.a : p.b)[static_cast<int>(z)] = v;
        }
    }
    return p;
}

struct RunConfig {
    Json raw;
    PartitionKind partition = PartitionKind::ParallelStrip;
    std::array<HolomorphicField, 3> fields{HolomorphicField::monomial(1, I), HolomorphicField::monomial(1, I),
                                           HolomorphicField::monomial(1, I)};
    double epsilon = 0.0;
    int ell = 4;
    std::optional<PerturbationCoeffs> perturbation;

    ConfigNode root() const { return {raw, ""}; }

    PiecewiseSystem system() const {
        PiecewiseSystem sys({partition}, fields[0], fields[1], fields[2]);
        sys.epsilon = epsilon;
        sys.ell = ell;
        if (perturbation)
            for (Zone z : {Zone::Plus, Zone::Central, Zone::Minus}) sys.set_perturbation(z, perturbation->polynomial(z));
        sys.validate();
        return sys;
    }
};

// Parses the system part of a config; command sections are read by the commands themselves.
inline RunConfig parse_config(const Json& j) {
    RunConfig rc;
    rc.raw = j;
    ConfigNode root(rc.raw, "");
    if (!rc.raw.is_object()) root.fail("expected an object");
    if (root.has("partition")) rc.partition = partition_from_string(root["partition"]);
    if (root.has("zones")) {
        ConfigNode zones = root["zones"];
        for (Zone z : {Zone::Plus, Zone::Central, Zone::Minus})
            rc.fields[static_cast<int>(z)] = field_from_json(zones[zone_key(z)]);
    }
    if (root.has("perturbation")) {
        ConfigNode p = root["perturbation"];
        rc.epsilon = p.number_or("epsilon", 0.0);
        if (rc.epsilon < 0) p["epsilon"].fail("must be >= 0");
        rc.ell = p.integer_or("ell", 4);
        if (rc.ell < 0) p["ell"].fail("must be >= 0");
        rc.perturbation = perturbation_from_json(p, rc.ell);
    }
    return rc;
}

inline RunConfig load_config(const std::string& path) { return parse_config(load_json_file(path)); }

inline MoebiusMap map_from_json(const ConfigNode& n) {
    if (n.json().is_string()) {
        std::string s = n.string();
        if (s == "identity") return MoebiusMap::identity();
        if (s == "external") return MoebiusMap::external();
        if (s == "internal") return MoebiusMap::internal();
        if (s == "strip_to_external") return MoebiusMap::strip_to_external();
        if (s == "strip_to_internal") return MoebiusMap::strip_to_internal();
        n.fail("unknown map '" + s + "'");
    }
    MoebiusMap m{n["a"].complex(), n["b"].complex(), n["c"].complex(), n["d"].complex()};
    m.validate();
    return m;
}

}  // namespace pwhs
