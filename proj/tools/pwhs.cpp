#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "pwhs/pwhs.hpp"

using namespace pwhs;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kHalt = 2;

struct Output {
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw ConfigError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file.is_open() ? static_cast<std::ostream&>(file) : std::cout; }
    bool to_file() const { return file.is_open(); }
    std::ofstream file;
};

void write_json(std::ostream& os, const Json& j) { os << j.dump(2) << '\n'; }

ConfigNode section(const RunConfig& rc, const char* name, Json& empty) {
    ConfigNode root = rc.root();
    if (root.has(name)) return root[name];
    empty = Json::object();
    return {empty, name};
}

int cmd_simulate(const RunConfig& rc, const std::string& out) {
    Json empty;
    ConfigNode s = section(rc, "simulate", empty);
    Complex start = s.has("start") ? s["start"].complex() : Complex(2.0, 0.0);
    FlowOptions opt;
    opt.max_time = s.number_or("max_time", opt.max_time);
    opt.max_crossings = s.integer_or("max_crossings", 4);
    opt.hmax = s.number_or("max_step", opt.hmax);
    if (!(opt.max_time > 0)) s["max_time"].fail("must be positive");
    auto sys = rc.system();
    Output o(out);
    try {
        write_csv(o.stream(), flow(sys, start, opt));
    } catch (const FlowHalt& h) {
        write_csv(o.stream(), h.partial());
        std::cerr << "pwhs: simulation halted: " << h.what() << '\n';
        return kHalt;
    }
    return kOk;
}

int cmd_portrait(const RunConfig& rc, const std::string& out) {
    Json empty;
    ConfigNode p = section(rc, "portrait", empty);
    auto axis = [&](const char* key, double lo, double hi, int n) {
        if (!p.has(key)) return std::tuple<double, double, int>{lo, hi, n};
        ConfigNode a = p[key];
        if (a.size() != 3) a.fail("expected [lo, hi, n]");
        int k = a[2].integer();
        if (k < 2) a[2].fail("need at least 2 grid points");
        return std::tuple<double, double, int>{a[0].number(), a[1].number(), k};
    };
    auto [x0, x1, nx] = axis("x", -4.0, 4.0, 81);
    auto [y0, y1, ny] = axis("y", -4.0, 4.0, 81);
    auto sys = rc.system();
    std::array<std::optional<LevelFunction>, 3> H;
    for (int z = 0; z < 3; ++z) {
        try {
            H[z] = level_function(sys.fields[z]);
        } catch (const UnsupportedField&) {
        }
    }
    Output o(out);
    auto& os = o.stream();
    os << "x,y,zone,H,vx,vy\n";
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            double x = x0 + (x1 - x0) * i / (nx - 1), y = y0 + (y1 - y0) * j / (ny - 1);
            ZoneTag tag = classify(sys.config, {x, y});
            os << csv_number(x) << ',' << csv_number(y) << ',';
            if (!tag.is_zone()) {
                os << (tag.kind == ZoneTag::Kind::Tangency ? "tangency" : "boundary") << ",,,\n";
                continue;
            }
            Zone zone = tag.zone();
            os << to_string(zone) << ',';
            try {
                if (H[static_cast<int>(zone)]) os << csv_number((*H[static_cast<int>(zone)])(x, y));
            } catch (const std::exception&) {
            }
            os << ',';
            try {
                Complex v = sys.rhs(zone, {x, y});
                os << csv_number(v.real()) << ',' << csv_number(v.imag());
            } catch (const PoleEvaluation&) {
                os << ',';
            }
            os << '\n';
        }
    }
    return kOk;
}

int cmd_melnikov(const RunConfig& rc, const std::string& out) {
    ConfigNode m = rc.root()["melnikov"];
    BasisName basis;
    try {
        basis = basis_from_string(m["basis"].string());
    } catch (const ConfigError& e) {
        m["basis"].fail(e.what());
    }
    auto [dlo, dhi] = basis_domain(basis);
    double rmin = m.number_or("r_min", dlo + 0.01);
    double rmax = m.number_or("r_max", std::isinf(dhi) ? dlo + 10.0 : dhi - 0.01);
    int samples = m.integer_or("samples", 200);
    int grid = m.integer_or("grid", 4000);
    if (samples < 2) m["samples"].fail("need at least 2 samples");
    if (!(rmin < rmax)) m.fail("r_min must be below r_max");

    PerturbationCoeffs p = PerturbationCoeffs::zeros(basis_ell(basis));
    Json targets_json = Json::array();
    if (m.has("targets")) {
        auto targets = m["targets"].numbers();
        auto mb = make_basis(basis);
        p = realize_coefficients(basis, choose_coefficients(mb.functions, targets));
        for (double t : targets) targets_json.push_back(json_number(t));
    } else if (rc.perturbation) {
        p = *rc.perturbation;
    }
    auto M = [&](double r) { return melnikov_closed(basis, p, r); };

    Output o(out);
    auto& os = o.stream();
    os << "r,M\n";
    for (int k = 0; k < samples; ++k) {
        double r = rmin + (rmax - rmin) * k / (samples - 1);
        os << csv_number(r) << ',' << csv_number(M(r)) << '\n';
    }
    auto rep = count_simple_zeros(M, rmin, rmax, grid);
    Json zeros = Json::array();
    for (double z : rep.locations) zeros.push_back(json_number(z));
    Json coeffs;
    for (Zone z : {Zone::Plus, Zone::Central, Zone::Minus}) {
        Json a = Json::array(), b = Json::array();
        for (int j = 0; j <= p.ell; ++j) {
            a.push_back(json_number(p.A(z, j)));
            b.push_back(json_number(p.B(z, j)));
        }
        coeffs[zone_key(z)] = {{"a", a}, {"b", b}};
    }
    Json alpha = Json::array();
    for (double v : assemble(basis, p)) alpha.push_back(json_number(v));
    Json report{{"basis", to_string(basis)},
                {"interval", {json_number(rmin), json_number(rmax)}},
                {"simple_zeros", rep.count},
                {"zeros", zeros},
                {"alpha", alpha},
                {"perturbation", coeffs},
                {"targets", targets_json}};
    write_json(o.to_file() ? std::cout : std::cerr, report);
    return kOk;
}

Json candidate_json(const CycleCandidate& c) {
    return {{"s1", json_number(c.s1)}, {"s2", json_number(c.s2)},     {"t1", json_number(c.t1)},
            {"t2", json_number(c.t2)}, {"valid", c.valid},             {"residual", json_number(c.residual)}};
}

int cmd_cycles(const RunConfig& rc, const std::string& out) {
    Json empty;
    ConfigNode c = section(rc, "cycles", empty);
    SearchBox box;
    if (c.has("box")) {
        auto b = c["box"].numbers();
        if (b.size() != 4) c["box"].fail("expected [s_lo, s_hi, t_lo, t_hi]");
        box = {b[0], b[1], b[2], b[3]};
    }
    int seeds = c.integer_or("seeds", 40);
    if (seeds < 20) c["seeds"].fail("must be at least 20");
    auto sys = rc.system();
    Json cands = Json::array();
    int valid = 0;
    Json report;
    if (rc.partition == PartitionKind::ParallelStrip) {
        auto cs = build_crossing_system(rc.fields[0], rc.fields[1], rc.fields[2]);
        auto rep = solve_cycles(cs, box, seeds);
        report["non_isolated"] = rep.non_isolated;
        report["bezout_bound"] = bezout_bound(std::max(cs.central_degree, 1));
        for (const auto& cy : rep.candidates) {
            Json j = candidate_json(cy);
            j["closure"] = cy.valid ? json_number(closure_residual(sys, {cy.s1, -1.0})) : Json(nullptr);
            j["crossings"] = {json_complex({cy.s1, -1}), json_complex({cy.s2, -1}), json_complex({cy.t2, 1}),
                              json_complex({cy.t1, 1})};
            valid += cy.valid;
            cands.push_back(j);
        }
    } else {
        std::array<Complex, 3> centers;
        for (int z = 0; z < 3; ++z) {
            const auto& f = rc.fields[z];
            const auto* lc = f.tag ? std::get_if<catalog::LinearCenter>(&*f.tag) : nullptr;
            if (!lc) throw UnsupportedZoneForm("circle partitions need linear_center zone fields");
            if (lc->lambda.real() != 0.0)
                throw UnsupportedZoneForm(std::string("zones.") + zone_key(static_cast<Zone>(z)) + ".lambda must be purely imaginary");
            centers[z] = lc->center;
        }
        CircleClass kind = rc.partition == PartitionKind::ExternalCircles ? CircleClass::External : CircleClass::Internal;
        auto rep = solve_circle_class(kind, centers, box, seeds);
        report["non_isolated"] = rep.strip.non_isolated;
        for (const auto& cy : rep.cycles) {
            Json j = candidate_json(cy.strip);
            j["closure"] = cy.strip.valid ? json_number(closure_residual(sys, cy.circle[0])) : Json(nullptr);
            Json pts = Json::array();
            for (auto z : cy.circle) pts.push_back(json_complex(z));
            j["crossings"] = pts;
            valid += cy.strip.valid;
            cands.push_back(j);
        }
    }
    report["partition"] = to_string(rc.partition);
    report["candidates"] = cands;
    report["valid_cycles"] = valid;
    Output o(out);
    write_json(o.stream(), report);
    return kOk;
}

// partition whose boundaries contain the images of the source boundaries
PartitionKind image_partition(PartitionKind src, const MoebiusMap& m) {
    PartitionConfig from{src};
    auto sample = [&](int id, double t) -> Complex {
        if (src == PartitionKind::ParallelStrip) return {std::tan(t), id == 1 ? 1.0 : -1.0};
        double r = src == PartitionKind::InternalCircles && id == 1 ? 1.0 / 3.0 : 1.0;
        return from.center(id) + r * std::exp(I * (t + 0.5));
    };
    for (PartitionKind k : {PartitionKind::ParallelStrip, PartitionKind::ExternalCircles, PartitionKind::InternalCircles}) {
        PartitionConfig to{k};
        bool ok = true;
        for (int id : {1, 2})
            for (double t : {-0.9, 0.2, 1.1}) {
                auto w = moebius_apply(m, sample(id, t));
                ok = ok && !w.infinite && std::abs(to.g(id, w.z)) < 1e-9;
            }
        if (ok) return k;
    }
    throw ConfigError("the map does not carry the partition onto one of the three supported partitions");
}

int cmd_transform(const RunConfig& rc, const std::string& out) {
    ConfigNode t = rc.root()["transform"];
    MoebiusMap m = map_from_json(t["map"]);
    PartitionKind target = image_partition(rc.partition, m);
    Json zones;
    for (Zone z : {Zone::Plus, Zone::Central, Zone::Minus})
        zones[zone_key(z)] = field_to_json(pushforward_field(m, rc.fields[static_cast<int>(z)]));
    Json mapped{{"partition", to_string(target)}, {"zones", zones}};
    Output o(out);
    write_json(o.stream(), mapped);
    return kOk;
}

int cmd_verify(const std::string& out) {
    auto results = verify::run_all();
    Json report = verify::to_json(results);
    Output o(out);
    write_json(o.stream(), report);
    return report["pass"].get<bool>() ? kOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Piecewise holomorphic systems: simulation, Melnikov analysis and crossing cycles"};
    app.require_subcommand(1);
    std::string config, out;
    auto add = [&](const char* name, const char* help, bool needs_config) {
        auto* sc = app.add_subcommand(name, help);
        auto* opt = sc->add_option("--config", config, "JSON configuration file");
        if (needs_config) opt->required();
        sc->add_option("--out", out, "output path (default: standard output)");
        return sc;
    };
    auto* sim = add("simulate", "integrate a trajectory and write it as CSV", true);
    auto* por = add("portrait", "sample zones, level functions and the vector field on a grid", true);
    auto* mel = add("melnikov", "tabulate a closed Melnikov series and report its simple zeros", true);
    auto* cyc = add("cycles", "solve the level-matching equations for crossing limit cycles", true);
    auto* tra = add("transform", "push a system through a Moebius map", true);
    auto* ver = add("verify", "run the reproduction suite", false);
    CLI11_PARSE(app, argc, argv);

    try {
        if (ver->parsed()) return cmd_verify(out);
        RunConfig rc = load_config(config);
        if (sim->parsed()) return cmd_simulate(rc, out);
        if (por->parsed()) return cmd_portrait(rc, out);
        if (mel->parsed()) return cmd_melnikov(rc, out);
        if (cyc->parsed()) return cmd_cycles(rc, out);
        if (tra->parsed()) return cmd_transform(rc, out);
    } catch (const FlowHalt& e) {
        std::cerr << "pwhs: " << e.what() << '\n';
        return kHalt;
    } catch (const std::exception& e) {
        std::cerr << "pwhs: " << e.what() << '\n';
        return kConfigError;
    }
    return kOk;
}
