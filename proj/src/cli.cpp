#include "smt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "smt/core.hpp"
#include "smt/domain2ball.hpp"
#include "smt/green.hpp"
#include "smt/maximizer.hpp"
#include "smt/planar.hpp"
#include "smt/radial.hpp"
#include "smt/transplant.hpp"

namespace smt {

namespace {

using nlohmann::json;

// ============================================================
// config <-> JSON
// ============================================================

json config_to_json_obj(const ExperimentConfig& c) {
    json j;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["command"] = c.command;
    j["domain"] = c.domain;
    j["eps"] = c.eps;
    j["format"] = c.format;
    j["grid_h"] = c.grid_h;
    j["indices"] = c.indices;
    j["levels"] = c.levels;
    j["max_iters"] = c.max_iters;
    j["n"] = c.n;
    j["opt_seeds"] = c.opt_seeds;
    j["out"] = c.out;
    j["pole_x"] = c.pole_x;
    j["pole_y"] = c.pole_y;
    j["profile_nodes"] = c.profile_nodes;
    j["radius"] = c.radius;
    j["rays"] = c.rays;
    j["s_nodes"] = c.s_nodes;
    j["seed"] = c.seed;
    j["serial"] = c.serial;
    j["tol"] = c.tol;
    return j;
}

double as_double(const json& v, const std::string& key) {
    if (!v.is_number()) throw usage_error(strf("config field '%s' must be a number", key.c_str()));
    return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer())
        throw usage_error(strf("config field '%s' must be an integer", key.c_str()));
    return v.get<int>();
}

std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string()) throw usage_error(strf("config field '%s' must be a string", key.c_str()));
    return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& key) {
    if (!v.is_boolean()) throw usage_error(strf("config field '%s' must be a bool", key.c_str()));
    return v.get<bool>();
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
    return config_to_json_obj(cfg).dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw usage_error(strf("config is not valid JSON: %s", e.what()));
    }
    if (!j.is_object()) throw usage_error("config must be a JSON object");

    static const std::set<std::string> known = {
        "alpha",  "beta",      "command", "domain",        "eps",    "format", "grid_h",
        "indices", "levels",   "max_iters", "n",           "opt_seeds", "out", "pole_x",
        "pole_y", "profile_nodes", "radius", "rays",       "s_nodes", "seed", "serial", "tol"};
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw usage_error(strf("unknown config field '%s'", item.key().c_str()));

    ExperimentConfig c;
    if (j.contains("command")) c.command = as_string(j["command"], "command");
    if (j.contains("n")) c.n = as_int(j["n"], "n");
    if (j.contains("alpha")) c.alpha = as_double(j["alpha"], "alpha");
    if (j.contains("beta")) c.beta = as_double(j["beta"], "beta");
    if (j.contains("domain")) c.domain = as_string(j["domain"], "domain");
    if (j.contains("radius")) c.radius = as_double(j["radius"], "radius");
    if (j.contains("pole_x")) c.pole_x = as_double(j["pole_x"], "pole_x");
    if (j.contains("pole_y")) c.pole_y = as_double(j["pole_y"], "pole_y");
    if (j.contains("grid_h")) c.grid_h = as_double(j["grid_h"], "grid_h");
    if (j.contains("rays")) c.rays = as_int(j["rays"], "rays");
    if (j.contains("s_nodes")) c.s_nodes = as_int(j["s_nodes"], "s_nodes");
    if (j.contains("profile_nodes")) c.profile_nodes = as_int(j["profile_nodes"], "profile_nodes");
    if (j.contains("max_iters")) c.max_iters = as_int(j["max_iters"], "max_iters");
    if (j.contains("opt_seeds")) c.opt_seeds = as_int(j["opt_seeds"], "opt_seeds");
    if (j.contains("eps")) c.eps = as_double(j["eps"], "eps");
    if (j.contains("serial")) c.serial = as_bool(j["serial"], "serial");
    if (j.contains("out")) c.out = as_string(j["out"], "out");
    if (j.contains("format")) c.format = as_string(j["format"], "format");

    if (j.contains("seed")) {
        const json& v = j["seed"];
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                       v.get<long long>() < 0))
            throw usage_error("config field 'seed' must be a non-negative integer");
        c.seed = v.get<std::uint64_t>();
    }
    if (j.contains("levels")) {
        if (!j["levels"].is_array()) throw usage_error("config field 'levels' must be an array");
        c.levels.clear();
        for (const auto& v : j["levels"]) c.levels.push_back(as_double(v, "levels"));
    }
    if (j.contains("indices")) {
        if (!j["indices"].is_array()) throw usage_error("config field 'indices' must be an array");
        c.indices.clear();
        for (const auto& v : j["indices"]) c.indices.push_back(as_int(v, "indices"));
    }
    if (j.contains("tol")) {
        if (!j["tol"].is_object()) throw usage_error("config field 'tol' must be an object");
        c.tol.clear();
        for (const auto& item : j["tol"].items())
            c.tol[item.key()] = as_double(item.value(), "tol");
    }
    return c;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    // delivery fields identify where and how results land, not what is
    // computed; neutralize them so reruns into another directory hash equal
    ExperimentConfig c = cfg;
    c.out = "smt-out";
    c.format = "csv";
    c.serial = false;
    return fnv1a64(config_to_json(c));
}

// ============================================================
// command pipelines
// ============================================================

namespace {

par::exec mode_of(const ExperimentConfig& c) {
    return c.serial ? par::exec::serial : par::exec::openmp;
}

double pole_offset(const ExperimentConfig& c) { return std::hypot(c.pole_x, c.pole_y); }

void require_ball(const ExperimentConfig& c) {
    if (c.domain != "ball")
        throw usage_error(strf("command '%s' needs domain \"ball\"", c.command.c_str()));
}

std::vector<int> indices_or(const ExperimentConfig& c, std::initializer_list<int> def) {
    return c.indices.empty() ? std::vector<int>(def) : c.indices;
}

std::vector<double> levels_or(const ExperimentConfig& c, std::initializer_list<double> def) {
    return c.levels.empty() ? std::vector<double>(def) : c.levels;
}

using Artifacts = std::vector<std::pair<std::string, std::string>>;

// ------------------------------------------------------------
// radial-max: constrained ascent against the concentration level
// ------------------------------------------------------------

Report pipe_radial_max(const ExperimentConfig& c, Artifacts& files) {
    ExponentConfig cfg = make_config(c.n, c.alpha, c.beta);
    Report rep;

    double conc = max_concentration_level(cfg, 1.0);
    // independent closed forms for the two common dimensions at beta = 0
    if (c.beta == 0.0 && (c.n == 2 || c.n == 3)) {
        double ref = c.n == 2 ? std::exp(1.0) * M_PI
                              : std::exp(1.5) * 4.0 * M_PI / 3.0;
        rep.add(check_close("concentration_reference", strf("n=%d", c.n), conc, ref, 1e-12));
    }
    if (is_critical(cfg)) {
        ConcentrationLimit lim = moser_family_limit(cfg, 1.0, 10);
        rep.add(check_close("moser_limit_closed_form", "eps=1", lim.extrapolated, lim.closed_form,
                            1e-3 * std::max(1.0, std::abs(lim.closed_form))));
        rep.add(check_bound("moser_limit_cap", "eps=1", 1.01 * conc, lim.extrapolated, 1e-9));
    }

    MaximizerOptions opts;
    opts.grid_nodes = c.profile_nodes;
    opts.max_iters = c.max_iters;
    opts.seeds = c.opt_seeds;
    if (c.seed != 0) opts.seed = c.seed;
    opts.mode = mode_of(c);
    MaximizerResult res = maximize_radial(cfg, opts);

    rep.add(check_close("maximizer_unit_energy", "", res.energy, 1.0, 1e-9));
    rep.add(check_close("maximizer_quadrature_match", "", res.value, res.value_fixed,
                        1e-6 * std::max(1.0, std::abs(res.value))));
    GapReport gap = gap_report(cfg, res);
    if (gap.applicable)
        rep.add(check_bound("maximizer_exceeds_concentration", "", gap.best_value,
                            gap.concentration, 0.0));
    else
        rep.add(check_bound("maximizer_value_positive", "", res.value, 0.0, 0.0));

    std::ostringstream oss;
    write_profile_csv(res.best, oss);
    files.emplace_back("radial-max-profile.csv", oss.str());
    return rep;
}

// ------------------------------------------------------------
// moser: concentrating family diagnostics
// ------------------------------------------------------------

Report pipe_moser(const ExperimentConfig& c, Artifacts&) {
    ExponentConfig cfg = make_config(c.n, c.alpha, c.beta);
    Report rep;
    std::vector<int> idx = indices_or(c, {1, 2, 3, 4, 5, 6, 7, 8});
    double m = double(c.n) - c.beta;

    for (int i : idx) {
        RadialProfile u = moser_profile(i, c.eps, c.n);
        std::string par = strf("i=%d;eps=%.6g", i, c.eps);
        rep.add(check_close("moser_unit_energy", par, dirichlet_energy(u, c.n), 1.0, 1e-10));

        double ip = std::pow(double(i), cfg.p());
        double r_b = c.eps * std::exp(-cfg.q() * ip);
        // plateau functional in log space: omega/m * (e^{alpha i^p + m log r_b} - r_b^m)
        double arg = cfg.alpha * ip + m * std::log(r_b);
        double closed = cfg.omega / m * (std::exp(arg) - std::pow(r_b, m));
        FunctionalValue pl = functional_eval_annulus(u, cfg, 0.0, r_b);
        if (!pl.overflow)
            rep.add(check_close("moser_plateau_functional", par, pl.value, closed,
                                1e-10 * std::max(1.0, std::abs(closed))));
    }

    int i_max = std::max(4, *std::max_element(idx.begin(), idx.end()));
    ConcentrationLimit lim = moser_family_limit(cfg, c.eps, i_max);
    if (lim.critical)
        rep.add(check_close("moser_family_limit", strf("eps=%.6g", c.eps), lim.extrapolated,
                            lim.closed_form, 1e-3 * std::max(1.0, std::abs(lim.closed_form))));
    else
        rep.add(check_bound("moser_family_final", strf("eps=%.6g", c.eps), lim.values.back(), 0.0,
                            0.0));
    return rep;
}

// ------------------------------------------------------------
// green-verify: flow, flux and deep-level asymptotics of the ball Green
// ------------------------------------------------------------

Report pipe_green_verify(const ExperimentConfig& c, Artifacts&) {
    require_ball(c);
    if (c.n < 2) throw usage_error("green-verify needs n >= 2");
    if (c.beta < 0.0 || c.beta >= double(c.n)) throw usage_error("green-verify needs 0 <= beta < n");
    double d = pole_offset(c);
    BallGreen g = make_ball_green(c.n, c.radius, d);
    RayFan fan = make_fan(c.n, c.rays);
    par::exec mode = mode_of(c);
    Report rep;

    double tol_id = d == 0.0 ? 1e-10 : 1e-6;
    for (double t : levels_or(c, {0.5, 1.0, 2.0, 4.0})) {
        std::string par = strf("t=%.6g", t);
        rep.add(check_close("green_flow", par, sublevel_flow_integral(g, t, fan, mode), t,
                            tol_id * std::max(1.0, t)));
        rep.add(check_close("green_flux", par,
                            level_surface_integral(g, t, 0.0, double(c.n - 1), fan, mode), 1.0,
                            tol_id));
    }

    double q = g.q();
    double omega = sphere_measure(c.n);
    double I = g.I();
    double m = double(c.n) - c.beta;
    double t_deep = 20.0 / q;
    double vol = superlevel_volume(g, t_deep, fan, mode);
    rep.add(check_close("green_volume_asymptote", "s=20",
                        double(c.n) * vol * std::exp(double(c.n) * q * t_deep) / omega,
                        std::pow(I, double(c.n)), 0.01 * std::pow(I, double(c.n))));
    double wv = superlevel_weighted_volume(g, c.beta, t_deep, fan, mode);
    rep.add(check_close("green_weighted_volume_asymptote", "s=20",
                        m * wv * std::exp(m * q * t_deep) / omega, std::pow(I, m),
                        0.01 * std::pow(I, m)));

    double t_enc = levels_or(c, {0.5, 1.0, 2.0, 4.0}).back();
    LevelEnclosure enc = level_enclosure(g, t_enc, fan);
    rep.add(check_bound("green_enclosure", strf("t=%.6g", t_enc), enc.tau, enc.sigma, 0.0));
    return rep;
}

// ------------------------------------------------------------
// iso-check: weighted isoperimetric chain along Green levels
// ------------------------------------------------------------

Report pipe_iso_check(const ExperimentConfig& c, Artifacts&) {
    require_ball(c);
    if (c.n < 2) throw usage_error("iso-check needs n >= 2");
    if (c.beta < 0.0 || c.beta >= double(c.n)) throw usage_error("iso-check needs 0 <= beta < n");
    double d = pole_offset(c);
    BallGreen g = make_ball_green(c.n, c.radius, d);
    RayFan fan = make_fan(c.n, c.rays);
    par::exec mode = mode_of(c);
    GreenLevelData data = make_level_data(g, c.beta, c.rays, c.s_nodes);
    Report rep;

    rep.add(check_bound("iso_weighted_volume", "s=0", data.v_at(0.0), 1.0, 1e-10));
    rep.add(check_bound("iso_surface_weight", "s=0", data.w_at(0.0), 1.0, 1e-10));
    for (double r : levels_or(c, {0.1, 0.5, 1.0})) {
        if (r <= 0.0) throw usage_error("iso-check levels are radii in (0, 1]");
        rep.add(check_bound("iso_level_weight", strf("r=%.6g", r), data.w_at(-std::log(r)), 1.0,
                            1e-10));
    }

    double e_w = c.beta * double(c.n - 1) / double(c.n);
    double P_w = level_surface_integral(g, 0.0, e_w, 0.0, fan, mode);
    double A_w = superlevel_weighted_volume(g, c.beta, 0.0, fan, mode);
    rep.add(check_bound("iso_alvino_area", "t=0", alvino_area_bound(P_w, c.n, c.beta), A_w,
                        1e-10 * std::max(1.0, A_w)));
    return rep;
}

// ------------------------------------------------------------
// transplant: ball profiles moved onto Green level sets
// ------------------------------------------------------------

Report pipe_transplant(const ExperimentConfig& c, Artifacts&) {
    ExponentConfig cfg = make_config(c.n, c.alpha, c.beta);
    if (c.domain != "ball" && c.domain != "disk")
        throw usage_error("transplant needs domain \"ball\" or \"disk\"");
    if (c.domain == "disk" && c.n != 2) throw usage_error("the disk grid route needs n = 2");
    double d = pole_offset(c);
    BallGreen g = make_ball_green(c.n, c.radius, d);
    par::exec mode = mode_of(c);
    GreenLevelData data = make_level_data(g, c.beta, c.rays, c.s_nodes);
    Report rep;

    std::vector<int> idx = indices_or(c, {1, 2, 3});
    std::vector<double> outside_energy;
    const double delta = 0.25;
    bool outside_ok = d + delta < c.radius;
    for (int i : idx) {
        RadialProfile v = moser_profile(i, c.eps, c.n);
        std::string par = strf("i=%d;eps=%.6g", i, c.eps);
        TransplantResult tr = transplant_ball(v, cfg, g, data, c.rays, mode);
        double escale = std::max(1.0, tr.energy_ball);
        rep.add(check_close("transplant_energy_coarea", par, tr.energy_coarea, tr.energy_ball,
                            1e-10 * escale));
        rep.add(check_close("transplant_energy_direct", par, tr.energy_direct, tr.energy_ball,
                            1e-6 * escale));
        double gain = tr.I_pow * tr.F_ball;
        rep.add(check_bound("transplant_functional_gain", par, tr.F_domain, gain,
                            1e-9 * std::max(1.0, std::abs(gain))));
        if (outside_ok) {
            OutsideMass om = transplant_outside_mass(v, g, data, delta, c.rays);
            outside_energy.push_back(om.energy_outside);
        }
    }
    for (std::size_t k = 1; k < outside_energy.size(); ++k)
        rep.add(check_bound("transplant_outside_decay",
                            strf("i=%d;to=%d", idx[k - 1], idx[k]), outside_energy[k - 1],
                            outside_energy[k], 1e-12));
    if (!outside_energy.empty())
        rep.add(check_bound("transplant_outside_final", strf("i=%d;delta=%.3g", idx.back(), delta),
                            0.05, outside_energy.back(), 0.0));

    if (c.domain == "disk") {
        PlanarDomain dom = make_disk_domain(c.radius, c.grid_h, c.pole_x, c.pole_y);
        PlanarGreen pg = solve_planar_green(dom, mode);
        RadialProfile v = log_ramp_profile(std::sqrt(std::log(10.0) / (2.0 * M_PI)), 0.1, 1.0);
        PlanarTransplantResult pt = transplant_planar(v, cfg, pg, mode);
        rep.add(check_close("transplant_grid_incenter", strf("h=%.6g", c.grid_h), pt.I, g.I(),
                            0.02 * g.I()));
        rep.add(check_close("transplant_grid_energy", strf("h=%.6g", c.grid_h), pt.energy_grid,
                            pt.energy_ball, 0.02 * std::max(1.0, pt.energy_ball)));
        double gain = std::pow(pt.I, double(c.n) - c.beta) * pt.F_ball;
        rep.add(check_bound("transplant_grid_functional_gain", strf("h=%.6g", c.grid_h), pt.F_grid,
                            gain, 0.02 * std::max(1.0, std::abs(gain))));
    }
    return rep;
}

// ------------------------------------------------------------
// domain2ball: back-transplant of a concentrating family
// ------------------------------------------------------------

Report pipe_domain2ball(const ExperimentConfig& c, Artifacts&) {
    require_ball(c);
    ExponentConfig cfg = make_config(c.n, c.alpha, c.beta);
    double d = pole_offset(c);
    BallGreen g = make_ball_green(c.n, c.radius, d);
    GreenLevelData data = make_level_data(g, c.beta, c.rays, c.s_nodes);

    std::vector<int> idx = indices_or(c, {2, 3, 4, 5});
    std::vector<double> s_levels = levels_or(c, {1.0});
    if (s_levels.size() == 1) s_levels.assign(idx.size(), s_levels.front());
    if (s_levels.size() != idx.size())
        throw usage_error("domain2ball needs one level or one level per index");

    std::vector<RadialProfile> gens;
    gens.reserve(idx.size());
    for (int i : idx) gens.push_back(moser_profile(i, c.eps, c.n));

    Domain2BallOptions opts;
    opts.rays = c.rays;
    opts.mode = mode_of(c);
    Domain2BallSequence seq = build_radial(gens, s_levels, cfg, g, data, opts);
    EnergyTransferReport etc = energy_transfer_check(seq);

    Report rep;
    for (auto& row : etc.rows) rep.add(row);
    return rep;
}

// ------------------------------------------------------------
// battery and dispatch
// ------------------------------------------------------------

Report dispatch(const ExperimentConfig& c, Artifacts& files);

RunRecord make_record(const ExperimentConfig& c, std::uint64_t digest) {
    RunRecord rec;
    rec.command = c.command;
    rec.hash = config_hash(c);
    rec.digest = digest;
    Report rep = dispatch(c, rec.artifacts);
    for (auto& row : rep.rows) {
        auto it = c.tol.find(row.check);
        if (it != c.tol.end()) reapply_tolerance(row, it->second);
    }
    rec.pass = rep.all_pass();
    rep.set_meta("command", c.command);
    rep.set_meta("config_hash", strf("%016llx", static_cast<unsigned long long>(rec.hash)));
    rep.set_meta("config_digest", strf("%016llx", static_cast<unsigned long long>(rec.digest)));
    rep.set_meta("verdict", rec.pass ? "pass" : "fail");
    rec.report = std::move(rep);
    return rec;
}

// the report battery: every command on a small default workload
std::vector<RunRecord> run_battery(const ExperimentConfig& c) {
    struct Item {
        const char* command;
        int n;
        double alpha;
        double beta;
        double pole;
        double eps;
        std::vector<int> indices;
        std::vector<double> levels;
    };
    const double pi = M_PI;
    std::vector<Item> items = {
        {"moser", 2, 2 * pi, 1.0, 0.0, 0.5, {1, 2, 3, 4, 5, 6}, {}},
        {"green-verify", 2, 2 * pi, 1.0, 0.3, 0.5, {}, {0.5, 1.0, 2.0}},
        {"iso-check", 2, 2 * pi, 1.0, 0.3, 0.5, {}, {}},
        {"transplant", 2, 2 * pi, 1.0, 0.3, 0.5, {1, 2, 3}, {}},
        {"domain2ball", 2, 4 * pi, 0.0, 0.3, 1.0, {2, 3, 4}, {1.0}},
        {"radial-max", 2, 4 * pi, 0.0, 0.0, 1.0, {}, {}},
    };
    std::vector<RunRecord> records;
    records.reserve(items.size());
    for (const Item& it : items) {
        ExperimentConfig sub;
        sub.command = it.command;
        sub.n = it.n;
        sub.alpha = it.alpha;
        sub.beta = it.beta;
        sub.pole_x = it.pole;
        sub.eps = it.eps;
        sub.indices = it.indices;
        sub.levels = it.levels;
        sub.seed = c.seed;
        sub.serial = c.serial;
        sub.tol = c.tol;
        records.push_back(make_record(sub, config_hash(sub)));
    }
    return records;
}

Report dispatch(const ExperimentConfig& c, Artifacts& files) {
    if (c.command == "radial-max") return pipe_radial_max(c, files);
    if (c.command == "moser") return pipe_moser(c, files);
    if (c.command == "green-verify") return pipe_green_verify(c, files);
    if (c.command == "iso-check") return pipe_iso_check(c, files);
    if (c.command == "transplant") return pipe_transplant(c, files);
    if (c.command == "domain2ball") return pipe_domain2ball(c, files);
    if (c.command == "report") {
        Report rep;
        for (const RunRecord& rec : run_battery(c)) {
            rep.append(rec.report, rec.command + std::string("/"));
            for (const auto& f : rec.artifacts) files.push_back(f);
        }
        return rep;
    }
    throw usage_error(strf("unknown command '%s'", c.command.c_str()));
}

std::string record_json(const RunRecord& rec) {
    std::ostringstream oss;
    write_report_json(rec.report, oss);
    std::string s = oss.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
    return s;
}

}  // namespace

RunRecord run_command(const ExperimentConfig& cfg) {
    return make_record(cfg, config_hash(cfg));
}

// ============================================================
// emission
// ============================================================

void emit_report(const std::vector<RunRecord>& records, const std::string& format,
                 const std::string& dir, const std::string& base) {
    namespace fs = std::filesystem;
    fs::path root = dir.empty() ? fs::path(".") : fs::path(dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw io_error(strf("cannot create output directory '%s'", dir.c_str()));

    auto combined = [&]() {
        if (records.size() == 1) return records.front().report;
        Report all;
        for (const RunRecord& rec : records) all.append(rec.report, rec.command + std::string("/"));
        return all;
    };

    if (format == "csv") {
        std::ostringstream oss;
        write_report_csv(combined(), oss);
        write_text_file((root / (base + ".csv")).string(), oss.str());
    } else if (format == "json") {
        std::string out;
        if (records.size() == 1) {
            out = record_json(records.front()) + "\n";
        } else {
            std::vector<const RunRecord*> order;
            for (const RunRecord& rec : records) order.push_back(&rec);
            std::stable_sort(order.begin(), order.end(), [](const RunRecord* a, const RunRecord* b) {
                return a->hash != b->hash ? a->hash < b->hash : a->command < b->command;
            });
            out = "[\n";
            for (std::size_t k = 0; k < order.size(); ++k)
                out += record_json(*order[k]) + (k + 1 < order.size() ? ",\n" : "\n");
            out += "]\n";
        }
        write_text_file((root / (base + ".json")).string(), out);
    } else if (format == "plot") {
        write_report_plot(combined(), (root / base).string());
    } else {
        throw usage_error(strf("unknown format '%s' (csv, json or plot)", format.c_str()));
    }

    for (const RunRecord& rec : records)
        for (const auto& f : rec.artifacts)
            write_text_file((root / f.first).string(), f.second);
}

// ============================================================
// front end
// ============================================================

namespace {

void apply_tol_flags(ExperimentConfig& c, const std::vector<std::string>& tol_flags) {
    for (const std::string& s : tol_flags) {
        std::size_t eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw usage_error(strf("--tol expects name=value, got '%s'", s.c_str()));
        std::string name = s.substr(0, eq);
        const std::string val = s.substr(eq + 1);
        char* end = nullptr;
        double v = std::strtod(val.c_str(), &end);
        if (val.empty() || end != val.c_str() + val.size() || !std::isfinite(v))
            throw usage_error(strf("--tol %s: '%s' is not a finite number", name.c_str(),
                                   val.c_str()));
        c.tol[name] = v;
    }
}

void print_outcome(const std::vector<RunRecord>& records) {
    for (const RunRecord& rec : records) {
        std::size_t failed = 0;
        for (const CheckRow& row : rec.report.rows)
            if (!row.pass) ++failed;
        std::printf("%s: %zu checks, %zu failed\n", rec.command.c_str(), rec.report.rows.size(),
                    failed);
        for (const CheckRow& row : rec.report.rows)
            if (!row.pass)
                std::printf("  FAIL %s [%s] lhs=%.12g rhs=%.12g residual=%.12g tol=%.12g\n",
                            row.check.c_str(), row.param.c_str(), row.lhs, row.rhs, row.residual,
                            row.tol);
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"verification toolkit for weighted exponential functionals on balls", "smt"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format;
    std::vector<std::string> tol_flags;
    std::uint64_t seed = 0;
    bool serial = false;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"radial-max", "maximize the weighted functional over unit-energy radial profiles"},
        {"moser", "energies and functionals of the concentrating log-ramp family"},
        {"green-verify", "flow, flux and deep-level asymptotics of the ball Green function"},
        {"iso-check", "weighted isoperimetric chain along Green level sets"},
        {"transplant", "move ball profiles onto Green level sets and compare"},
        {"domain2ball", "back-transplant a concentrating family into radial competitors"},
        {"report", "run every command on a small default workload"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "experiment config (JSON)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "seed for randomized pieces (0 = deterministic default)");
        sub->add_option("--tol", tol_flags, "tolerance override name=value (repeatable)");
        sub->add_option("--format", format, "csv | json | plot");
        sub->add_flag("--serial", serial, "force the serial execution path");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e);
        return 2;
    }

    try {
        CLI::App* sub = nullptr;
        std::string name;
        for (const auto& [cmd, help] : commands)
            if (app.got_subcommand(cmd)) {
                sub = app.get_subcommand(cmd);
                name = cmd;
            }
        if (sub == nullptr) throw usage_error("no command given");

        ExperimentConfig c;
        std::string digest_src;
        if (sub->count("--config") > 0) {
            digest_src = read_text_file(config_path);
            c = config_from_json(digest_src);
        }
        if (!c.command.empty() && c.command != name)
            throw usage_error(strf("config is for command '%s', not '%s'", c.command.c_str(),
                                   name.c_str()));
        c.command = name;
        if (sub->count("--out") > 0) c.out = out_dir;
        if (sub->count("--seed") > 0) c.seed = seed;
        if (sub->count("--serial") > 0) c.serial = serial;
        if (sub->count("--format") > 0) c.format = format;
        if (c.format != "csv" && c.format != "json" && c.format != "plot")
            throw usage_error(strf("unknown format '%s' (csv, json or plot)", c.format.c_str()));
        apply_tol_flags(c, tol_flags);
        if (digest_src.empty()) digest_src = config_to_json(c);
        std::uint64_t digest = fnv1a64(digest_src);

        std::vector<RunRecord> records;
        if (name == "report") {
            ExperimentConfig probe = c;
            records = run_battery(probe);
        } else {
            records.push_back(make_record(c, digest));
        }
        emit_report(records, c.format, c.out, name);
        print_outcome(records);
        bool all = true;
        for (const RunRecord& rec : records) all = all && rec.pass;
        return all ? 0 : 1;
    } catch (const usage_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const error& e) {
        std::fprintf(stderr, "check failure: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace smt
