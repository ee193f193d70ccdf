// Batch driver: every module exposed as a subcommand with reproducible
// config files and file outputs.
//
//   rarewave solve1d        exact 1D Riemann solution (JSON + optional profile)
//   rarewave simulate2d     2D perturbed Riemann run (slices, fronts, reports)
//   rarewave build-data     singular rarefaction data on Sigma_delta
//   rarewave trace-fronts   null-geodesic front tracing from the singularity
//   rarewave verify-entropy relative-entropy report for completed runs
//
// Exit codes: 0 success, 1 runtime/model error, 2 usage/config error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <thread>

#include <json.hpp>

#include "rarewave/config.hpp"
#include "rarewave/io.hpp"

namespace fs = std::filesystem;
using namespace rarewave;
using nlohmann::json;

namespace {

struct CliArgs {
    std::string command;
    std::string config_path;
    std::string out_dir = ".";
    int threads = int(std::thread::hardware_concurrency());
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::map<std::string, std::string> extras;
};

int usage(const std::string& msg = "") {
    if (!msg.empty()) std::cerr << "error: " << msg << "\n";
    std::cerr << "usage: rarewave <solve1d|simulate2d|build-data|trace-fronts|verify-entropy>\n"
                 "                [--config PATH] [--out DIR] [--threads N] [--seed N]\n"
                 "                [--section.key value ...]\n";
    return 2;
}

CliArgs parse_args(int argc, char** argv) {
    CliArgs a;
    if (argc < 2) throw ConfigError("missing subcommand");
    a.command = argv[1];
    if (const char* env = std::getenv("OUTPUT_DIR")) a.out_dir = env;
    for (int i = 2; i < argc; ++i) {
        std::string flag = argv[i];
        if (flag.rfind("--", 0) != 0) throw ConfigError("unexpected argument: " + flag);
        if (i + 1 >= argc) throw ConfigError("flag " + flag + " needs a value");
        std::string value = argv[++i];
        if (flag == "--config")
            a.config_path = value;
        else if (flag == "--out")
            a.out_dir = value;
        else if (flag == "--threads")
            a.threads = std::stoi(value);
        else if (flag == "--seed") {
            a.seed = std::stoull(value);
            a.seed_given = true;
        } else
            a.extras[flag.substr(2)] = value;
    }
    if (a.threads < 1) a.threads = 1;
    return a;
}

Config load_config(const CliArgs& a) {
    Config cfg = a.config_path.empty() ? Config() : Config::parse_file(a.config_path);
    for (const auto& [k, v] : a.extras) cfg.set(k, v);
    return cfg;
}

GasLaw gas_from(const Config& cfg) {
    return GasLaw(cfg.get_double("gas.gamma", 2.0), cfg.get_double("gas.k0", 0.5));
}

PrimitiveState state_from(const Config& cfg, const std::string& key) {
    auto v = cfg.get_doubles(key);
    if (v.size() == 2) return {v[0], v[1], 0.0};
    if (v.size() != 3) throw ConfigError("config: '" + key + "' must be 'rho v1 [v2]'");
    return {v[0], v[1], v[2]};
}

const char* wave_name(WaveKind k) {
    switch (k) {
        case WaveKind::BackShock: return "back_shock";
        case WaveKind::FrontShock: return "front_shock";
        case WaveKind::BackRarefaction: return "back_rarefaction";
        case WaveKind::FrontRarefaction: return "front_rarefaction";
        default: return "none";
    }
}

const char* region_name(Region r) {
    switch (r) {
        case Region::I: return "I";
        case Region::II: return "II";
        case Region::III: return "III";
        case Region::IV: return "IV";
        case Region::Vacuum: return "vacuum";
        default: return "degenerate";
    }
}

std::vector<PerturbationMode> modes_from(const Config& cfg, const std::string& key) {
    auto v = cfg.get_doubles(key);
    if (v.size() % 3 != 0)
        throw ConfigError("config: '" + key + "' must hold (k amplitude phase) triples");
    std::vector<PerturbationMode> out;
    for (std::size_t i = 0; i + 3 <= v.size(); i += 3) out.push_back({int(v[i]), v[i + 1], v[i + 2]});
    return out;
}

// ---------------------------------------------------------------------------

int cmd_solve1d(const CliArgs& args) {
    Config cfg = load_config(args);
    if (!cfg.has("states.left") || !cfg.has("states.right"))
        throw ConfigError("solve1d requires states.left and states.right");
    GasLaw law = gas_from(cfg);
    PrimitiveState ul = state_from(cfg, "states.left");
    PrimitiveState ur = state_from(cfg, "states.right");

    WaveFan fan = solve(law, ul, ur);
    json j;
    j["region"] = region_name(fan.region);
    j["middle"] = {{"rho", fan.middle.rho}, {"v1", fan.middle.v1}};
    j["wave1"] = {{"kind", wave_name(fan.wave1.kind)}, {"head", fan.wave1.head},
                  {"tail", fan.wave1.tail}};
    j["wave2"] = {{"kind", wave_name(fan.wave2.kind)}, {"head", fan.wave2.head},
                  {"tail", fan.wave2.tail}};
    std::cout << j.dump(2) << "\n";

    if (cfg.has("profile.t")) {
        double t = cfg.require_double("profile.t");
        long n = cfg.get_int("profile.samples", 400);
        double xmax = cfg.get_double("profile.xmax", 1.5 * std::fabs(fan.wave2.tail) * t + 0.1);
        fs::create_directories(args.out_dir);
        std::ofstream out(fs::path(args.out_dir) / "profile.csv");
        out << "x1,rho,v1,v2\n";
        for (long i = 0; i < n; ++i) {
            double x = -xmax + 2.0 * xmax * double(i) / double(n - 1);
            PrimitiveState s = sample(fan, x / t);
            out << fmt_double(x) << ',' << fmt_double(s.rho) << ',' << fmt_double(s.v1) << ','
                << fmt_double(s.v2) << '\n';
        }
    }
    return 0;
}

RunConfig run_config_from(const Config& cfg, const CliArgs& args) {
    RunConfig rc;
    rc.law = gas_from(cfg);
    rc.left = state_from(cfg, "states.left");
    rc.right = state_from(cfg, "states.right");
    rc.eps = cfg.get_double("run.eps", 0.0);
    rc.cfl = cfg.get_double("run.cfl", 0.45);
    rc.t_end = cfg.get_double("run.t_end", 0.5);
    rc.out_every = cfg.get_double("run.out_every", 0.1);
    rc.nx1 = int(cfg.get_int("grid.nx1", 200));
    rc.nx2 = int(cfg.get_int("grid.nx2", 8));
    rc.muscl = cfg.get_bool("run.muscl", false);
    rc.allow_any_region = cfg.get_bool("run.allow_any_region", false);
    rc.half_width = cfg.get_double("run.half_width", 0.0);
    rc.seed = args.seed_given ? args.seed : std::uint64_t(cfg.get_int("run.seed", 0));
    rc.threads = args.threads;
    rc.pert_left.phi_modes = modes_from(cfg, "perturbation.phi_modes_left");
    rc.pert_left.c_modes = modes_from(cfg, "perturbation.c_modes_left");
    rc.pert_right.phi_modes = modes_from(cfg, "perturbation.phi_modes_right");
    rc.pert_right.c_modes = modes_from(cfg, "perturbation.c_modes_right");
    rc.pert_left.x_center = cfg.get_double("perturbation.x_center_left", 0.0);
    rc.pert_left.x_width = cfg.get_double("perturbation.x_width_left", 0.0);
    rc.pert_right.x_center = cfg.get_double("perturbation.x_center_right", 0.0);
    rc.pert_right.x_width = cfg.get_double("perturbation.x_width_right", 0.0);
    return rc;
}

Config echo_run_config(const RunConfig& rc) {
    Config e;
    e.set("gas.gamma", rc.law.gamma);
    e.set("gas.k0", rc.law.k0);
    auto triple = [](const PrimitiveState& s) {
        return fmt_double(s.rho) + " " + fmt_double(s.v1) + " " + fmt_double(s.v2);
    };
    e.set("states.left", triple(rc.left));
    e.set("states.right", triple(rc.right));
    e.set("run.eps", rc.eps);
    e.set("run.cfl", rc.cfl);
    e.set("run.t_end", rc.t_end);
    e.set("run.out_every", rc.out_every);
    e.set("run.muscl", std::string(rc.muscl ? "true" : "false"));
    e.set("run.allow_any_region", std::string(rc.allow_any_region ? "true" : "false"));
    e.set("run.half_width", rc.half_width);
    e.set("run.seed", long(rc.seed));
    e.set("grid.nx1", long(rc.nx1));
    e.set("grid.nx2", long(rc.nx2));
    auto modes = [&](const std::string& key, const std::vector<PerturbationMode>& ms) {
        std::string s;
        for (const auto& mo : ms)
            s += (s.empty() ? "" : " ") + std::to_string(mo.k) + " " + fmt_double(mo.amplitude) +
                 " " + fmt_double(mo.phase);
        if (!s.empty()) e.set(key, s);
    };
    modes("perturbation.phi_modes_left", rc.pert_left.phi_modes);
    modes("perturbation.c_modes_left", rc.pert_left.c_modes);
    modes("perturbation.phi_modes_right", rc.pert_right.phi_modes);
    modes("perturbation.c_modes_right", rc.pert_right.c_modes);
    e.set("perturbation.x_center_left", rc.pert_left.x_center);
    e.set("perturbation.x_width_left", rc.pert_left.x_width);
    e.set("perturbation.x_center_right", rc.pert_right.x_center);
    e.set("perturbation.x_width_right", rc.pert_right.x_width);
    return e;
}

int cmd_simulate2d(const CliArgs& args) {
    Config cfg = load_config(args);
    RunConfig rc = with_default_perturbations(run_config_from(cfg, args));
    fs::create_directories(args.out_dir);

    auto t0 = std::chrono::steady_clock::now();
    RunArtifacts art = run(rc);
    auto t1 = std::chrono::steady_clock::now();

    for (const Field2D& f : art.slices)
        write_field_csv((fs::path(args.out_dir) / slice_filename(f.time())).string(), f);

    auto fronts = extract_fronts(rc.law, rc, art.slices);
    write_fronts_csv((fs::path(args.out_dir) / "fronts.csv").string(), fronts);

    RelEntropyReport rep = weak_strong_compare(art, art, rc.law);
    {
        std::ofstream out(fs::path(args.out_dir) / "entropy.json");
        out << entropy_report_json(rep).dump(2) << "\n";
    }

    Config echo = echo_run_config(rc);
    write_text((fs::path(args.out_dir) / "config_echo.cfg").string(), echo.echo());

    json summary;
    summary["config"] = echo.echo();
    summary["aborted"] = art.aborted;
    summary["abort_reason"] = art.abort_reason;
    summary["steps"] = art.steps;
    summary["conservation_drift"] = art.conservation_drift;
    summary["grid"] = {{"nx1", art.grid.nx1}, {"nx2", art.grid.nx2},
                       {"half_width", art.grid.half_width}};
    json slices = json::array();
    for (std::size_t s = 0; s < art.slices.size(); ++s) {
        const SliceDiagnostics& d = art.diagnostics[s];
        slices.push_back({{"t", d.time},
                          {"file", slice_filename(d.time)},
                          {"vorticity_max", d.vorticity_max},
                          {"wbar_min", d.wbar_min},
                          {"wbar_max", d.wbar_max},
                          {"w_min", d.w_min},
                          {"w_max", d.w_max},
                          {"max_plane_asymmetry", d.plane_asymmetry}});
    }
    summary["slices"] = slices;
    json fr = json::array();
    for (const auto& fl : fronts)
        fr.push_back({{"t", fl.time}, {"separated", fl.separated},
                      {"cbar0", fl.mean[0]}, {"hbar", fl.mean[1]}, {"h", fl.mean[2]},
                      {"c0", fl.mean[3]}});
    summary["fronts"] = fr;
    {
        std::ofstream out(fs::path(args.out_dir) / "summary.json");
        out << summary.dump(2) << "\n";
    }

    std::vector<double> times;
    for (const Field2D& f : art.slices) times.push_back(f.time());
    write_text((fs::path(args.out_dir) / "plot.gp").string(), gnuplot_script(times));

    // timings go to stderr only so the file outputs stay byte-identical
    std::chrono::duration<double> wall = t1 - t0;
    std::cerr << "simulate2d: " << art.steps << " steps in " << wall.count() << " s\n";
    if (art.aborted) {
        std::cerr << "run aborted: " << art.abort_reason << "\n";
        return 1;
    }
    return 0;
}

int cmd_build_data(const CliArgs& args) {
    Config cfg = load_config(args);
    GasLaw law = gas_from(cfg);
    PrimitiveState right = state_from(cfg, "states.right");
    double c_r = sound_speed(law, right.rho);
    double delta = cfg.get_double("data.delta", 0.1);
    double c0 = cfg.get_double("data.c0", 0.5);
    double u_star = cfg.get_double("data.u_star", default_u_star(law, c_r, c0));
    int order = int(cfg.get_int("data.order", 4));
    std::size_t m = std::size_t(cfg.get_int("data.m", 32));
    int n_tab = int(cfg.get_int("data.n_tab", 96));
    double eps = cfg.get_double("data.eps", 0.0);
    std::string kind = cfg.get_string("data.trace", eps == 0.0 ? "constant" : "analytic");

    std::unique_ptr<BoundaryTrace> trace;
    if (kind == "constant")
        trace = std::make_unique<ConstantTrace>(law, right, m);
    else if (kind == "analytic")
        trace = std::make_unique<AnalyticTrace>(law, right, eps, m);
    else
        throw ConfigError("data.trace must be 'constant' or 'analytic'");

    SliceChart ch = build_chart(law, *trace, delta, u_star, order, n_tab);
    RightJets jets = kind == "constant" ? constant_right_jets(law, right, order, m)
                                        : right_jets_from_trace(law, *trace, delta, order);
    TaylorData td = taylor_coefficients(law, ch, jets, order);
    MatchingReport match = verify_matching(law, ch, td, jets);
    AnsatzReport ansatz = verify_ansatz(law, ch, td, eps);

    fs::create_directories(args.out_dir);
    write_slice_dump((fs::path(args.out_dir) / "slice.csv").string(), ch, td);
    {
        json j = ansatz_json(ansatz);
        j["matching"] = {{"max_imposed", match.max_imposed}, {"max_lambda0", match.max_lambda0}};
        std::ofstream out(fs::path(args.out_dir) / "ansatz.json");
        out << j.dump(2) << "\n";
    }
    Config echo;
    echo.set("gas.gamma", law.gamma);
    echo.set("gas.k0", law.k0);
    echo.set("states.right",
             fmt_double(right.rho) + " " + fmt_double(right.v1) + " " + fmt_double(right.v2));
    echo.set("data.delta", delta);
    echo.set("data.u_star", u_star);
    echo.set("data.order", long(order));
    echo.set("data.m", long(m));
    echo.set("data.n_tab", long(n_tab));
    echo.set("data.eps", eps);
    echo.set("data.trace", kind);
    write_text((fs::path(args.out_dir) / "config_echo.cfg").string(), echo.echo());
    return 0;
}

int cmd_trace_fronts(const CliArgs& args) {
    Config cfg = load_config(args);
    GasLaw law = gas_from(cfg);
    PrimitiveState right = state_from(cfg, "states.right");
    InvariantState ir = to_invariants(law, right);
    int n_rays = int(cfg.get_int("front.n_rays", 32));
    double t_end = cfg.get_double("front.t_end", 0.5);
    double tol = cfg.get_double("front.tol", 1e-9);
    std::size_t m = std::size_t(cfg.get_int("front.m", 32));

    std::unique_ptr<AcousticalChart> chart;
    std::string kind = cfg.get_string("front.chart", "fan");
    if (kind == "fan")
        chart = std::make_unique<FanChart>(law, ir.wbar, ir.w);
    else if (kind == "constant")
        chart = std::make_unique<ConstantChart>(law, right);
    else
        throw ConfigError("front.chart must be 'fan' or 'constant'");

    FrontGraph graph;
    if (cfg.has("states.left")) {
        PrimitiveState left = state_from(cfg, "states.left");
        InvariantState il = to_invariants(law, left);
        SingularTrace rt{PeriodicField(m, ir.wbar), PeriodicField(m, ir.w),
                         PeriodicField(m, -right.v2)};
        SingularTrace lt{PeriodicField(m, il.wbar), PeriodicField(m, il.w),
                         PeriodicField(m, -left.v2)};
        graph = h0_graph(law.gamma, rt, lt, default_u_star(law, sound_speed(law, right.rho)));
    } else {
        double u0 = cfg.get_double("front.u0", 0.0);
        graph = FrontGraph{PeriodicField(m, u0), PeriodicField(m, 0.0)};
    }

    FrontSurface surf = trace_front(*chart, graph, n_rays, t_end, tol);
    fs::create_directories(args.out_dir);
    write_trajectories_csv((fs::path(args.out_dir) / "rays.csv").string(), surf);

    int bad = 0;
    for (const auto& r : surf.rays)
        if (!r.ok) ++bad;
    if (bad) {
        std::cerr << "trace-fronts: " << bad << " rays ended early (caustic/degeneracy)\n";
        return 1;
    }
    return 0;
}

RunArtifacts read_run_dir(const std::string& dir, const GasLaw& law) {
    std::ifstream in(fs::path(dir) / "summary.json");
    if (!in) throw ConfigError("verify-entropy: no summary.json in " + dir);
    json summary = json::parse(in);
    RunArtifacts art;
    art.config.law = law;
    Config echo = Config::parse(summary["config"].get<std::string>());
    art.config.left = state_from(echo, "states.left");
    art.config.right = state_from(echo, "states.right");
    art.config.cfl = echo.get_double("run.cfl", 0.45);
    art.config.muscl = echo.get_bool("run.muscl", false);
    art.grid = Grid{int(summary["grid"]["nx1"].get<long>()),
                    int(summary["grid"]["nx2"].get<long>()),
                    summary["grid"]["half_width"].get<double>()};
    for (const auto& s : summary["slices"]) {
        double t = s["t"].get<double>();
        art.slices.push_back(
            read_field_csv((fs::path(dir) / s["file"].get<std::string>()).string(), art.grid, t));
    }
    return art;
}

int cmd_verify_entropy(const CliArgs& args) {
    Config cfg = load_config(args);
    GasLaw law = gas_from(cfg);
    std::string dir_a = cfg.require_string("compare.run_a");
    std::string dir_b = cfg.get_string("compare.run_b", dir_a);
    RunArtifacts a = read_run_dir(dir_a, law);
    RunArtifacts b = read_run_dir(dir_b, law);
    RelEntropyReport rep = weak_strong_compare(a, b, law);
    fs::create_directories(args.out_dir);
    std::ofstream out(fs::path(args.out_dir) / "entropy.json");
    out << entropy_report_json(rep).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CliArgs args;
    try {
        args = parse_args(argc, argv);
    } catch (const std::exception& e) {
        return usage(e.what());
    }
    try {
        if (args.command == "solve1d") return cmd_solve1d(args);
        if (args.command == "simulate2d") return cmd_simulate2d(args);
        if (args.command == "build-data") return cmd_build_data(args);
        if (args.command == "trace-fronts") return cmd_trace_fronts(args);
        if (args.command == "verify-entropy") return cmd_verify_entropy(args);
        return usage("unknown subcommand '" + args.command + "'");
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
