// wstark: Wannier-Stark resonances, exceptional points, braids, and
// mean-field crossings of a tilted bichromatic lattice.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "wstark/config.hpp"
#include "wstark/ep_search.hpp"
#include "wstark/gpe.hpp"
#include "wstark/loop.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace wstark;

namespace {

constexpr const char* kVersion = "wstark 1.0.0";

json params_json(const LatticeParams& p) {
    return json{{"V0", p.V0}, {"delta", p.delta}, {"phi", p.phi}, {"F", p.F},
                {"invF", p.inv_F()}, {"g", p.g}};
}

struct OutputContext {
    fs::path dir;
    std::string manifest_name;
};

/// Emit the per-invocation manifest (the only file carrying timestamps).
OutputContext write_manifest(const RunConfig& cfg, const std::string& command,
                             const std::vector<std::string>& argv_echo) {
    OutputContext ctx;
    ctx.dir = cfg.output_dir;
    fs::create_directories(ctx.dir);
    ctx.manifest_name = "manifest-" + command + ".json";
    json m;
    m["tool_version"] = kVersion;
    m["command"] = command;
    m["argv"] = argv_echo;
    m["config"] = serialize_config(cfg);
    const auto now = std::chrono::system_clock::now();
    m["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    std::ofstream(ctx.dir / ctx.manifest_name) << m.dump(2) << "\n";
    return ctx;
}

void write_jsonl(const OutputContext& ctx, const std::string& name,
                 const std::vector<json>& records) {
    std::ofstream out(ctx.dir / name);
    out << json{{"manifest", ctx.manifest_name}}.dump() << "\n";
    for (const json& r : records) out << r.dump() << "\n";
}

/// Binary little-endian complex-double dump with a JSON sidecar header.
void dump_state(const OutputContext& ctx, const std::string& stem, const Eigen::VectorXcd& v,
                const GridSpec& grid) {
    std::ofstream bin(ctx.dir / (stem + ".cdbl"), std::ios::binary);
    bin.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(sizeof(Complex) * v.size()));
    json h{{"manifest", ctx.manifest_name},
           {"format", "little-endian complex128, interleaved re/im"},
           {"count", v.size()},
           {"x_left", grid.x_left()},
           {"dx", grid.dx()},
           {"periods_left", grid.periods_left},
           {"periods_right", grid.periods_right},
           {"points_per_period", grid.points_per_period}};
    std::ofstream(ctx.dir / (stem + ".json")) << h.dump(2) << "\n";
}

struct Range {
    double lo = 0.0, hi = 0.0;
    int count = 0;
};

Range parse_range(const std::string& s) {
    Range r;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> r.lo >> c1 >> r.hi >> c2 >> r.count) || c1 != ':' || c2 != ':')
        throw CLI::ValidationError("range", "expected lo:hi:count, got '" + s + "'");
    if (r.count < 2 || r.hi <= r.lo)
        throw CLI::ValidationError("range", "range must be increasing with count >= 2: '" + s + "'");
    return r;
}

std::array<double, 3> parse_triple(const std::string& s) {
    std::array<double, 3> t{};
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> t[0] >> c1 >> t[1] >> c2 >> t[2]) || c1 != ',' || c2 != ',')
        throw CLI::ValidationError("triple", "expected invF,delta,phi, got '" + s + "'");
    return t;
}

int resolve_threads(int flag_value) {
    if (const char* env = std::getenv("WSTARK_THREADS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (...) {
            throw std::invalid_argument("WSTARK_THREADS is not an integer");
        }
    }
    return std::max(1, flag_value);
}

json candidate_json(const EPCandidate& c) {
    return json{{"params", params_json(c.params)}, {"gap", c.gap},
                {"overlap_S", c.overlap_S},        {"petermann_min", c.petermann_min},
                {"certified", c.certified},        {"iterations", c.iterations},
                {"evaluations", c.evaluations},    {"warnings", c.warnings}};
}

int run_selftest();

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " — complex resonances and exceptional points of a tilted bichromatic lattice"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "configuration file (key = value lines)");
    int threads_flag = 1;
    app.add_option("--threads", threads_flag,
                   "worker pool size (WSTARK_THREADS overrides)")->capture_default_str();

    RunConfig cfg; // re-parsed after --config is known

    // ---- spectrum ----
    auto* sp = app.add_subcommand("spectrum", "resonances at one parameter point");
    double sp_invF = 4.0, sp_delta = 0.0, sp_phi = 0.0;
    int sp_n = 2;
    bool sp_all = false, sp_dump = false, sp_select_eta = false;
    sp->add_option("--invF", sp_invF, "inverse field strength 1/F")->capture_default_str();
    sp->add_option("--delta", sp_delta, "modulation")->capture_default_str();
    sp->add_option("--phi", sp_phi, "relative phase")->capture_default_str();
    sp->add_option("-n,--n-keep", sp_n, "number of central-cell states to report")
        ->capture_default_str();
    sp->add_flag("--all", sp_all, "report every physical state, not just the central cell");
    sp->add_flag("--dump-states", sp_dump, "binary eigenvector dumps");
    sp->add_flag("--select-eta", sp_select_eta, "run the CAP plateau scan first");

    // ---- scan ----
    auto* sc = app.add_subcommand("scan", "gap surface over a parameter plane");
    std::string sc_fix, sc_r_invF, sc_r_delta, sc_r_phi;
    sc->add_option("--fix", sc_fix, "fixed coordinate, e.g. delta=1")->required();
    sc->add_option("--range-invF", sc_r_invF, "lo:hi:count");
    sc->add_option("--range-delta", sc_r_delta, "lo:hi:count");
    sc->add_option("--range-phi", sc_r_phi, "lo:hi:count");
    double sc_seed_threshold = 1e-2;
    sc->add_option("--seed-threshold", sc_seed_threshold, "report minima below this gap")
        ->capture_default_str();

    // ---- find-ep ----
    auto* fe = app.add_subcommand("find-ep", "simplex search for an exceptional point");
    std::string fe_guess;
    std::vector<std::string> fe_freeze;
    fe->add_option("--guess", fe_guess, "invF,delta,phi")->required();
    fe->add_option("--freeze", fe_freeze, "coordinates to hold fixed (invF|delta|phi)");

    // ---- trace-ep ----
    auto* te = app.add_subcommand("trace-ep", "continuation of the EP curve");
    std::string te_start;
    double te_radius = 0.1;
    int te_max_points = 200;
    te->add_option("--start", te_start, "invF,delta,phi of a certified EP")->required();
    te->add_option("--radius", te_radius, "shell radius")->capture_default_str();
    te->add_option("--max-points", te_max_points)->capture_default_str();

    // ---- loop ----
    auto* lp = app.add_subcommand("loop", "closed loop in the (1/F, phi) plane");
    std::string lp_center;
    double lp_radius = 0.3, lp_off_invF = 0.0, lp_off_phi = 0.0;
    int lp_steps = 128, lp_cycles = 1;
    lp->add_option("--center", lp_center, "invF,delta,phi")->required();
    lp->add_option("--radius", lp_radius)->capture_default_str();
    lp->add_option("--offset-invF", lp_off_invF)->capture_default_str();
    lp->add_option("--offset-phi", lp_off_phi)->capture_default_str();
    lp->add_option("--steps", lp_steps, "samples per cycle")->capture_default_str();
    lp->add_option("--cycles", lp_cycles)->capture_default_str();

    // ---- nonlinear ----
    auto* nl = app.add_subcommand("nonlinear", "mean-field resonances over an F scan");
    double nl_g = 0.0, nl_delta = 1.0, nl_phi = -2.991;
    std::string nl_scan_f;
    bool nl_dump = false;
    nl->add_option("--g", nl_g, "interaction strength")->capture_default_str();
    nl->add_option("--delta", nl_delta)->capture_default_str();
    nl->add_option("--phi", nl_phi)->capture_default_str();
    nl->add_option("--scan-F", nl_scan_f, "lo:hi:count")->required();
    nl->add_flag("--dump-states", nl_dump);

    // ---- selftest ----
    auto* st = app.add_subcommand("selftest", "fast end-to-end invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // usage error
    }

    std::vector<std::string> argv_echo(argv, argv + argc);

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("cannot open config file '" + config_path + "'");
            std::stringstream ss;
            ss << in.rdbuf();
            cfg = parse_config(ss.str());
        }
        const int threads = resolve_threads(threads_flag);

        if (*st) return run_selftest();

        if (*sp) {
            LatticeParams p(cfg.lattice.V0, sp_delta, sp_phi, 1.0 / sp_invF);
            GridSpec grid = cfg.grid;
            const OutputContext ctx = write_manifest(cfg, "spectrum", argv_echo);
            if (sp_select_eta) grid.cap_strength = select_cap_strength(p, grid).eta;
            SpectrumSlice s = label_ladders(solve_resonances(p, grid, 0, cfg.solver));
            std::vector<const Resonance*> report;
            if (sp_all) {
                for (const Resonance& r : s.resonances) report.push_back(&r);
            } else {
                for (const Resonance& r : s.resonances)
                    if (r.peak_position >= -kPi && r.peak_position < kPi &&
                        static_cast<int>(report.size()) < sp_n)
                        report.push_back(&r);
            }
            std::vector<json> recs;
            int dump_id = 0;
            for (const Resonance* r : report) {
                recs.push_back(json{{"params", params_json(p)},
                                    {"E", r->energy},
                                    {"Gamma", r->gamma},
                                    {"alpha", r->ladder_index},
                                    {"n", r->site_index},
                                    {"K", petermann(*r)},
                                    {"cap_leakage", r->cap_leakage},
                                    {"eta_used", s.eta_used}});
                if (sp_dump)
                    dump_state(ctx, "state-" + std::to_string(dump_id++), r->right_vector, grid);
            }
            write_jsonl(ctx, "spectrum.jsonl", recs);
            std::cout << "wrote " << (ctx.dir / "spectrum.jsonl").string() << "\n";
            return 0;
        }

        if (*sc) {
            const auto eq = sc_fix.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--fix", "expected coord=value");
            const std::string coord = sc_fix.substr(0, eq);
            const double fixed_value = std::stod(sc_fix.substr(eq + 1));
            auto axis_of = [](const std::string& name) {
                if (name == "invF") return ScanAxis::InvF;
                if (name == "delta") return ScanAxis::Delta;
                if (name == "phi") return ScanAxis::Phi;
                throw CLI::ValidationError("axis", "unknown coordinate '" + name + "'");
            };
            const ScanAxis fixed_axis = axis_of(coord);
            std::vector<std::pair<ScanAxis, Range>> axes;
            if (!sc_r_invF.empty()) axes.emplace_back(ScanAxis::InvF, parse_range(sc_r_invF));
            if (!sc_r_delta.empty()) axes.emplace_back(ScanAxis::Delta, parse_range(sc_r_delta));
            if (!sc_r_phi.empty()) axes.emplace_back(ScanAxis::Phi, parse_range(sc_r_phi));
            if (axes.size() != 2)
                throw CLI::ValidationError("scan", "exactly two --range-* options required");

            AxisRange ax{axes[0].first, axes[0].second.lo, axes[0].second.hi, axes[0].second.count};
            AxisRange ay{axes[1].first, axes[1].second.lo, axes[1].second.hi, axes[1].second.count};
            const OutputContext ctx = write_manifest(cfg, "scan", argv_echo);
            const GapGrid g = scan_gap_plane(fixed_axis, fixed_value, ax, ay, cfg.grid,
                                             sc_seed_threshold, threads, cfg.solver);
            auto axis_name = [](ScanAxis a) {
                return a == ScanAxis::InvF ? "invF" : (a == ScanAxis::Delta ? "delta" : "phi");
            };
            std::ofstream csv(ctx.dir / "gap.csv");
            csv.precision(17);
            csv << "# manifest: " << ctx.manifest_name << "\n";
            csv << axis_name(ax.axis) << "," << axis_name(ay.axis) << ",gap\n";
            for (int iy = 0; iy < ay.count; ++iy)
                for (int ix = 0; ix < ax.count; ++ix)
                    csv << ax.value(ix) << "," << ay.value(iy) << "," << g.gap(iy, ix) << "\n";
            std::vector<json> seeds;
            for (const LatticeParams& p : g.seeds)
                seeds.push_back(json{{"params", params_json(p)}});
            write_jsonl(ctx, "seeds.jsonl", seeds);
            std::cout << "wrote " << (ctx.dir / "gap.csv").string() << " ("
                      << g.seeds.size() << " seed(s))\n";
            return 0;
        }

        if (*fe) {
            const auto t = parse_triple(fe_guess);
            LatticeParams guess(cfg.lattice.V0, t[1], t[2], 1.0 / t[0]);
            FrozenCoords frozen;
            for (const std::string& f : fe_freeze) {
                if (f == "invF") frozen.inv_f = true;
                else if (f == "delta") frozen.delta = true;
                else if (f == "phi") frozen.phi = true;
                else throw CLI::ValidationError("--freeze", "unknown coordinate '" + f + "'");
            }
            const OutputContext ctx = write_manifest(cfg, "find-ep", argv_echo);
            GapObjective obj(cfg.grid, cfg.solver);
            const EPCandidate c = find_ep(guess, frozen, obj, cfg.certification);
            write_jsonl(ctx, "ep.jsonl", {candidate_json(c)});
            std::cout << candidate_json(c).dump() << "\n";
            return c.certified ? 0 : 1;
        }

        if (*te) {
            const auto t = parse_triple(te_start);
            LatticeParams start_p(cfg.lattice.V0, t[1], t[2], 1.0 / t[0]);
            const OutputContext ctx = write_manifest(cfg, "trace-ep", argv_echo);
            GapObjective obj(cfg.grid, cfg.solver);
            EPCandidate start = obj.evaluate(start_p);
            start.certified = start.gap < cfg.certification.gap_tol &&
                              start.overlap_S > cfg.certification.s_tol &&
                              start.petermann_min > cfg.certification.k_tol;
            if (!start.certified)
                throw std::runtime_error("trace-ep: start point fails certification (gap " +
                                         std::to_string(start.gap) + ")");
            const EPCurve curve =
                trace_ep_curve(start, te_radius, te_max_points, obj, cfg.certification);
            std::vector<json> recs;
            for (const EPCandidate& c : curve.points) recs.push_back(candidate_json(c));
            const char* reason = nullptr;
            switch (curve.termination_reason) {
                case CurveTermination::LeftDomain: reason = "left-domain"; break;
                case CurveTermination::FoldDetected: reason = "fold-detected"; break;
                case CurveTermination::MaxPoints: reason = "max-points"; break;
                case CurveTermination::ConvergenceFailure: reason = "convergence-failure"; break;
            }
            recs.push_back(json{{"termination_reason", reason}, {"points", curve.points.size()}});
            write_jsonl(ctx, "trace.jsonl", recs);
            std::cout << "traced " << curve.points.size() << " points (" << reason << ")\n";
            return 0;
        }

        if (*lp) {
            const auto t = parse_triple(lp_center);
            LoopSpec spec;
            spec.center = LatticeParams(cfg.lattice.V0, t[1], t[2], 1.0 / t[0]);
            spec.radius_r = lp_radius;
            spec.offset_inv_f = lp_off_invF;
            spec.offset_phi = lp_off_phi;
            spec.steps_m = lp_steps;
            spec.cycles = lp_cycles;
            const OutputContext ctx = write_manifest(cfg, "loop", argv_echo);
            const LoopTrace trace = run_loop(spec, cfg.grid, cfg.solver);
            std::ofstream csv(ctx.dir / "loop.csv");
            csv.precision(17);
            csv << "# manifest: " << ctx.manifest_name << "\n";
            csv << "beta,re_E1,im_E1,re_E2,im_E2,re_c1,im_c1,re_c2,im_c2\n";
            for (size_t i = 0; i < trace.beta_samples.size(); ++i) {
                csv << trace.beta_samples[i];
                for (int a = 0; a < 2; ++a)
                    csv << "," << trace.eigenvalue_tracks[a][i].real() << ","
                        << trace.eigenvalue_tracks[a][i].imag();
                for (int a = 0; a < 2; ++a)
                    csv << "," << trace.component_tracks[a][i].real() << ","
                        << trace.component_tracks[a][i].imag();
                csv << "\n";
            }
            json verdict{{"encloses_ep", trace.encloses_ep},
                         {"permutation",
                          trace.permutation == LoopPermutation::Swap ? "swap" : "identity"},
                         {"refinements", trace.refinements}};
            json cycles = json::array();
            for (const CycleRecord& r : trace.cycle_records)
                cycles.push_back(json{
                    {"permutation", r.permutation == LoopPermutation::Swap ? "swap" : "identity"},
                    {"signs", r.signs}});
            verdict["cycles"] = cycles;
            write_jsonl(ctx, "loop-verdict.jsonl", {verdict});
            std::cout << verdict.dump() << "\n";
            return 0;
        }

        if (*nl) {
            const Range r = parse_range(nl_scan_f);
            const OutputContext ctx = write_manifest(cfg, "nonlinear", argv_echo);
            std::vector<json> recs;
            std::vector<std::tuple<double, Complex, Complex>> scan;
            int dump_id = 0;
            for (int i = 0; i < r.count; ++i) {
                const double F = r.lo + (r.hi - r.lo) * i / (r.count - 1);
                LatticeParams p(cfg.lattice.V0, nl_delta, nl_phi, F, nl_g);
                LatticeParams plin = p;
                plin.g = 0.0;
                const auto pair = central_pair(solve_resonances(plin, cfg.grid, 0, cfg.solver));
                std::array<NonlinearResonance, 2> nls;
                for (int a = 0; a < 2; ++a)
                    nls[a] = solve_nonlinear(p, cfg.grid, pair[a], cfg.gpe);
                scan.emplace_back(F, nls[0].mu, nls[1].mu);
                for (int a = 0; a < 2; ++a) {
                    recs.push_back(json{{"F", F},
                                        {"g", nl_g},
                                        {"branch", a + 1},
                                        {"M", nls[a].mu.real()},
                                        {"Gamma", -2.0 * nls[a].mu.imag()},
                                        {"iterations", nls[a].iterations},
                                        {"residual", nls[a].residual},
                                        {"K", nonlinear_petermann(p, cfg.grid, nls[a])}});
                    if (nl_dump)
                        dump_state(ctx, "nl-state-" + std::to_string(dump_id++),
                                   nls[a].right_vector, cfg.grid);
                }
            }
            try {
                const CrossingReport rep = classify_crossing(scan);
                const char* type = rep.type == CrossingType::TypeI
                                       ? "type-I"
                                       : (rep.type == CrossingType::TypeII ? "type-II"
                                                                           : "degenerate");
                recs.push_back(json{{"crossing_type", type},
                                    {"closest_approach_real", rep.closest_approach_real},
                                    {"closest_approach_imag", rep.closest_approach_imag}});
            } catch (const std::domain_error& e) {
                recs.push_back(json{{"crossing_type", "none"}, {"note", e.what()}});
            }
            write_jsonl(ctx, "nonlinear.jsonl", recs);
            std::cout << "wrote " << (ctx.dir / "nonlinear.jsonl").string() << "\n";
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2; // no subcommand dispatched
}

namespace {

int run_selftest() {
    int failures = 0;
    auto check = [&failures](bool ok, const char* what) {
        std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
        if (!ok) ++failures;
    };

    LatticeParams p(1.0, 1.0, 0.0, 0.2);
    check(std::abs(potential_value(0.0, LatticeParams(1.0, 1.0, 0.0, 0.2)) - 1.0) < 1e-15,
          "potential value at origin");
    check(std::abs(potential_value(1.7, p) - potential_value(1.7 + 2 * kPi, p)) < 1e-14,
          "potential periodicity");

    GridSpec small;
    small.periods_left = 6;
    small.periods_right = 3;
    small.points_per_period = 16;
    small.cap_width = 3;
    check(cap_profile(small.cap_onset() + 0.5, small) == 0.0, "CAP vanishes uphill");
    check(std::abs(cap_profile(small.cap_onset() - small.cap_length(), small) - 1.0) < 1e-14,
          "CAP normalized at full width");

    const HamiltonianMatrix h = build_hamiltonian(p, small);
    check((h.entries - h.entries.transpose()).norm() < 1e-12 * h.entries.norm(),
          "Hamiltonian complex symmetric");

    GridSpec herm = small;
    herm.cap_strength = 0.0;
    const HamiltonianMatrix h0 = build_hamiltonian(p, herm);
    check(h0.entries.imag().norm() == 0.0, "hermitian limit has no imaginary part");

    const SpectrumSlice s = solve_resonances(p, small);
    check(!s.resonances.empty(), "physical resonances found");
    check(petermann(s.resonances.front()) >= 1.0, "Petermann factor >= 1");
    check(std::abs(overlap(s.resonances.front(), s.resonances.front()) - 1.0) < 1e-12,
          "self-overlap is 1");

    const RunConfig cfg;
    check(parse_config(serialize_config(cfg)) == cfg, "config round-trip");

    std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return failures == 0 ? 0 : 1;
}

} // namespace
