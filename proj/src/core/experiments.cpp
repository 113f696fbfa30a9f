// SPDX-License-Identifier: Apache-2.0
#include "spde/experiments.hpp"

#include "spde/error.hpp"
#include "spde/parallel.hpp"
#include "spde/persist.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#ifndef SPDELAB_VERSION
#define SPDELAB_VERSION "0.0.0"
#endif

namespace spde {

const char* version_string() { return SPDELAB_VERSION; }

namespace {

NoiseRealization draw_noise(const GridSpec& grid, const SolverConfig& config, const SeedDerivation& seed) {
    return config.K_noise ? sample_sheet_expansion(grid, *config.K_noise, seed)
                          : sample_white_increments(grid, seed);
}

Field terminal_state(const MildStepper& stepper, const Field& eta, const Forcing& forcing) {
    Field out(stepper.grid().nx);
    integrate(stepper, eta, forcing, [&](std::size_t m, std::span<const double> u) {
        if (m == stepper.grid().nt) std::copy(u.begin(), u.end(), out.storage().begin());
    });
    return out;
}

double log_cosh(double a) {
    const double x = std::abs(a);
    return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
}

// One replica of the tilted estimator together with its paired plain run.
struct ReplicaSample {
    double weighted = 0.0;  // 1_A * weight
    double weight = 0.0;
    bool hit = false;
    bool plain_hit = false;
    bool blowup = false;
};

struct SamplerSetup {
    const MildStepper* stepper = nullptr;
    const Field* eta = nullptr;
    const EventSpec* event = nullptr;
    const SolverConfig* solver = nullptr;
    const std::vector<double>* eff_plus = nullptr;  // null for plain sampling
    const std::vector<double>* eff_minus = nullptr;
    double half_norm = 0.0;  // sum eff^2 dt dx / 2
    TiltKind tilt = TiltKind::Single;
    bool paired_plain = false;
};

ReplicaSample sample_replica(const SamplerSetup& s, double eps, const SeedDerivation& seed) {
    const GridSpec& g = s.stepper->grid();
    const NoiseRealization noise = draw_noise(g, *s.solver, seed);
    Forcing forcing;
    forcing.noise = &noise;
    forcing.eps = eps;
    forcing.R = s.solver->R;
    forcing.rho = s.solver->rho;
    ReplicaSample out;
    try {
        if (!s.eff_plus) {
            out.hit = s.event->occurs(terminal_state(*s.stepper, *s.eta, forcing));
            out.plain_hit = out.hit;
            out.weight = 1.0;
            out.weighted = out.hit ? 1.0 : 0.0;
            return out;
        }
        const bool minus = s.tilt == TiltKind::Mixture && seed.replica % 2 == 1;
        const std::vector<double>& eff = minus ? *s.eff_minus : *s.eff_plus;
        forcing.control = &eff;
        out.hit = s.event->occurs(terminal_state(*s.stepper, *s.eta, forcing));
        const double sq = std::sqrt(eps);
        const double B = s.half_norm / eps;
        const double a_raw = control_pairing(*s.eff_plus, noise) / sq;
        double log_w;
        if (s.tilt == TiltKind::Single) {
            log_w = -a_raw - B;
        } else {
            // pairing with the shifted increments dW + sgn psi dt dx / sqrt(eps)
            const double A = a_raw + (minus ? -2.0 * B : 2.0 * B);
            log_w = B - log_cosh(A);
        }
        out.weight = std::exp(log_w);
        out.weighted = out.hit ? out.weight : 0.0;
        if (s.paired_plain) {
            Forcing plain = forcing;
            plain.control = nullptr;
            out.plain_hit = s.event->occurs(terminal_state(*s.stepper, *s.eta, plain));
        }
    } catch (const BlowUpError&) {
        out = ReplicaSample{};
        out.blowup = true;
    }
    return out;
}

std::vector<ReplicaSample> sample_all(const SamplerSetup& s, double eps, std::size_t replicas,
                                      std::uint64_t master, unsigned threads) {
    std::vector<ReplicaSample> out(replicas);
    parallel_for(replicas, threads, [&](std::size_t r) {
        out[r] = sample_replica(s, eps, SeedDerivation{master, r, 0});
    });
    const auto blowups = static_cast<std::size_t>(
        std::count_if(out.begin(), out.end(), [](const ReplicaSample& x) { return x.blowup; }));
    require(blowups < replicas, ErrorCode::BlowUp,
            "all " + std::to_string(replicas) + " replicas blew up at eps = " + std::to_string(eps) +
                " (master seed " + std::to_string(master) + ")");
    return out;
}

struct TiltSetup {
    std::vector<double> plus, minus;
    double half_norm = 0.0;
};

TiltSetup make_tilt(const Control& psi, Coupling coupling) {
    TiltSetup t;
    t.plus = effective_control(psi, coupling);
    t.minus = t.plus;
    for (double& v : t.minus) v = -v;
    t.half_norm = 0.5 * control_squared_norm(t.plus, psi.grid());
    return t;
}

}  // namespace

RateResult tilt_control(const ExperimentConfig& config) {
    const GridSpec grid = config.grid();
    Field target(grid.nx);
    if (config.target.kind != "zero") {
        target = make_profile(config.target, grid);
    } else {
        const double a = config.event.target_amplitude(grid.nx, config.tilt_mode);
        target = sample_field(grid.nx, [&](double x) { return a * basis::eigenfunction(config.tilt_mode, x); });
    }
    return minimize_action(target, make_profile(config.eta, grid), config.coefficients(), grid,
                           config.action, config.solver);
}

ImportanceResult run_importance_sampling(const ExperimentConfig& config, const Control& psi,
                                         double eps) {
    require(eps > 0.0, ErrorCode::InvalidArgument, "importance sampling needs eps > 0");
    const GridSpec grid = config.grid();
    require(psi.grid() == grid, ErrorCode::Dimension, "tilting control is not on the config grid");
    const MildStepper stepper(grid, config.coefficients(), config.solver);
    const Field eta = make_profile(config.eta, grid);
    const TiltSetup tilt = make_tilt(psi, config.solver.coupling);
    SamplerSetup s;
    s.stepper = &stepper;
    s.eta = &eta;
    s.event = &config.event;
    s.solver = &config.solver;
    if (!psi.is_zero()) {
        s.eff_plus = &tilt.plus;
        s.eff_minus = &tilt.minus;
    }
    s.half_norm = tilt.half_norm;
    s.tilt = config.tilt;
    s.paired_plain = true;
    const auto samples = sample_all(s, eps, config.replicas, config.master_seed, config.threads);

    std::vector<double> y, w, plain;
    ImportanceResult r;
    r.eps = eps;
    r.replicas = samples.size();
    for (const auto& x : samples) {
        y.push_back(x.weighted);
        w.push_back(x.weight);
        plain.push_back(x.plain_hit ? 1.0 : 0.0);
        r.plain_hits += x.plain_hit;
        r.tilted_hits += x.hit;
    }
    const SampleStats sy = sample_stats(y), sw = sample_stats(w), sp = sample_stats(plain);
    r.estimate = sy.mean;
    r.std_error = sy.std_error;
    r.mean_weight = sw.mean;
    r.mean_weight_se = sw.std_error;
    r.plain_estimate = sp.mean;
    r.plain_std_error = sp.std_error;
    const double bern = r.estimate * (1.0 - r.estimate);
    r.variance_reduction = sy.variance > 0.0 ? bern / sy.variance : (bern == 0.0 ? 1.0 : 0.0);
    r.variance_reduction_empirical = sy.variance > 0.0 ? sp.variance / sy.variance : 0.0;
    return r;
}

ScalingTable run_eps_scaling(const ExperimentConfig& config) {
    require(!config.eps_list.empty(), ErrorCode::Config, "missing required key 'eps_list'");
    const GridSpec grid = config.grid();
    const MildStepper stepper(grid, config.coefficients(), config.solver);
    const Field eta = make_profile(config.eta, grid);
    ScalingTable table;
    table.sampling = config.sampling;
    table.reference_action = config.reference_action;

    SamplerSetup s;
    s.stepper = &stepper;
    s.eta = &eta;
    s.event = &config.event;
    s.solver = &config.solver;
    s.tilt = config.tilt;
    TiltSetup tilt;
    const bool trivial = config.event.threshold == -std::numeric_limits<double>::infinity();
    if (config.sampling == Sampling::Tilted && !trivial) {
        const RateResult rr = tilt_control(config);
        table.tilt_action = rr.I;
        tilt = make_tilt(rr.psi, config.solver.coupling);
        if (!rr.psi.is_zero()) {
            s.eff_plus = &tilt.plus;
            s.eff_minus = &tilt.minus;
        }
        s.half_norm = tilt.half_norm;
    }

    for (double eps : config.eps_list) {
        ScalingRow row;
        row.eps = eps;
        const auto samples = sample_all(s, eps, config.replicas, config.master_seed, config.threads);
        std::vector<double> y;
        for (const auto& x : samples) {
            y.push_back(x.weighted);
            row.hits += x.hit;
            row.blowups += x.blowup;
        }
        row.replicas = samples.size();
        const SampleStats st = sample_stats(y);
        row.p_hat = std::clamp(st.mean, 0.0, 1.0);
        row.std_error = st.std_error;
        if (s.eff_plus == nullptr) {
            row.std_error = std::sqrt(row.p_hat * (1.0 - row.p_hat) / static_cast<double>(row.replicas));
        }
        row.censored = row.hits == 0;
        row.eps_log_p = row.censored ? std::numeric_limits<double>::quiet_NaN() : eps * std::log(row.p_hat);
        if (row.p_hat == 1.0) row.eps_log_p = 0.0;
        if (table.reference_action && !row.censored) row.deviation = row.eps_log_p + *table.reference_action;
        table.rows.push_back(row);
    }
    return table;
}

GalerkinStudy run_galerkin_study(const Field& eta, const CoefficientSet& coeffs, double eps,
                                 const std::vector<std::size_t>& levels, std::size_t seeds,
                                 const GridSpec& grid, const SolverConfig& config,
                                 std::uint64_t master_seed, double norm_p, unsigned threads) {
    require(!levels.empty() && seeds >= 1, ErrorCode::InvalidArgument,
            "Galerkin study needs levels and at least one seed");
    require(eps > 0.0, ErrorCode::InvalidArgument, "Galerkin study needs eps > 0");
    GalerkinStudy st;
    st.levels = levels;
    st.errors.assign(seeds, std::vector<double>(levels.size()));
    SolverConfig white_cfg = config;
    white_cfg.K_noise.reset();
    parallel_for(seeds, threads, [&](std::size_t s) {
        const SeedDerivation seed{master_seed, s, 0};
        const PathSolution ref = solve_spde(eta, coeffs, eps, seed, grid, white_cfg);
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const PathSolution u = solve_galerkin_noise(eta, coeffs, levels[i], eps, seed, grid, white_cfg);
            st.errors[s][i] = sup_path_distance(u, ref, norm_p);
        }
    });
    st.mean_errors.assign(levels.size(), 0.0);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        std::vector<double> col(seeds);
        for (std::size_t s = 0; s < seeds; ++s) col[s] = st.errors[s][i];
        st.mean_errors[i] = sample_stats(col).mean;
    }
    st.decreasing = true;
    for (std::size_t i = 1; i < levels.size(); ++i) {
        st.decreasing = st.decreasing && st.mean_errors[i] < st.mean_errors[i - 1];
    }
    return st;
}

ControlledStudy run_controlled_study(const Field& eta, const CoefficientSet& coeffs,
                                     const Control& psi, const std::vector<double>& eps,
                                     const GridSpec& grid, const SolverConfig& config,
                                     const SeedDerivation& seed, double norm_p) {
    require(!eps.empty(), ErrorCode::Config, "missing required key 'eps_list'");
    ControlledStudy st;
    st.eps = eps;
    const PathSolution skeleton = solve_skeleton(eta, coeffs, psi, grid, config);
    const NoiseRealization noise = draw_noise(grid, config, seed);
    for (double e : eps) {
        const PathSolution v = solve_controlled_with_noise(eta, coeffs, psi, e, noise, config);
        st.distances.push_back(sup_path_distance(v, skeleton, norm_p));
    }
    st.decreasing = true;
    for (std::size_t i = 1; i < st.distances.size(); ++i) {
        st.decreasing = st.decreasing && st.distances[i] < st.distances[i - 1];
    }
    return st;
}

MomentStudy run_moment_study(const Field& eta, const CoefficientSet& coeffs, double eps,
                             const std::vector<double>& scalings, std::size_t replicas,
                             const GridSpec& grid, const SolverConfig& config,
                             std::uint64_t master_seed, unsigned threads) {
    require(!scalings.empty(), ErrorCode::Config, "missing required key 'moment_scalings'");
    MomentStudy st;
    st.scalings = scalings;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double c : scalings) {
        Field scaled = eta;
        for (auto& v : scaled.storage()) v *= c;
        st.estimates.push_back(
            estimate_moments(scaled, coeffs, eps, config.rho, replicas, grid, config, master_seed, threads));
        lo = std::min(lo, st.estimates.back().ratio);
        hi = std::max(hi, st.estimates.back().ratio);
    }
    st.spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    st.bounded = st.spread < 2.0;
    return st;
}

ConvergenceBundle run_convergence_studies(const ExperimentConfig& config) {
    require(!config.eps_list.empty(), ErrorCode::Config, "missing required key 'eps_list'");
    const GridSpec grid = config.grid();
    const CoefficientSet coeffs = config.coefficients();
    const Field eta = make_profile(config.eta, grid);
    const double p = config.solver.rho;
    const double eps = config.eps > 0.0 ? config.eps : config.eps_list.front();
    ConvergenceBundle b;
    b.galerkin = run_galerkin_study(eta, coeffs, eps, config.galerkin_levels, config.galerkin_seeds,
                                    grid, config.solver, config.master_seed, p, config.threads);
    b.controlled = run_controlled_study(eta, coeffs, make_control(config.control, grid), config.eps_list,
                                        grid, config.solver, SeedDerivation{config.master_seed, 0, 0}, p);
    b.moments = run_moment_study(eta, coeffs, eps, config.moment_scalings, config.moment_replicas, grid,
                                 config.solver, config.master_seed, config.threads);
    return b;
}

namespace {

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void write_path(const std::string& dir, const PathSolution& path, std::vector<std::string>& files) {
    std::vector<double> flat;
    flat.reserve(path.states.size() * path.grid.interior());
    for (const Field& f : path.states) flat.insert(flat.end(), f.storage().begin(), f.storage().end());
    write_snapshot(join(dir, "path.bin"), path.grid, flat);
    files.push_back(join(dir, "path.bin"));
    CsvWriter csv(join(dir, "path.csv"), {"m", "t", "l2_norm", "lrho_norm", "stability", "cutoff"});
    for (std::size_t m = 0; m < path.diagnostics.size(); ++m) {
        const auto& d = path.diagnostics[m];
        csv.cell(static_cast<std::int64_t>(m)).cell(path.grid.time(m)).cell(d.l2_norm).cell(d.lrho_norm)
            .cell(d.stability).cell(d.cutoff).end_row();
    }
    csv.close();
    files.push_back(join(dir, "path.csv"));
}

void write_manifest(const ExperimentConfig& c, const std::vector<std::string>& outputs) {
    std::ofstream m(join(c.out_dir, "manifest.cfg"), std::ios::trunc);
    require(static_cast<bool>(m), ErrorCode::Io, "cannot write manifest in '" + c.out_dir + "'");
    m << "# spdelab " << version_string() << "\n";
    m << "# master_seed " << c.master_seed << "\n";
    for (const auto& f : outputs) m << "# output " << std::filesystem::path(f).filename().string() << "\n";
    ConfigMap echo = c.source;
    echo.set("master_seed", std::to_string(c.master_seed));
    echo.erase("threads");
    m << echo.echo();
    require(static_cast<bool>(m), ErrorCode::Io, "write to manifest failed");
}

std::vector<std::string> run_kind(const ExperimentConfig& c) {
    std::vector<std::string> files;
    const std::string& dir = c.out_dir;
    const GridSpec grid = c.grid();
    const CoefficientSet coeffs = c.coefficients();

    if (c.kind == "simulate") {
        const Field eta = make_profile(c.eta, grid);
        const Control psi = make_control(c.control, grid);
        PathSolution path;
        if (c.solver.scheme == Scheme::Picard) {
            require(psi.is_zero(), ErrorCode::Config, "scheme = picard does not take a control");
            const NoiseRealization noise = draw_noise(grid, c.solver, SeedDerivation{c.master_seed, 0, 0});
            PicardResult pr = picard_solve(eta, coeffs, c.eps, &noise, grid, c.solver.picard_tol,
                                           c.solver.picard_max_iter, c.solver);
            CsvWriter csv(join(dir, "picard.csv"), {"iteration", "distance"});
            for (std::size_t i = 0; i < pr.distances.size(); ++i) {
                csv.cell(static_cast<std::int64_t>(i + 1)).cell(pr.distances[i]).end_row();
            }
            csv.close();
            files.push_back(join(dir, "picard.csv"));
            path = std::move(pr.path);
        } else {
            path = solve_controlled(eta, coeffs, psi, c.eps, SeedDerivation{c.master_seed, 0, 0}, grid, c.solver);
        }
        write_path(dir, path, files);
    } else if (c.kind == "skeleton") {
        const PathSolution path =
            solve_skeleton(make_profile(c.eta, grid), coeffs, make_control(c.control, grid), grid, c.solver);
        write_path(dir, path, files);
        const RateValue rv = rate_functional(make_control(c.control, grid));
        CsvWriter csv(join(dir, "summary.csv"), {"I"});
        csv.cell(rv.I).end_row();
        csv.close();
        files.push_back(join(dir, "summary.csv"));
    } else if (c.kind == "minimize-action") {
        require(c.target.kind != "zero" || c.event.threshold != 0.0, ErrorCode::Config,
                "missing required key 'target' (or an event_threshold to aim at)");
        const RateResult rr = tilt_control(c);
        CsvWriter trace(join(dir, "trace.csv"), {"iteration", "mu", "objective", "action", "residual", "step"});
        for (const auto& it : rr.trace) {
            trace.cell(static_cast<std::int64_t>(it.iteration)).cell(it.mu).cell(it.objective).cell(it.action)
                .cell(it.residual).cell(it.step).end_row();
        }
        trace.close();
        save_control(join(dir, "psi.bin"), rr.psi);
        CsvWriter sum(join(dir, "summary.csv"), {"I", "residual", "iterations", "converged", "mu"});
        sum.cell(rr.I).cell(rr.residual).cell(static_cast<std::int64_t>(rr.iterations))
            .cell(static_cast<std::int64_t>(rr.converged)).cell(rr.mu).end_row();
        sum.close();
        files.insert(files.end(), {join(dir, "trace.csv"), join(dir, "psi.bin"), join(dir, "summary.csv")});
    } else if (c.kind == "mc-scaling") {
        const ScalingTable t = run_eps_scaling(c);
        CsvWriter csv(join(dir, "scaling.csv"), {"eps", "p_hat", "std_error", "eps_log_p", "censored",
                                                 "hits", "replicas", "blowups", "deviation"});
        for (const auto& r : t.rows) {
            csv.cell(r.eps).cell(r.p_hat).cell(r.std_error).cell(r.eps_log_p)
                .cell(static_cast<std::int64_t>(r.censored)).cell(static_cast<std::int64_t>(r.hits))
                .cell(static_cast<std::int64_t>(r.replicas)).cell(static_cast<std::int64_t>(r.blowups));
            csv.cell(r.deviation ? format_double(*r.deviation) : std::string());
            csv.end_row();
        }
        csv.close();
        files.push_back(join(dir, "scaling.csv"));
    } else if (c.kind == "importance") {
        Control psi = c.control.kind != "zero" ? make_control(c.control, grid) : tilt_control(c).psi;
        const std::vector<double> eps = c.eps_list.empty() ? std::vector<double>{c.eps} : c.eps_list;
        CsvWriter csv(join(dir, "importance.csv"),
                      {"eps", "estimate", "std_error", "plain_estimate", "plain_std_error", "plain_hits",
                       "tilted_hits", "mean_weight", "mean_weight_se", "variance_reduction",
                       "variance_reduction_empirical", "replicas"});
        for (double e : eps) {
            const ImportanceResult r = run_importance_sampling(c, psi, e);
            csv.cell(r.eps).cell(r.estimate).cell(r.std_error).cell(r.plain_estimate).cell(r.plain_std_error)
                .cell(static_cast<std::int64_t>(r.plain_hits)).cell(static_cast<std::int64_t>(r.tilted_hits))
                .cell(r.mean_weight).cell(r.mean_weight_se).cell(r.variance_reduction)
                .cell(r.variance_reduction_empirical).cell(static_cast<std::int64_t>(r.replicas)).end_row();
        }
        csv.close();
        save_control(join(dir, "psi.bin"), psi);
        files.insert(files.end(), {join(dir, "importance.csv"), join(dir, "psi.bin")});
    } else if (c.kind == "convergence") {
        const ConvergenceBundle b = run_convergence_studies(c);
        CsvWriter g(join(dir, "galerkin.csv"), {"k", "mean_error"});
        for (std::size_t i = 0; i < b.galerkin.levels.size(); ++i) {
            g.cell(static_cast<std::int64_t>(b.galerkin.levels[i])).cell(b.galerkin.mean_errors[i]).end_row();
        }
        g.close();
        CsvWriter gs(join(dir, "galerkin_seeds.csv"), {"seed", "k", "error"});
        for (std::size_t s = 0; s < b.galerkin.errors.size(); ++s) {
            for (std::size_t i = 0; i < b.galerkin.levels.size(); ++i) {
                gs.cell(static_cast<std::int64_t>(s)).cell(static_cast<std::int64_t>(b.galerkin.levels[i]))
                    .cell(b.galerkin.errors[s][i]).end_row();
            }
        }
        gs.close();
        CsvWriter ct(join(dir, "controlled.csv"), {"eps", "distance"});
        for (std::size_t i = 0; i < b.controlled.eps.size(); ++i) {
            ct.cell(b.controlled.eps[i]).cell(b.controlled.distances[i]).end_row();
        }
        ct.close();
        CsvWriter mo(join(dir, "moments.csv"), {"scaling", "estimate", "std_error", "ratio"});
        for (std::size_t i = 0; i < b.moments.scalings.size(); ++i) {
            const auto& e = b.moments.estimates[i];
            mo.cell(b.moments.scalings[i]).cell(e.estimate).cell(e.std_error).cell(e.ratio).end_row();
        }
        mo.close();
        CsvWriter su(join(dir, "convergence_summary.csv"), {"study", "pass"});
        su.cell(std::string("galerkin")).cell(static_cast<std::int64_t>(b.galerkin.decreasing)).end_row();
        su.cell(std::string("controlled")).cell(static_cast<std::int64_t>(b.controlled.decreasing)).end_row();
        su.cell(std::string("moments")).cell(static_cast<std::int64_t>(b.moments.bounded)).end_row();
        su.close();
        for (const char* f : {"galerkin.csv", "galerkin_seeds.csv", "controlled.csv", "moments.csv",
                              "convergence_summary.csv"}) {
            files.push_back(join(dir, f));
        }
    } else if (c.kind == "validate") {
        const AssumptionReport rep = validate_assumptions(coeffs, AssumptionBox{}, c.validate_samples);
        CsvWriter csv(join(dir, "validate.csv"), {"check", "passed", "worst_ratio", "t", "x", "r", "r2"});
        for (const auto& ch : rep.checks) {
            csv.cell(ch.name).cell(static_cast<std::int64_t>(ch.passed)).cell(ch.worst_ratio).cell(ch.t)
                .cell(ch.x).cell(ch.r).cell(ch.r2).end_row();
        }
        csv.cell(std::string("H1-rho")).cell(static_cast<std::int64_t>(rep.rho_ok)).cell(coeffs.rho)
            .cell(0.0).cell(0.0).cell(0.0).cell(0.0).end_row();
        csv.close();
        files.push_back(join(dir, "validate.csv"));
        std::ofstream w(join(dir, "warnings.txt"), std::ios::trunc);
        for (const auto& s : rep.warnings) w << s << "\n";
        w << "H6: not checked, the condition has no usable definition\n";
        files.push_back(join(dir, "warnings.txt"));
    }
    return files;
}

}  // namespace

std::vector<std::string> run_experiment(const ConfigMap& map) {
    const ExperimentConfig c = ExperimentConfig::from_map(map);
    ensure_directory(c.out_dir);
    std::vector<std::string> files = run_kind(c);
    write_manifest(c, files);
    files.push_back(join(c.out_dir, "manifest.cfg"));
    return files;
}

std::vector<std::string> run_experiment(const std::string& config_path) {
    return run_experiment(ConfigMap::load(config_path));
}

}  // namespace spde
