// SPDX-License-Identifier: Apache-2.0
//
// Experiment drivers: small-noise probability scaling, importance sampling,
// convergence studies and the file-level dispatcher behind the CLI.
#pragma once

#include "spde/config.hpp"
#include "spde/control.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spde {

struct ScalingRow {
    double eps = 0.0;
    double p_hat = 0.0;
    double std_error = 0.0;
    double eps_log_p = 0.0;  // NaN when censored
    bool censored = false;   // zero hits
    std::size_t hits = 0;
    std::size_t replicas = 0;
    std::size_t blowups = 0;
    std::optional<double> deviation;  // eps log p + I*
};

struct ScalingTable {
    std::vector<ScalingRow> rows;  // decreasing eps
    std::optional<double> reference_action;
    double tilt_action = 0.0;  // action of the tilting control (0 for plain sampling)
    Sampling sampling = Sampling::Plain;
};

struct ImportanceResult {
    double eps = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    double plain_estimate = 0.0;
    double plain_std_error = 0.0;
    std::size_t plain_hits = 0;
    std::size_t tilted_hits = 0;
    double mean_weight = 0.0;
    double mean_weight_se = 0.0;
    /// p_hat (1 - p_hat) / var of the weighted samples (plain Bernoulli variance
    /// at the importance estimate over the tilted variance).
    double variance_reduction = 0.0;
    /// Empirical paired-seed ratio var_plain / var_tilted (0 with no plain hits).
    double variance_reduction_empirical = 0.0;
    std::size_t replicas = 0;
};

/// Tilting control: minimum-action control steering the skeleton to the
/// cheapest point a phi_k of the event boundary.
RateResult tilt_control(const ExperimentConfig& config);

ScalingTable run_eps_scaling(const ExperimentConfig& config);

/// Samples the controlled equation with drift psi (and -psi for the mixture
/// tilt), reweights by the likelihood ratio and pairs each replica with a
/// plain run on the same seed.
ImportanceResult run_importance_sampling(const ExperimentConfig& config, const Control& psi,
                                         double eps);

struct GalerkinStudy {
    std::vector<std::size_t> levels;
    std::vector<std::vector<double>> errors;  // [seed][level] sup_t ||u_k - u||_rho
    std::vector<double> mean_errors;
    bool decreasing = false;  // mean error strictly decreasing in k
};

struct ControlledStudy {
    std::vector<double> eps;
    std::vector<double> distances;  // sup_t ||v^{eps,psi} - v^{0,psi}||_rho
    bool decreasing = false;
};

struct MomentStudy {
    std::vector<double> scalings;
    std::vector<MomentEstimate> estimates;
    double spread = 0.0;  // max ratio / min ratio
    bool bounded = false;  // spread < 2
};

struct ConvergenceBundle {
    GalerkinStudy galerkin;
    ControlledStudy controlled;
    MomentStudy moments;
};

GalerkinStudy run_galerkin_study(const Field& eta, const CoefficientSet& coeffs, double eps,
                                 const std::vector<std::size_t>& levels, std::size_t seeds,
                                 const GridSpec& grid, const SolverConfig& config,
                                 std::uint64_t master_seed, double norm_p, unsigned threads = 1);

ControlledStudy run_controlled_study(const Field& eta, const CoefficientSet& coeffs,
                                     const Control& psi, const std::vector<double>& eps,
                                     const GridSpec& grid, const SolverConfig& config,
                                     const SeedDerivation& seed, double norm_p);

MomentStudy run_moment_study(const Field& eta, const CoefficientSet& coeffs, double eps,
                             const std::vector<double>& scalings, std::size_t replicas,
                             const GridSpec& grid, const SolverConfig& config,
                             std::uint64_t master_seed, unsigned threads = 1);

ConvergenceBundle run_convergence_studies(const ExperimentConfig& config);

/// Loads a config file, applies overrides and runs it; writes outputs and a
/// manifest into the output directory. Returns the list of written files.
std::vector<std::string> run_experiment(const ConfigMap& config);
std::vector<std::string> run_experiment(const std::string& config_path);

/// Library version string.
const char* version_string();

}  // namespace spde
