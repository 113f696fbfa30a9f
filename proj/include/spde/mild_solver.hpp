// SPDX-License-Identifier: Apache-2.0
//
// Time integration of the mild formulation
//
//   u(t) = S_t eta + int S_{t-s} f(u) ds - int d_y G_{t-s} g(u) dy ds
//          + sqrt(eps) int G_{t-s} sigma(u) W(dy, ds)
//
// by a first-order exponential integrator. One step reads
//
//   u_{m+1} = P_K S_dt[u_m + dt f_m + sigma_m (sqrt(eps) dW_m / dx + dt psi_m)] + P_K D_dt[g_m]
//
// where S_dt is the exact heat semigroup, D_dt the divergence term integrated
// exactly in time per mode (mode k gets -(1 - e^{-lambda_k dt}) / lambda_k
// <phi_k', g>), psi an optional control and P_K the projection on the first
// K_modes modes.
#pragma once

#include "spde/coeffs.hpp"
#include "spde/lattice.hpp"
#include "spde/noise.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace spde {

enum class Scheme { Etd, Picard };
enum class Coupling { Standard, Integrated };

struct SolverConfig {
    Scheme scheme = Scheme::Etd;
    std::size_t K_modes = 0;                // spectral resolution; 0 = all nx-1 modes (nx/4 with a quadratic flux)
    std::optional<std::size_t> K_noise;     // noise modes; empty = white (nx-1)
    std::optional<double> R;                // chi_R cutoff radius of the truncated equation
    std::optional<unsigned> truncation_level;  // coefficient truncation level n
    double delta = 50.0;                    // weight of the B_{delta,T} diagnostic norm
    double picard_tol = 1e-10;
    unsigned picard_max_iter = 50;
    double rho = 8.0;
    Coupling coupling = Coupling::Standard;

    std::size_t resolved_modes(const GridSpec& grid) const;
    /// Throws Config errors: K_modes > nx-1, tolerances <= 0, Burgers-type g
    /// without nx >= 4 K_modes, K_noise > nx-1 ...
    void validate(const GridSpec& grid, const CoefficientSet& coeffs) const;
};

struct StepDiagnostics {
    double lrho_norm = 0.0;
    double l2_norm = 0.0;
    double stability = 0.0;  // dt max|dg/dr| / dx (advective Courant number)
    double cutoff = 1.0;     // chi_R weight applied on the step leaving this state
};

struct PathSolution {
    GridSpec grid{};
    std::vector<Field> states;                // t_0 .. t_nt
    std::vector<StepDiagnostics> diagnostics;  // one per state
    SeedDerivation seed{};
    double eps = 0.0;
    SolverConfig config{};

    const Field& at(std::size_t m) const { return states.at(m); }
    const Field& terminal() const { return states.back(); }
};

/// Pointwise forcing of one step. `white` are the cell increments (nx-1 values)
/// or empty; `control` the effective control values at the interior nodes or
/// empty.
struct StepInputs {
    double weight = 1.0;
    double sqrt_eps = 0.0;
    std::span<const double> white{};
    std::span<const double> control{};
};

/// The discrete mild map for one (grid, coefficients, config). Stateless after
/// construction, shareable across threads.
class MildStepper {
public:
    MildStepper(const GridSpec& grid, const CoefficientSet& coeffs, const SolverConfig& config);

    const GridSpec& grid() const noexcept { return grid_; }
    const CoefficientSet& coeffs() const noexcept { return coeffs_; }
    const SpectralBasis& spectral() const noexcept { return *basis_; }
    std::size_t resolved_modes() const noexcept { return K_; }

    /// out = P S[lin + dt f(eval) + sigma(eval)(...)] + P D[g(eval)] at t_m.
    /// Usually lin and eval are the same state; the Picard map freezes eval.
    /// Throws BlowUpError(m+1) on a non-finite result.
    void step(std::size_t m, std::span<const double> lin, std::span<const double> eval,
              const StepInputs& in, std::span<double> out) const;

    /// In-place out = P S_dt out.
    void apply_semigroup(std::span<double> field) const;
    /// Adds to `out` the transpose of the interior part of P D_dt applied to p.
    void add_divergence_transpose(std::span<const double> p, std::span<double> out) const;
    /// Nodal values (nx+1) of weight * g(t_m, x, u) with u = 0 on the boundary.
    void nodal_g(std::size_t m, std::span<const double> u, double weight,
                 std::span<double> nodal) const;

    double decay(std::size_t k) const { return decay_[k - 1]; }

private:
    GridSpec grid_;
    CoefficientSet coeffs_;
    std::shared_ptr<const SpectralBasis> basis_;
    std::size_t K_;
    std::vector<double> decay_;       // e^{-lambda_k dt}
    std::vector<double> divergence_;  // -(1 - e^{-lambda_k dt}) / lambda_k
};

/// Per-step hook of the integrator: called with (m, state u_m) for m = 0..nt.
using StateObserver = std::function<void(std::size_t, std::span<const double>)>;

/// Forcing provider: fills the inputs of step m (white and control spans may
/// refer to storage owned by the caller).
struct Forcing {
    const NoiseRealization* noise = nullptr;
    double eps = 0.0;
    const std::vector<double>* control = nullptr;  // nt x (nx-1) effective control, time-major
    std::optional<double> R;                       // chi_R radius (truncated equation)
    double rho = 8.0;
};

/// Generic driver: iterates the stepper from eta, reporting every state.
void integrate(const MildStepper& stepper, const Field& eta, const Forcing& forcing,
               const StateObserver& observe, std::vector<double>* cutoffs = nullptr);

/// Collects a full PathSolution with diagnostics.
PathSolution integrate_path(const MildStepper& stepper, const Field& eta, const Forcing& forcing,
                            const SolverConfig& config, const SeedDerivation& seed);

/// Solution of the SPDE driven by white noise derived from `seed`.
PathSolution solve_spde(const Field& eta, const CoefficientSet& coeffs, double eps,
                        const SeedDerivation& seed, const GridSpec& grid,
                        const SolverConfig& config = {});

/// Same with every nonlinear and noise term multiplied by chi_R(||u(t_m)||_rho).
PathSolution solve_truncated(const Field& eta, const CoefficientSet& coeffs, double R, double eps,
                             const SeedDerivation& seed, const GridSpec& grid,
                             const SolverConfig& config = {});

/// Noise restricted to the first k sheet modes, nested-coupled to the white
/// realization of the same seed (k = nx-1 reproduces solve_spde).
PathSolution solve_galerkin_noise(const Field& eta, const CoefficientSet& coeffs, std::size_t k,
                                  double eps, const SeedDerivation& seed, const GridSpec& grid,
                                  const SolverConfig& config = {});

/// Solve with an explicit noise realization.
PathSolution solve_with_noise(const Field& eta, const CoefficientSet& coeffs, double eps,
                              const NoiseRealization& noise, const SolverConfig& config = {});

/// max_m e^{-delta t_m} ||a_m - b_m||_rho.
double weighted_path_distance(const PathSolution& a, const PathSolution& b, double delta,
                              double rho);
double weighted_path_distance(const std::vector<Field>& a, const std::vector<Field>& b,
                              const GridSpec& grid, double delta, double rho);
/// sup_m ||a_m - b_m||_p (the C([0,T]; L^p) distance).
double sup_path_distance(const PathSolution& a, const PathSolution& b, double p);

struct PicardResult {
    PathSolution path;
    std::vector<double> distances;  // successive B_{delta,T} distances
    unsigned iterations = 0;
};

/// Fixed-point iteration of the discrete mild map u -> M_T(u), starting from
/// the free heat flow, until the B_{delta,T} distance of successive iterates
/// is <= tol. Throws NotConverged after max_iter iterations.
PicardResult picard_solve(const Field& eta, const CoefficientSet& coeffs, double eps,
                          const NoiseRealization* noise, const GridSpec& grid, double tol,
                          unsigned max_iter, const SolverConfig& config = {});

struct MomentEstimate {
    double estimate = 0.0;  // mean of sup_m ||u(t_m)||_rho^rho
    double std_error = 0.0;
    double ratio = 0.0;     // estimate / (1 + ||eta||_rho^rho)
    std::size_t replicas = 0;
};

/// Replica-parallel Monte Carlo of E sup_t ||u(t)||_rho^rho; replica r uses
/// SeedDerivation{master, r, .}. Aggregation is independent of `threads`.
MomentEstimate estimate_moments(const Field& eta, const CoefficientSet& coeffs, double eps,
                                double rho, std::size_t replicas, const GridSpec& grid,
                                const SolverConfig& config, std::uint64_t master_seed,
                                unsigned threads = 1);

}  // namespace spde
