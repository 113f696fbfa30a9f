// SPDX-License-Identifier: Apache-2.0
//
// Line-oriented "key = value" configuration files with '#' comments, and the
// typed experiment configuration built from them. See docs/config.md.
#pragma once

#include "spde/action.hpp"
#include "spde/coeffs.hpp"
#include "spde/lattice.hpp"
#include "spde/mild_solver.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spde {

class ConfigMap {
public:
    /// Throws Config on malformed lines or duplicate keys.
    static ConfigMap parse(const std::string& text, const std::string& source = "<string>");
    /// Throws Io if unreadable.
    static ConfigMap load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value);
    void erase(const std::string& key) { values_.erase(key); }

    /// Typed accessors; a missing key or a bad value throws Config naming the key.
    const std::string& get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;  // comma separated
    std::vector<std::uint64_t> get_u64s(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

    const std::map<std::string, std::string>& entries() const noexcept { return values_; }
    const std::string& source() const noexcept { return source_; }
    /// Canonical "key = value" rendering, sorted by key.
    std::string echo() const;

private:
    std::map<std::string, std::string> values_;
    std::string source_;
};

enum class EventKind { L2, Lrho, Mode, Point };

/// Threshold event {F(u(T)) >= threshold} on the terminal field.
struct EventSpec {
    EventKind kind = EventKind::L2;
    double threshold = 0.0;  // -inf gives the always-true event
    std::size_t mode = 1;    // for EventKind::Mode
    double point = 0.5;      // for EventKind::Point (snapped to the nearest interior node)
    double rho = 8.0;        // for EventKind::Lrho

    double functional(const Field& u) const;
    bool occurs(const Field& u) const { return functional(u) >= threshold; }
    /// Amplitude a such that F(a phi_k) = threshold, used to aim the tilt.
    double target_amplitude(std::uint32_t nx, std::size_t k) const;
};

/// Initial data, targets and controls built from a short profile description.
struct ProfileSpec {
    std::string kind = "zero";  // zero | modes | file
    std::vector<std::size_t> modes;
    std::vector<double> amplitudes;
    std::string file;
};

enum class Sampling { Plain, Tilted };
enum class TiltKind { Mixture, Single };

struct ExperimentConfig {
    std::string kind;
    std::uint32_t nx = 64, nt = 512;
    double T = 0.5;
    std::string family = "linear";
    std::map<std::string, double> coef_params;
    SolverConfig solver;
    ProfileSpec eta;
    ProfileSpec target;
    ProfileSpec control;
    double eps = 0.1;
    std::vector<double> eps_list;
    std::size_t replicas = 1000;
    EventSpec event;
    Sampling sampling = Sampling::Plain;
    TiltKind tilt = TiltKind::Mixture;
    std::size_t tilt_mode = 1;
    std::optional<double> reference_action;
    std::uint64_t master_seed = 0;
    std::string out_dir = "out";
    unsigned threads = 1;
    ActionOptions action;
    std::vector<std::size_t> galerkin_levels{4, 16, 64};
    std::size_t galerkin_seeds = 20;
    std::vector<double> moment_scalings{1.0, 2.0, 4.0};
    std::size_t moment_replicas = 200;
    double sigma_min = 1e-8;
    std::size_t validate_samples = 2000;
    ConfigMap source;

    GridSpec grid() const { return make_grid(nx, nt, T); }
    CoefficientSet coefficients() const;

    /// Builds and validates the typed configuration. Throws Config naming the
    /// offending key (missing master_seed, unknown kind, bad eps list, ...).
    static ExperimentConfig from_map(const ConfigMap& map);
};

const std::vector<std::string>& experiment_kinds();

Field make_profile(const ProfileSpec& spec, const GridSpec& grid);
Control make_control(const ProfileSpec& spec, const GridSpec& grid);

}  // namespace spde
