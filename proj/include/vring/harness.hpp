#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vring/diagnostics.hpp"
#include "vring/planar_vec.hpp"
#include "vring/point_vortex.hpp"
#include "vring/ring_sim.hpp"

namespace vring {

/** How the blob regularization length is chosen per case. */
struct DeltaPolicy {
    enum Kind { HalfSpacing, Fixed, Zero } kind = HalfSpacing;
    double value = 0.0; // for Fixed

    double resolve(double eps, int particles_per_blob) const;
    std::string describe() const;
};

/** Parsed experiment description (see README for the config file schema). */
struct ExperimentConfig {
    std::string scenario;
    std::vector<PlanarVec> centers;
    std::vector<double> intensities;
    std::vector<double> eps_list; // strictly descending
    double alpha = 3.0;
    double horizon = 1.0;
    double dt = 1e-3;
    int particles_per_blob = 1000;
    DeltaPolicy delta_policy;
    std::string output_dir = ".";
    int workers = 1;
    bool exploratory = false;    // permits alpha <= 2
    bool drift = false;          // pv-run only: add the e1 a_i drift term
    double collapse_threshold = 0.0; // 0 = default 1e-6 * initial min separation
    double gamma = 2.0;
    double m_bound = 0.0;
    double quad_tol = 1e-12;
};

/** Parse and validate a flat key=value config file. Throws ConfigError. */
ExperimentConfig parse_config_file(const std::string& path);

/** Same, from the file's text (exposed for tests). */
ExperimentConfig parse_config_text(const std::string& text);

/** Apply VRING_OUTPUT_DIR over config.output_dir when the variable is set. */
void apply_env_overrides(ExperimentConfig& config);

/** Per-case summary returned by run_case and aggregated by sweep_and_fit. */
struct CaseResult {
    double eps = 0.0;
    double delta_T = 0.0;        // max_i |B_i(T) - z_i(T)|
    double max_support = 0.0;    // max over time and blobs of R_t
    double r_m = 0.0;            // min pairwise PV-reference separation over [0, T]
    bool containment = true;     // every blob's support radius stayed below R_m/4
    double first_violation_t = -1.0;
};

/** Observer invoked after every accepted step (the initial state included). */
using StepObserver =
    std::function<void(int step, double t, const std::vector<ParticleBlob>& blobs,
                       const PointVortexState& reference)>;

/**
 * Run the ring simulation and its point-vortex reference side by side from the
 * configured centers/intensities, writing diag_<eps>.csv (one row per blob per
 * step) and checkpoint_<eps>.csv into the output directory. The mollifier
 * sandwich is self-checked at every diagnostic step; a violation raises
 * AcceptanceViolation. eps must be one of config.eps_list.
 */
CaseResult run_case(const ExperimentConfig& config, double eps,
                    const StepObserver& observer = {});

/** One fitted slope of log(value) against log|log eps|. */
struct RateFit {
    double exponent = 0.0;
    double prediction = 0.0;
    double residual_rms = 0.0;
    bool pre_asymptotic = false; // residual_rms > 0.2
    double c_fit = 0.0;          // exp(mean(log value + |prediction| log|log eps|))
};

/** Sweep outcome: per-eps rows plus the rate fits against the scaling predictions. */
struct ConvergenceReport {
    std::string scenario;
    double alpha = 0.0;
    double k = 0.0;
    std::vector<CaseResult> rows; // aligned with eps_list
    RateFit delta_fit;            // prediction -(alpha-1)
    RateFit support_fit;          // prediction -k
    double epsilon0 = 0.0;
    bool epsilon0_regime_warning = false;
};

/**
 * run_case for every eps in the list (concurrently up to config.workers), then
 * fit the log-log rates. Throws AcceptanceViolation if delta_T or max_support
 * fails to decrease strictly along the (descending) eps list. Writes
 * report.json next to the per-case CSVs.
 */
ConvergenceReport sweep_and_fit(const ExperimentConfig& config);

/** Monotonicity self-check used by sweep_and_fit; throws AcceptanceViolation. */
void verify_report(const ConvergenceReport& report);

/**
 * Solve c_fit |log eps0|^{-k} = r_m/4 for eps0, i.e. exp(-(4 c_fit/r_m)^{1/k}).
 * Sets *regime_warning (when given) if 4 c_fit <= r_m, where eps0 >= 1/e.
 * Throws DomainError on nonpositive inputs.
 */
double solve_epsilon0(double c_fit, double r_m, double k, bool* regime_warning = nullptr);

/** Serialize the report to JSON (the report.json payload). */
std::string report_to_json(const ConvergenceReport& report, const ExperimentConfig& config);

/** Simple OLS fit y = slope*x + intercept with RMS residual (exposed for tests). */
struct LineFit {
    double slope, intercept, residual_rms;
};
LineFit ols_fit(const std::vector<double>& xs, const std::vector<double>& ys);

/** Write / read the particle checkpoint CSV (columns blob,particle,x1,x2,w). */
void write_checkpoint(const std::string& path, const std::vector<ParticleBlob>& blobs);
std::vector<ParticleBlob> read_checkpoint(const std::string& path);

} // namespace vring
