#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vring/errors.hpp"
#include "vring/harness.hpp"
#include "vring/kernel.hpp"
#include "vring/special.hpp"

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void run_simulate(const std::string& config_path, double eps) {
    vring::ExperimentConfig config = vring::parse_config_file(config_path);
    vring::apply_env_overrides(config);
    const vring::CaseResult r = vring::run_case(config, eps);
    std::printf("eps=%g delta_T=%.6g max_support=%.6g r_m=%.6g containment=%s\n", r.eps, r.delta_T,
                r.max_support, r.r_m, r.containment ? "yes" : "no");
    if (!r.containment) std::printf("first containment violation at t=%.6g\n", r.first_violation_t);
}

void run_sweep(const std::string& config_path) {
    vring::ExperimentConfig config = vring::parse_config_file(config_path);
    vring::apply_env_overrides(config);
    const vring::ConvergenceReport rep = vring::sweep_and_fit(config);
    for (const vring::CaseResult& r : rep.rows)
        std::printf("eps=%g delta_T=%.6g max_support=%.6g containment=%s\n", r.eps, r.delta_T,
                    r.max_support, r.containment ? "yes" : "no");
    std::printf("delta exponent %.4f (prediction %.4f, residual %.4f%s)\n", rep.delta_fit.exponent,
                rep.delta_fit.prediction, rep.delta_fit.residual_rms,
                rep.delta_fit.pre_asymptotic ? ", pre-asymptotic" : "");
    std::printf("support exponent %.4f (prediction %.4f, residual %.4f%s)\n",
                rep.support_fit.exponent, rep.support_fit.prediction,
                rep.support_fit.residual_rms,
                rep.support_fit.pre_asymptotic ? ", pre-asymptotic" : "");
    std::printf("epsilon0=%.6g%s\n", rep.epsilon0,
                rep.epsilon0_regime_warning ? " (regime warning: 4 c_fit <= r_m)" : "");
}

void run_pv(const std::string& config_path) {
    vring::ExperimentConfig config = vring::parse_config_file(config_path);
    vring::apply_env_overrides(config);
    const vring::PointVortexState initial{config.centers, config.intensities, 0.0};
    const std::vector<vring::PointVortexState> traj = vring::pv_integrate(
        initial, config.horizon, config.dt, config.collapse_threshold, config.drift);

    std::filesystem::create_directories(config.output_dir);
    const std::string traj_path = config.output_dir + "/pv_traj.csv";
    std::ofstream tout(traj_path);
    if (!tout) throw vring::ConfigError("cannot open '" + traj_path + "' for writing");
    tout << "t,i,z1,z2\n";
    for (const vring::PointVortexState& s : traj)
        for (int i = 0; i < s.size(); ++i)
            tout << fmt(s.time) << ',' << i << ',' << fmt(s.positions[i].x1) << ','
                 << fmt(s.positions[i].x2) << '\n';

    const std::string inv_path = config.output_dir + "/pv_invariants.csv";
    std::ofstream iout(inv_path);
    if (!iout) throw vring::ConfigError("cannot open '" + inv_path + "' for writing");
    iout << "t,H,P1,P2,A\n";
    for (const vring::PointVortexState& s : traj) {
        const vring::PvInvariants inv = vring::pv_invariants(s);
        iout << fmt(s.time) << ',' << fmt(inv.hamiltonian) << ',' << fmt(inv.linear_impulse.x1)
             << ',' << fmt(inv.linear_impulse.x2) << ',' << fmt(inv.angular_impulse) << '\n';
    }
    std::printf("wrote %s and %s (%zu states)\n", traj_path.c_str(), inv_path.c_str(),
                traj.size());
}

void run_kernel_test(double a_min, double a_max, int points, const std::string& out_path) {
    if (!(a_min > 0.0)) throw vring::ConfigError("--a-min must be positive");
    if (!(a_max >= a_min)) throw vring::ConfigError("--a-max must be >= --a-min");
    if (points < 1) throw vring::ConfigError("--points must be >= 1");

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw vring::ConfigError("cannot open '" + out_path + "' for writing");
        out = &file;
    }
    *out << "a,i1,i2,r1,r2,err_est\n";
    const double lr = points > 1 ? std::log(a_max / a_min) / (points - 1) : 0.0;
    for (int i = 0; i < points; ++i) {
        const double a = a_min * std::exp(lr * i);
        const vring::SpecialPair p = vring::eval_special(a);
        *out << fmt(a) << ',' << fmt(p.i1) << ',' << fmt(p.i2) << ',' << fmt(p.r1) << ','
             << fmt(p.r2) << ',' << fmt(p.err_est) << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"axisymmetric vortex-ring convergence experiments"};
    app.require_subcommand(1);

    std::string sim_config;
    double sim_eps = 0.0;
    CLI::App* sim = app.add_subcommand("simulate", "run one case at a fixed eps");
    sim->add_option("--config", sim_config, "experiment config file")->required();
    sim->add_option("--eps", sim_eps, "eps value (must appear in eps_list)")->required();

    std::string sweep_config;
    CLI::App* sweep = app.add_subcommand("sweep", "run the full eps sweep and fit rates");
    sweep->add_option("--config", sweep_config, "experiment config file")->required();

    std::string pv_config;
    CLI::App* pv = app.add_subcommand("pv-run", "integrate the point-vortex reference only");
    pv->add_option("--config", pv_config, "experiment config file")->required();

    double a_min = 0.0, a_max = 0.0;
    int points = 0;
    std::string kt_out;
    CLI::App* kt = app.add_subcommand("kernel-test", "dump the special-function table as CSV");
    kt->add_option("--a-min", a_min, "smallest reduced argument")->required();
    kt->add_option("--a-max", a_max, "largest reduced argument")->required();
    kt->add_option("--points", points, "number of log-spaced samples")->required();
    kt->add_option("--out", kt_out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) run_simulate(sim_config, sim_eps);
        if (sweep->parsed()) run_sweep(sweep_config);
        if (pv->parsed()) run_pv(pv_config);
        if (kt->parsed()) run_kernel_test(a_min, a_max, points, kt_out);
        return 0;
    } catch (const vring::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const vring::AcceptanceViolation& e) {
        std::fprintf(stderr, "acceptance violation: %s\n", e.what());
        return 4;
    } catch (const vring::NumericError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
