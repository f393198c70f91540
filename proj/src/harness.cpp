#include "vring/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

#include "vring/errors.hpp"

namespace vring {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    const std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse '" + s + "' as a number for " + what);
    }
}

int to_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw ConfigError("");
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse '" + s + "' as an integer for " + what);
    }
}

bool to_bool(const std::string& s, const std::string& what) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("cannot parse '" + s + "' as a boolean for " + what);
}

std::vector<std::string> split_any(const std::string& s, const std::string& delims) {
    std::vector<std::string> out;
    std::size_t b = 0;
    while (b < s.size()) {
        const std::size_t e = s.find_first_of(delims, b);
        if (e == std::string::npos) {
            out.push_back(s.substr(b));
            break;
        }
        if (e > b) out.push_back(s.substr(b, e - b));
        b = e + 1;
    }
    return out;
}

std::vector<double> parse_numbers(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const std::string& tok : split_any(s, " \t,")) out.push_back(to_double(tok, what));
    if (out.empty()) throw ConfigError(what + " is empty");
    return out;
}

std::vector<PlanarVec> parse_centers(const std::string& s) {
    std::vector<PlanarVec> out;
    for (const std::string& chunk : split_any(s, ";")) {
        const std::string t = trim(chunk);
        if (t.empty()) continue;
        const std::vector<double> pair = parse_numbers(t, "centers");
        if (pair.size() != 2)
            throw ConfigError("center '" + t + "' must have exactly two coordinates");
        out.push_back({pair[0], pair[1]});
    }
    if (out.empty()) throw ConfigError("centers is empty");
    return out;
}

DeltaPolicy parse_delta_policy(const std::string& s) {
    const std::vector<std::string> tok = split_any(s, " \t");
    DeltaPolicy p;
    if (tok.size() == 1 && tok[0] == "half-spacing") {
        p.kind = DeltaPolicy::HalfSpacing;
    } else if (tok.size() == 1 && tok[0] == "zero") {
        p.kind = DeltaPolicy::Zero;
    } else if (tok.size() == 2 && tok[0] == "fixed") {
        p.kind = DeltaPolicy::Fixed;
        p.value = to_double(tok[1], "delta_policy");
        if (!(p.value >= 0.0)) throw ConfigError("fixed delta must be nonnegative");
    } else {
        throw ConfigError("delta_policy must be 'half-spacing', 'zero', or 'fixed <value>'");
    }
    return p;
}

void validate(const ExperimentConfig& c) {
    if (c.scenario.empty()) throw ConfigError("scenario must be set");
    if (c.centers.empty()) throw ConfigError("centers must be set");
    if (c.centers.size() != c.intensities.size())
        throw ConfigError("centers and intensities differ in length");
    for (std::size_t i = 0; i < c.intensities.size(); ++i)
        if (c.intensities[i] == 0.0)
            throw ConfigError("intensity " + std::to_string(i) + " is zero");
    for (std::size_t i = 0; i < c.centers.size(); ++i)
        for (std::size_t j = i + 1; j < c.centers.size(); ++j)
            if (!((c.centers[i] - c.centers[j]).norm() > 0.0))
                throw ConfigError("centers " + std::to_string(i) + " and " + std::to_string(j) +
                                  " coincide");
    if (c.eps_list.empty()) throw ConfigError("eps_list must be set");
    for (double e : c.eps_list)
        if (!(e > 0.0) || !(e < 1.0)) throw ConfigError("every eps must lie in (0, 1)");
    for (std::size_t i = 0; i + 1 < c.eps_list.size(); ++i)
        if (!(c.eps_list[i + 1] < c.eps_list[i]))
            throw ConfigError("eps_list must be strictly descending");
    if (c.exploratory ? !(c.alpha > 0.0) : !(c.alpha > 2.0))
        throw ConfigError(c.exploratory ? "alpha must be positive"
                                        : "alpha must exceed 2 unless exploratory = true");
    if (!(c.horizon > 0.0)) throw ConfigError("horizon must be positive");
    if (!(c.dt > 0.0)) throw ConfigError("dt must be positive");
    if (c.particles_per_blob < 1) throw ConfigError("particles_per_blob must be >= 1");
    if (c.workers < 1) throw ConfigError("workers must be >= 1");
    if (!(c.collapse_threshold >= 0.0)) throw ConfigError("collapse_threshold must be >= 0");
    if (!(c.gamma >= 2.0)) throw ConfigError("gamma must be >= 2");
    if (!(c.m_bound >= 0.0)) throw ConfigError("m_bound must be >= 0");
    if (!(c.quad_tol > 0.0)) throw ConfigError("quad_tol must be positive");
}

std::string eps_tag(double eps) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", eps);
    return buf;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RateFit make_rate_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                      double prediction) {
    const LineFit l = ols_fit(xs, ys);
    RateFit f;
    f.exponent = l.slope;
    f.prediction = prediction;
    f.residual_rms = l.residual_rms;
    f.pre_asymptotic = l.residual_rms > 0.2;
    double m = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) m += ys[i] + std::abs(prediction) * xs[i];
    f.c_fit = std::exp(m / static_cast<double>(xs.size()));
    return f;
}

ordered_json fit_to_json(const RateFit& f) {
    ordered_json j;
    j["exponent"] = f.exponent;
    j["prediction"] = f.prediction;
    j["residual_rms"] = f.residual_rms;
    j["pre_asymptotic"] = f.pre_asymptotic;
    j["c_fit"] = f.c_fit;
    return j;
}

} // namespace

double DeltaPolicy::resolve(double eps, int particles_per_blob) const {
    switch (kind) {
    case HalfSpacing: {
        const int n = std::max(
            1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(particles_per_blob)))));
        return 0.5 * eps / n;
    }
    case Fixed:
        return value;
    case Zero:
        return 0.0;
    }
    return 0.0;
}

std::string DeltaPolicy::describe() const {
    switch (kind) {
    case HalfSpacing:
        return "half-spacing";
    case Fixed:
        return "fixed " + fmt(value);
    case Zero:
        return "zero";
    }
    return "";
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig c;
    std::set<std::string> seen;
    bool has_scenario = false, has_centers = false, has_intensities = false, has_eps = false;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");

        if (key == "scenario") {
            c.scenario = val;
            has_scenario = true;
        } else if (key == "centers") {
            c.centers = parse_centers(val);
            has_centers = true;
        } else if (key == "intensities") {
            c.intensities = parse_numbers(val, "intensities");
            has_intensities = true;
        } else if (key == "eps_list") {
            c.eps_list = parse_numbers(val, "eps_list");
            has_eps = true;
        } else if (key == "alpha") {
            c.alpha = to_double(val, key);
        } else if (key == "horizon") {
            c.horizon = to_double(val, key);
        } else if (key == "dt") {
            c.dt = to_double(val, key);
        } else if (key == "particles_per_blob") {
            c.particles_per_blob = to_int(val, key);
        } else if (key == "delta_policy") {
            c.delta_policy = parse_delta_policy(val);
        } else if (key == "output_dir") {
            c.output_dir = val;
        } else if (key == "workers") {
            c.workers = to_int(val, key);
        } else if (key == "exploratory") {
            c.exploratory = to_bool(val, key);
        } else if (key == "drift") {
            c.drift = to_bool(val, key);
        } else if (key == "collapse_threshold") {
            c.collapse_threshold = to_double(val, key);
        } else if (key == "gamma") {
            c.gamma = to_double(val, key);
        } else if (key == "m_bound") {
            c.m_bound = to_double(val, key);
        } else if (key == "quad_tol") {
            c.quad_tol = to_double(val, key);
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    if (!has_scenario) throw ConfigError("missing key 'scenario'");
    if (!has_centers) throw ConfigError("missing key 'centers'");
    if (!has_intensities) throw ConfigError("missing key 'intensities'");
    if (!has_eps) throw ConfigError("missing key 'eps_list'");
    validate(c);
    return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void apply_env_overrides(ExperimentConfig& config) {
    const char* dir = std::getenv("VRING_OUTPUT_DIR");
    if (dir && *dir) config.output_dir = dir;
}

void write_checkpoint(const std::string& path, const std::vector<ParticleBlob>& blobs) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << "blob,particle,x1,x2,w\n";
    for (const ParticleBlob& b : blobs)
        for (std::size_t p = 0; p < b.positions.size(); ++p)
            out << b.blob_index << ',' << p << ',' << fmt(b.positions[p].x1) << ','
                << fmt(b.positions[p].x2) << ',' << fmt(b.weights[p]) << '\n';
}

std::vector<ParticleBlob> read_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open checkpoint '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || trim(line) != "blob,particle,x1,x2,w")
        throw ConfigError("checkpoint '" + path + "' has an unexpected header");
    std::vector<ParticleBlob> blobs;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::vector<std::string> f = split_any(t, ",");
        if (f.size() != 5) throw ConfigError("checkpoint row '" + t + "' must have 5 fields");
        const int bi = to_int(f[0], "blob index");
        if (blobs.empty() || blobs.back().blob_index != bi) {
            ParticleBlob b;
            b.blob_index = bi;
            blobs.push_back(std::move(b));
        }
        blobs.back().positions.push_back(
            {to_double(f[2], "x1"), to_double(f[3], "x2")});
        blobs.back().weights.push_back(to_double(f[4], "w"));
    }
    for (ParticleBlob& b : blobs) {
        b.intensity = 0.0;
        for (double w : b.weights) b.intensity += w;
        b.sign = b.intensity > 0.0 ? +1 : -1;
    }
    return blobs;
}

CaseResult run_case(const ExperimentConfig& config, double eps, const StepObserver& observer) {
    bool listed = false;
    for (double e : config.eps_list) listed = listed || e == eps;
    if (!listed)
        throw ConfigError("eps " + eps_tag(eps) + " is not in the configured eps_list");

    SimParams params = make_sim_params(eps, config.alpha, config.exploratory);
    params.dt = config.dt;
    params.horizon = config.horizon;
    params.particles_per_blob = config.particles_per_blob;
    params.gamma = config.gamma;
    params.m_bound = config.m_bound;
    params.quad_tol = config.quad_tol;
    params.delta = config.delta_policy.resolve(eps, config.particles_per_blob);

    const PointVortexState ref0{config.centers, config.intensities, 0.0};
    const std::vector<PointVortexState> ref =
        pv_integrate(ref0, config.horizon, config.dt, config.collapse_threshold);
    double r_m = std::numeric_limits<double>::infinity();
    for (const PointVortexState& s : ref) r_m = std::min(r_m, min_separation(s));

    std::vector<ParticleBlob> blobs = init_blobs(params, config.centers, config.intensities);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    BoundReport bounds{};
    if (config.alpha > 2.0) {
        bounds = bound_report(params, 1.0, r_m);
    } else {
        bounds.support_bound = bounds.delta_bound = bounds.inertia_bound = nan;
    }

    std::filesystem::create_directories(config.output_dir);
    const std::string tag = eps_tag(eps);
    const std::string diag_path = config.output_dir + "/diag_" + tag + ".csv";
    std::ofstream diag(diag_path);
    if (!diag) throw ConfigError("cannot open '" + diag_path + "' for writing");
    diag << "t,i,B1,B2,I,Rt,m_half_Rt,mu,delta,support_bound,delta_bound,inertia_bound\n";

    CaseResult res;
    res.eps = eps;
    res.r_m = r_m;

    const std::vector<double> schedule = step_schedule(config.horizon, config.dt);
    const int last_step = static_cast<int>(schedule.size());

    auto record = [&](int step) {
        const double t = ref[static_cast<std::size_t>(step)].time;
        for (std::size_t i = 0; i < blobs.size(); ++i) {
            const BlobMoments mom = blob_moments(blobs[i]);
            const double rt = mom.support_radius;
            const double m_half = mass_tail(blobs[i], 0.5 * rt);
            double mu = 0.0;
            if (rt > 0.0) {
                const double h = 0.125 * rt;
                mu = mollified_mass(blobs[i], {0.5 * rt, h});
                const double upper = mollified_mass(blobs[i], {0.5 * rt - h, h});
                if (!(mu <= m_half && m_half <= upper))
                    throw AcceptanceViolation("mollified-mass sandwich violated at t=" + fmt(t) +
                                              ", blob " + std::to_string(i) + ", eps " + tag);
            }
            const double dev = (mom.center - ref[static_cast<std::size_t>(step)].positions[i]).norm();
            diag << fmt(t) << ',' << i << ',' << fmt(mom.center.x1) << ',' << fmt(mom.center.x2)
                 << ',' << fmt(mom.inertia) << ',' << fmt(rt) << ',' << fmt(m_half) << ','
                 << fmt(mu) << ',' << fmt(dev) << ',' << fmt(bounds.support_bound) << ','
                 << fmt(bounds.delta_bound) << ',' << fmt(bounds.inertia_bound) << '\n';
            res.max_support = std::max(res.max_support, rt);
            if (step == last_step) res.delta_T = std::max(res.delta_T, dev);
            if (rt > 0.25 * r_m && res.containment) {
                res.containment = false;
                res.first_violation_t = t;
            }
        }
        if (observer) observer(step, t, blobs, ref[static_cast<std::size_t>(step)]);
    };

    record(0);
    for (std::size_t s = 0; s < schedule.size(); ++s) {
        SimParams step_params = params;
        step_params.dt = schedule[s];
        advance(blobs, step_params);
        record(static_cast<int>(s) + 1);
    }

    write_checkpoint(config.output_dir + "/checkpoint_" + tag + ".csv", blobs);
    return res;
}

void verify_report(const ConvergenceReport& report) {
    for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
        const CaseResult& a = report.rows[i];
        const CaseResult& b = report.rows[i + 1];
        if (!(b.delta_T < a.delta_T))
            throw AcceptanceViolation("delta(T) fails to decrease strictly from eps " +
                                      eps_tag(a.eps) + " (" + fmt(a.delta_T) + ") to eps " +
                                      eps_tag(b.eps) + " (" + fmt(b.delta_T) + ")");
        if (!(b.max_support < a.max_support))
            throw AcceptanceViolation("max support radius fails to decrease strictly from eps " +
                                      eps_tag(a.eps) + " (" + fmt(a.max_support) + ") to eps " +
                                      eps_tag(b.eps) + " (" + fmt(b.max_support) + ")");
    }
}

double solve_epsilon0(double c_fit, double r_m, double k, bool* regime_warning) {
    if (!(c_fit > 0.0) || !(r_m > 0.0) || !(k > 0.0))
        throw DomainError("solve_epsilon0 requires positive c_fit, r_m, k");
    if (regime_warning) *regime_warning = 4.0 * c_fit <= r_m;
    return std::exp(-std::pow(4.0 * c_fit / r_m, 1.0 / k));
}

LineFit ols_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw ConfigError("fit needs at least two matching points");
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw ConfigError("fit abscissae are all identical");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (f.slope * xs[i] + f.intercept);
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / n);
    return f;
}

ConvergenceReport sweep_and_fit(const ExperimentConfig& config) {
    if (config.eps_list.size() < 3)
        throw ConfigError("sweep needs at least 3 eps values for a rate fit");
    if (!(config.eps_list.front() / config.eps_list.back() >= 100.0))
        throw ConfigError("sweep eps values must span at least two decades");

    std::vector<CaseResult> rows(config.eps_list.size());
    const int workers = config.workers;
    if (workers <= 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = run_case(config, config.eps_list[i]);
    } else {
        std::size_t next = 0;
        while (next < rows.size()) {
            const std::size_t batch =
                std::min<std::size_t>(static_cast<std::size_t>(workers), rows.size() - next);
            std::vector<std::future<CaseResult>> futs;
            futs.reserve(batch);
            for (std::size_t j = 0; j < batch; ++j) {
                const double e = config.eps_list[next + j];
                futs.push_back(
                    std::async(std::launch::async, [&config, e] { return run_case(config, e); }));
            }
            for (std::size_t j = 0; j < batch; ++j) rows[next + j] = futs[j].get();
            next += batch;
        }
    }

    ConvergenceReport rep;
    rep.scenario = config.scenario;
    rep.alpha = config.alpha;
    rep.k = 0.5 * (config.alpha - 2.0);
    rep.rows = rows;
    verify_report(rep);

    std::vector<double> xs, yd, ys;
    double r_m = std::numeric_limits<double>::infinity();
    for (const CaseResult& r : rows) {
        if (!(r.delta_T > 0.0) || !(r.max_support > 0.0))
            throw ConfigError("cannot fit a rate to a nonpositive measurement");
        xs.push_back(std::log(std::abs(std::log(r.eps))));
        yd.push_back(std::log(r.delta_T));
        ys.push_back(std::log(r.max_support));
        r_m = std::min(r_m, r.r_m);
    }
    rep.delta_fit = make_rate_fit(xs, yd, -(config.alpha - 1.0));
    rep.support_fit = make_rate_fit(xs, ys, -rep.k);
    if (rep.k > 0.0 && std::isfinite(r_m)) {
        rep.epsilon0 = solve_epsilon0(rep.support_fit.c_fit, r_m, rep.k,
                                      &rep.epsilon0_regime_warning);
    } else {
        rep.epsilon0 = std::numeric_limits<double>::quiet_NaN();
        rep.epsilon0_regime_warning = false;
    }

    std::filesystem::create_directories(config.output_dir);
    const std::string path = config.output_dir + "/report.json";
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << report_to_json(rep, config) << '\n';
    return rep;
}

std::string report_to_json(const ConvergenceReport& report, const ExperimentConfig& config) {
    ordered_json j;
    j["scenario"] = report.scenario;
    j["alpha"] = report.alpha;
    j["k"] = report.k;
    ordered_json rows = ordered_json::array();
    for (const CaseResult& r : report.rows) {
        ordered_json row;
        row["eps"] = r.eps;
        row["delta_T"] = r.delta_T;
        row["max_support"] = r.max_support;
        row["r_m"] = r.r_m;
        row["containment"] = r.containment;
        row["first_violation_t"] = r.first_violation_t;
        rows.push_back(row);
    }
    j["rows"] = rows;
    j["delta_fit"] = fit_to_json(report.delta_fit);
    j["support_fit"] = fit_to_json(report.support_fit);
    j["epsilon0"] = report.epsilon0;
    j["epsilon0_regime_warning"] = report.epsilon0_regime_warning;
    ordered_json cfg;
    cfg["horizon"] = config.horizon;
    cfg["dt"] = config.dt;
    cfg["particles_per_blob"] = config.particles_per_blob;
    cfg["delta_policy"] = config.delta_policy.describe();
    cfg["eps_list"] = config.eps_list;
    cfg["workers"] = config.workers;
    cfg["exploratory"] = config.exploratory;
    j["config"] = cfg;
    return j.dump(2);
}

} // namespace vring
