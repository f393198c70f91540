#include "vring/point_vortex.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vring/errors.hpp"
#include "vring/kernel.hpp"

namespace vring {
namespace {

struct ClosestPair {
    double dist;
    int first, second;
};

ClosestPair closest_pair(const PointVortexState& state) {
    ClosestPair cp{std::numeric_limits<double>::infinity(), -1, -1};
    const int n = state.size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = (state.positions[i] - state.positions[j]).norm();
            if (d < cp.dist) {
                cp.dist = d;
                cp.first = i;
                cp.second = j;
            }
        }
    return cp;
}

void check_collapse(const PointVortexState& state, double threshold) {
    const ClosestPair cp = closest_pair(state);
    if (cp.dist < threshold)
        throw CollapseError(state.time, cp.first, cp.second,
                            "separation " + std::to_string(cp.dist) + " below threshold " +
                                std::to_string(threshold));
}

} // namespace

double min_separation(const PointVortexState& state) {
    return closest_pair(state).dist;
}

std::vector<PlanarVec> pv_rhs(const PointVortexState& state, bool drift) {
    const int n = state.size();
    std::vector<PlanarVec> vel(n, PlanarVec{0.0, 0.0});
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const PlanarVec d = state.positions[i] - state.positions[j];
            if (d.norm2() == 0.0)
                throw CollapseError(state.time, std::min(i, j), std::max(i, j),
                                    "coincident point vortices");
            vel[i] += state.intensities[j] * eval_K(d);
        }
        if (drift) vel[i].x1 += state.intensities[i];
    }
    return vel;
}

PvInvariants pv_invariants(const PointVortexState& state) {
    PvInvariants inv{0.0, {0.0, 0.0}, 0.0};
    const int n = state.size();
    for (int i = 0; i < n; ++i) {
        const double ai = state.intensities[i];
        inv.linear_impulse += ai * state.positions[i];
        inv.angular_impulse += ai * state.positions[i].norm2();
        for (int j = i + 1; j < n; ++j) {
            const PlanarVec d = state.positions[i] - state.positions[j];
            if (d.norm2() == 0.0)
                throw CollapseError(state.time, i, j, "coincident point vortices");
            inv.hamiltonian -= kInv2Pi * ai * state.intensities[j] * std::log(d.norm());
        }
    }
    return inv;
}

std::vector<double> step_schedule(double horizon, double dt) {
    if (!(horizon > 0.0) || !(dt > 0.0))
        throw ConfigError("horizon and dt must be positive");
    std::vector<double> steps;
    const long long whole = static_cast<long long>(std::floor(horizon / dt));
    double covered = static_cast<double>(whole) * dt;
    // Guard against horizon/dt landing a hair above an integer.
    long long n = whole;
    if (covered > horizon) {
        --n;
        covered = static_cast<double>(n) * dt;
    }
    steps.assign(static_cast<size_t>(n), dt);
    const double rest = horizon - covered;
    if (rest > 1e-12 * dt) steps.push_back(rest);
    return steps;
}

std::vector<PointVortexState> pv_integrate(const PointVortexState& initial, double horizon,
                                           double dt, double collapse_threshold, bool drift) {
    if (initial.size() == 0) throw ConfigError("point vortex state is empty");
    if (initial.positions.size() != initial.intensities.size())
        throw ConfigError("positions and intensities differ in length");

    double threshold = collapse_threshold;
    if (threshold <= 0.0) {
        const double d0 = min_separation(initial);
        threshold = std::isfinite(d0) ? 1e-6 * d0 : 0.0;
    }
    check_collapse(initial, threshold);

    std::vector<PointVortexState> traj;
    const std::vector<double> steps = step_schedule(horizon, dt);
    traj.reserve(steps.size() + 1);
    traj.push_back(initial);

    PointVortexState cur = initial;
    const int n = cur.size();
    for (size_t k = 0; k < steps.size(); ++k) {
        const double h = steps[k];
        const std::vector<PlanarVec> k1 = pv_rhs(cur, drift);
        PointVortexState stage = cur;
        for (int i = 0; i < n; ++i) stage.positions[i] = cur.positions[i] + (0.5 * h) * k1[i];
        const std::vector<PlanarVec> k2 = pv_rhs(stage, drift);
        for (int i = 0; i < n; ++i) stage.positions[i] = cur.positions[i] + (0.5 * h) * k2[i];
        const std::vector<PlanarVec> k3 = pv_rhs(stage, drift);
        for (int i = 0; i < n; ++i) stage.positions[i] = cur.positions[i] + h * k3[i];
        stage.time = cur.time + h;
        const std::vector<PlanarVec> k4 = pv_rhs(stage, drift);
        for (int i = 0; i < n; ++i)
            cur.positions[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        cur.time = (k + 1 == steps.size()) ? initial.time + horizon
                                           : initial.time + static_cast<double>(k + 1) * dt;
        check_collapse(cur, threshold);
        traj.push_back(cur);
    }
    return traj;
}

} // namespace vring
