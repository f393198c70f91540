#include "vring/ring_sim.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vring/errors.hpp"
#include "vring/kernel.hpp"
#include "vring/special.hpp"

namespace vring {
namespace {

double resolved_r0(const SimParams& p) {
    return p.r0 > 0.0 ? p.r0 : std::pow(std::abs(std::log(p.eps)), p.alpha);
}

// Blob-major flattened particle state, the hot-loop layout.
struct Flat {
    std::vector<double> x1, x2, w, rho, inv_srho;

    std::size_t size() const { return x1.size(); }
};

Flat gather(const std::vector<ParticleBlob>& blobs) {
    Flat f;
    std::size_t total = 0;
    for (const ParticleBlob& b : blobs) total += b.positions.size();
    f.x1.reserve(total);
    f.x2.reserve(total);
    f.w.reserve(total);
    for (const ParticleBlob& b : blobs)
        for (std::size_t p = 0; p < b.positions.size(); ++p) {
            f.x1.push_back(b.positions[p].x1);
            f.x2.push_back(b.positions[p].x2);
            f.w.push_back(b.weights[p]);
        }
    f.rho.resize(total);
    f.inv_srho.resize(total);
    return f;
}

// Recompute rho = r0 + x2 for every particle. This serial scan is the only
// place invalid geometry throws, so the parallel loops stay exception-free.
void refresh_radii(Flat& f, double r0) {
    for (std::size_t q = 0; q < f.size(); ++q) {
        const double rho = r0 + f.x2[q];
        if (!(rho > 0.0))
            throw AxisCollisionError("particle " + std::to_string(q) +
                                     " reached the axis: r0 + x2 = " + std::to_string(rho));
        f.rho[q] = rho;
        f.inv_srho[q] = 1.0 / std::sqrt(rho);
    }
}

// Velocity induced at one target by every source particle, accumulated in
// the fixed global source order. Shared by the serial and parallel paths so
// their results are bitwise identical.
PlanarVec eval_one(const Flat& f, double tx1, double tx2, double t_rho, double delta_sq) {
    const double ct = kInv2Pi / (t_rho * std::sqrt(t_rho));
    double v1 = 0.0, v2 = 0.0;
    const std::size_t n = f.size();
    for (std::size_t q = 0; q < n; ++q) {
        const double dx1 = tx1 - f.x1[q];
        const double dx2 = tx2 - f.x2[q];
        const double d_sq = dx1 * dx1 + dx2 * dx2 + delta_sq;
        if (d_sq == 0.0) continue;
        double i1, i2;
        special_i(d_sq / (t_rho * f.rho[q]), i1, i2);
        const double s = f.w[q] * ct * f.inv_srho[q];
        v1 += s * (f.rho[q] * i2 - dx2 * i1);
        v2 += s * (dx1 * i1);
    }
    return {v1, v2};
}

std::vector<PlanarVec> flat_velocities(const Flat& f, double delta_sq, bool parallel) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
    std::vector<PlanarVec> vel(f.size());
    if (parallel) {
        bool failed = false;
        std::string why;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t t = 0; t < n; ++t) {
            try {
                vel[static_cast<std::size_t>(t)] =
                    eval_one(f, f.x1[t], f.x2[t], f.rho[t], delta_sq);
            } catch (const std::exception& e) {
#pragma omp critical
                {
                    failed = true;
                    why = e.what();
                }
            }
        }
        if (failed) throw AccuracyError(why);
        return vel;
    }
    for (std::ptrdiff_t t = 0; t < n; ++t)
        vel[static_cast<std::size_t>(t)] = eval_one(f, f.x1[t], f.x2[t], f.rho[t], delta_sq);
    return vel;
}

} // namespace

SimParams make_sim_params(double eps, double alpha, bool exploratory) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
    if (exploratory ? !(alpha > 0.0) : !(alpha > 2.0))
        throw ConfigError(exploratory ? "alpha must be positive"
                                      : "alpha must exceed 2 (use exploratory mode below that)");
    SimParams p;
    p.eps = eps;
    p.alpha = alpha;
    p.r0 = std::pow(std::abs(std::log(eps)), alpha);
    return p;
}

std::vector<ParticleBlob> init_blobs(const SimParams& params,
                                     const std::vector<PlanarVec>& centers,
                                     const std::vector<double>& intensities) {
    if (centers.empty()) throw ConfigError("no blob centers given");
    if (centers.size() != intensities.size())
        throw ConfigError("centers and intensities differ in length");
    if (!(params.eps > 0.0) || !(params.eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
    if (!(params.gamma >= 2.0)) throw ConfigError("gamma must be >= 2");
    if (params.particles_per_blob < 1) throw ConfigError("particles_per_blob must be >= 1");
    const double eps = params.eps;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (intensities[i] == 0.0)
            throw ConfigError("blob " + std::to_string(i) + " has zero intensity");
        for (std::size_t j = i + 1; j < centers.size(); ++j)
            if (!((centers[i] - centers[j]).norm() > 2.0 * eps))
                throw ConfigError("blobs " + std::to_string(i) + " and " + std::to_string(j) +
                                  " overlap: center separation must exceed 2 eps");
        const double peak = std::abs(intensities[i]) / (kPi * eps * eps);
        const double m =
            params.m_bound > 0.0 ? params.m_bound : std::abs(intensities[i]) / kPi * 1.01;
        if (peak > m * std::pow(eps, -params.gamma))
            throw ConfigError("blob " + std::to_string(i) + " peak vorticity " +
                              std::to_string(peak) + " exceeds M eps^-gamma");
    }

    const int n = std::max(
        1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(params.particles_per_blob)))));
    const int total = n * n;
    const double h = eps / n;
    const double r0 = resolved_r0(params);

    std::vector<ParticleBlob> blobs;
    blobs.reserve(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        ParticleBlob b;
        b.blob_index = static_cast<int>(i);
        b.sign = intensities[i] > 0.0 ? +1 : -1;
        b.positions.reserve(total);
        for (int j = 0; j < n; ++j) {
            const int mj = 2 * j + 1;
            const double rj = j == 0 ? 0.0 : (j + 0.5) * h;
            const double off = std::fmod(j * 0.381966, 1.0); // stagger rings against each other
            for (int m = 0; m < mj; ++m) {
                const double th = 2.0 * kPi * (m + off) / mj;
                b.positions.push_back(
                    {centers[i].x1 + rj * std::cos(th), centers[i].x2 + rj * std::sin(th)});
            }
        }
        b.weights.assign(total, intensities[i] / total);
        double partial = 0.0;
        for (int p = 0; p + 1 < total; ++p) partial += b.weights[p];
        b.weights.back() = intensities[i] - partial;
        b.intensity = 0.0;
        for (double wp : b.weights) b.intensity += wp;
        for (const PlanarVec& x : b.positions)
            if (!(r0 + x.x2 > 0.0))
                throw ConfigError("blob " + std::to_string(i) + " extends past the axis");
        blobs.push_back(std::move(b));
    }
    return blobs;
}

PlanarVec induced_velocity(const std::vector<ParticleBlob>& blobs, PlanarVec point,
                           const SimParams& params) {
    if (!(params.delta >= 0.0)) throw ConfigError("delta must be nonnegative");
    const double r0 = resolved_r0(params);
    const double t_rho = r0 + point.x2;
    if (!(t_rho > 0.0)) throw DomainError("evaluation point lies on or past the axis");
    Flat f = gather(blobs);
    refresh_radii(f, r0);
    return eval_one(f, point.x1, point.x2, t_rho, params.delta * params.delta);
}

std::vector<PlanarVec> compute_velocities(const std::vector<ParticleBlob>& blobs,
                                          const SimParams& params, bool parallel) {
    if (!(params.delta >= 0.0)) throw ConfigError("delta must be nonnegative");
    Flat f = gather(blobs);
    refresh_radii(f, resolved_r0(params));
    return flat_velocities(f, params.delta * params.delta, parallel);
}

void advance(std::vector<ParticleBlob>& blobs, const SimParams& params) {
    if (!(params.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(params.delta >= 0.0)) throw ConfigError("delta must be nonnegative");
    const double r0 = resolved_r0(params);
    const double delta_sq = params.delta * params.delta;
    const double h = params.dt;

    Flat base = gather(blobs);
    refresh_radii(base, r0);
    const std::size_t n = base.size();
    Flat stage = base;

    auto set_stage = [&](double c, const std::vector<PlanarVec>& k) {
        for (std::size_t q = 0; q < n; ++q) {
            stage.x1[q] = base.x1[q] + c * k[q].x1;
            stage.x2[q] = base.x2[q] + c * k[q].x2;
        }
        refresh_radii(stage, r0);
    };

    const std::vector<PlanarVec> k1 = flat_velocities(base, delta_sq, true);
    set_stage(0.5 * h, k1);
    const std::vector<PlanarVec> k2 = flat_velocities(stage, delta_sq, true);
    set_stage(0.5 * h, k2);
    const std::vector<PlanarVec> k3 = flat_velocities(stage, delta_sq, true);
    set_stage(h, k3);
    const std::vector<PlanarVec> k4 = flat_velocities(stage, delta_sq, true);

    for (std::size_t q = 0; q < n; ++q) {
        stage.x1[q] = base.x1[q] + (h / 6.0) * (k1[q].x1 + 2.0 * k2[q].x1 + 2.0 * k3[q].x1 + k4[q].x1);
        stage.x2[q] = base.x2[q] + (h / 6.0) * (k1[q].x2 + 2.0 * k2[q].x2 + 2.0 * k3[q].x2 + k4[q].x2);
    }
    refresh_radii(stage, r0); // reject the step before mutating the blobs

    std::size_t q = 0;
    for (ParticleBlob& b : blobs)
        for (PlanarVec& x : b.positions) {
            x = {stage.x1[q], stage.x2[q]};
            ++q;
        }
}

FieldSplit external_field_split(const std::vector<ParticleBlob>& blobs, int i, PlanarVec point,
                                const SimParams& params) {
    if (i < 0 || static_cast<std::size_t>(i) >= blobs.size())
        throw DomainError("blob index out of range");
    const double r0 = resolved_r0(params);
    FieldSplit fs{{0.0, 0.0}, {0.0, 0.0}};
    for (std::size_t j = 0; j < blobs.size(); ++j) {
        if (j == static_cast<std::size_t>(i)) continue;
        const ParticleBlob& b = blobs[j];
        for (std::size_t q = 0; q < b.positions.size(); ++q) {
            const PlanarVec kv = eval_K(point - b.positions[q]);
            const PlanarVec gv = eval_G(point, b.positions[q], r0);
            fs.f1 += b.weights[q] * kv;
            fs.f2 += b.weights[q] * (gv - kv);
        }
    }
    return fs;
}

} // namespace vring
