#include "vring/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "vring/errors.hpp"

namespace vring {

BlobMoments blob_moments(const ParticleBlob& blob) {
    if (blob.positions.empty()) throw DomainError("blob has no particles");
    if (blob.positions.size() != blob.weights.size())
        throw DomainError("blob positions and weights differ in length");
    if (blob.intensity == 0.0) throw DomainError("blob intensity is zero: moments are degenerate");
    PlanarVec first{0.0, 0.0};
    for (std::size_t p = 0; p < blob.positions.size(); ++p)
        first += blob.weights[p] * blob.positions[p];
    BlobMoments m;
    m.center = (1.0 / blob.intensity) * first;
    m.inertia = 0.0;
    m.support_radius = 0.0;
    for (std::size_t p = 0; p < blob.positions.size(); ++p) {
        const double r_sq = (blob.positions[p] - m.center).norm2();
        m.inertia += std::abs(blob.weights[p]) * r_sq;
        m.support_radius = std::max(m.support_radius, std::sqrt(r_sq));
    }
    return m;
}

double mass_tail(const ParticleBlob& blob, double R) {
    if (!(R >= 0.0)) throw DomainError("mass_tail requires R >= 0");
    const PlanarVec center = blob_moments(blob).center;
    const double inv_a = 1.0 / std::abs(blob.intensity);
    double sum = 0.0;
    for (std::size_t p = 0; p < blob.positions.size(); ++p)
        if ((blob.positions[p] - center).norm() > R) sum += std::abs(blob.weights[p]) * inv_a;
    return sum;
}

double smoothstep_cutoff(double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    // the product can round above 1 within a few ulps of s = 1; the result
    // must stay in [0, 1] or the tail-mass sandwich can fail by one ulp
    return std::fmax(0.0, 1.0 - s * s * s * (10.0 + s * (-15.0 + s * 6.0)));
}

double mollified_mass(const ParticleBlob& blob, MollifierParams m) {
    if (!(m.width > 0.0)) throw DomainError("mollifier width must be positive");
    if (m.radius < 2.0 * m.width) throw DomainError("mollifier requires radius >= 2 width");
    const PlanarVec center = blob_moments(blob).center;
    const double inv_a = 1.0 / std::abs(blob.intensity);
    double sum = 0.0;
    for (std::size_t p = 0; p < blob.positions.size(); ++p) {
        const double r = (blob.positions[p] - center).norm();
        const double cut = smoothstep_cutoff((r - m.radius) / m.width);
        if (cut < 1.0) sum += std::abs(blob.weights[p]) * inv_a * (1.0 - cut);
    }
    return sum;
}

BoundReport bound_report(const SimParams& params, double c_fit, double r_m) {
    if (!(params.eps > 0.0) || !(params.eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
    if (!(params.alpha > 2.0)) throw DomainError("bound expressions require alpha > 2");
    if (!(c_fit > 0.0) || !(r_m > 0.0)) throw DomainError("c_fit and r_m must be positive");
    const double log_eps = std::abs(std::log(params.eps));
    BoundReport r;
    r.k = 0.5 * (params.alpha - 2.0);
    r.support_bound = c_fit * std::pow(log_eps, -r.k);
    r.delta_bound = std::pow(log_eps, -(params.alpha - 1.0));
    r.inertia_bound = std::pow(log_eps, -2.0 * (params.alpha - 1.0));
    r.c_fit = c_fit;
    r.r_m = r_m;
    r.regime_warning = 4.0 * c_fit <= r_m;
    r.epsilon0 = std::exp(-std::pow(4.0 * c_fit / r_m, 1.0 / r.k));
    return r;
}

double pv_deviation(const std::vector<ParticleBlob>& blobs, const PointVortexState& reference) {
    if (static_cast<int>(blobs.size()) != reference.size())
        throw DomainError("blob count does not match the reference state");
    double worst = 0.0;
    for (std::size_t i = 0; i < blobs.size(); ++i) {
        const PlanarVec c = blob_moments(blobs[i]).center;
        worst = std::max(worst, (c - reference.positions[i]).norm());
    }
    return worst;
}

} // namespace vring
