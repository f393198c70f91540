#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "rng.hpp"
#include "vring/diagnostics.hpp"
#include "vring/errors.hpp"
#include "vring/ring_sim.hpp"

using namespace vring;

namespace {

ParticleBlob hand_blob(std::vector<PlanarVec> pos, std::vector<double> w) {
    ParticleBlob b;
    b.positions = std::move(pos);
    b.weights = std::move(w);
    b.intensity = 0.0;
    for (double wp : b.weights) b.intensity += wp;
    b.sign = b.intensity >= 0.0 ? +1 : -1;
    return b;
}

ParticleBlob fresh_blob(int ppb, double intensity = 0.7) {
    SimParams p = make_sim_params(0.05, 3.0);
    p.particles_per_blob = ppb;
    return init_blobs(p, {{0.4, -0.2}}, {intensity})[0];
}

} // namespace

TEST_CASE("moments of hand-built blobs") {
    const ParticleBlob single = hand_blob({{1.0, 2.0}}, {0.5});
    const BlobMoments ms = blob_moments(single);
    CHECK(ms.center.x1 == 1.0);
    CHECK(ms.center.x2 == 2.0);
    CHECK(ms.inertia == 0.0);
    CHECK(ms.support_radius == 0.0);

    const ParticleBlob pair = hand_blob({{0.5, 0.0}, {-0.5, 0.0}}, {0.5, 0.5});
    const BlobMoments mp = blob_moments(pair);
    CHECK(mp.center.x1 == 0.0);
    CHECK(mp.center.x2 == 0.0);
    CHECK(mp.inertia == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(mp.support_radius == 0.5);

    // signed weights: the center of vorticity may leave the support,
    // while inertia and support use absolute weights
    const ParticleBlob mixed = hand_blob({{0.0, 0.0}, {1.0, 0.0}}, {1.0, -0.5});
    const BlobMoments mm = blob_moments(mixed);
    CHECK(mm.center.x1 == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(mm.center.x2 == 0.0);
    CHECK(mm.inertia == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(mm.support_radius == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("moments of a sampled disk") {
    const ParticleBlob b = fresh_blob(150); // 12x12 grid
    const BlobMoments m = blob_moments(b);
    CHECK((m.center - PlanarVec{0.4, -0.2}).norm() <= 1e-13);

    // discrete inertia of the concentric layout: (|a| eps^2/n^4) sum_{j>=1} (2j+1)(j+1/2)^2
    const double eps = 0.05;
    const double exact = 0.7 * eps * eps * 10331.75 / (144.0 * 144.0);
    CHECK(m.inertia == doctest::Approx(exact).epsilon(1e-12));
    CHECK(m.inertia < 0.5 * 0.7 * eps * eps);

    CHECK(m.support_radius == doctest::Approx((11.5 / 12.0) * eps).epsilon(1e-13));
    CHECK(m.support_radius < eps);
}

TEST_CASE("moments reject degenerate blobs") {
    ParticleBlob empty;
    CHECK_THROWS_AS(blob_moments(empty), DomainError);

    ParticleBlob zero = hand_blob({{0.0, 0.0}, {1.0, 0.0}}, {0.5, -0.5});
    CHECK_THROWS_AS(blob_moments(zero), DomainError);

    ParticleBlob ragged = hand_blob({{0.0, 0.0}, {1.0, 0.0}}, {0.5});
    ragged.intensity = 0.5;
    CHECK_THROWS_AS(blob_moments(ragged), DomainError);
}

TEST_CASE("tail mass counts strictly-outside circulation") {
    // center (0,0); radii 1, 1, 2, 2 with equal quarter weights
    const ParticleBlob b =
        hand_blob({{1.0, 0.0}, {-1.0, 0.0}, {2.0, 0.0}, {-2.0, 0.0}}, {0.25, 0.25, 0.25, 0.25});
    CHECK(mass_tail(b, 0.0) == 1.0);
    CHECK(mass_tail(b, 0.99) == 1.0);
    CHECK(mass_tail(b, 1.0) == 0.5);  // the r = 1 pair sits exactly on the circle
    CHECK(mass_tail(b, 1.5) == 0.5);
    CHECK(mass_tail(b, 1.9999) == 0.5);
    CHECK(mass_tail(b, 2.0) == 0.0);
    CHECK(mass_tail(b, 10.0) == 0.0);
    CHECK_THROWS_AS(mass_tail(b, -1.0), DomainError);
}

TEST_CASE("tail mass of a sampled disk") {
    const ParticleBlob b = fresh_blob(150);
    // rings 8..11 lie beyond eps/sqrt(2): 17+19+21+23 of 144 cells
    CHECK(mass_tail(b, 0.05 / std::sqrt(2.0)) == doctest::Approx(80.0 / 144.0).epsilon(1e-12));
    CHECK(mass_tail(b, 0.05) == 0.0);

    double prev = 2.0;
    for (int i = 0; i <= 20; ++i) {
        const double tail = mass_tail(b, 0.05 * i / 20.0);
        CHECK(tail <= prev);
        prev = tail;
    }
}

TEST_CASE("smoothstep cutoff shape") {
    CHECK(smoothstep_cutoff(0.0) == 1.0);
    CHECK(smoothstep_cutoff(-3.0) == 1.0);
    CHECK(smoothstep_cutoff(1.0) == 0.0);
    CHECK(smoothstep_cutoff(4.0) == 0.0);
    CHECK(smoothstep_cutoff(0.5) == doctest::Approx(0.5).epsilon(1e-15));

    // flat to second order at both ends; the cancellation floor of
    // 1 - s^3 poly(s) leaves a few ulps near s = 1
    CHECK(smoothstep_cutoff(1e-8) == 1.0);
    CHECK(smoothstep_cutoff(1.0 - 1e-8) <= 1e-14);

    double prev = 1.0, max_slope = 0.0;
    int out_of_range = 0;
    const int n = 4000;
    for (int i = 1; i <= n; ++i) {
        const double cur = smoothstep_cutoff(static_cast<double>(i) / n);
        if (cur > prev || cur < 0.0 || cur > 1.0) ++out_of_range;
        max_slope = std::max(max_slope, (prev - cur) * n);
        prev = cur;
    }
    CHECK(out_of_range == 0);
    CHECK(max_slope <= 15.0 / 8.0 + 1e-6); // the quintic's peak slope is 15/8
}

TEST_CASE("mollified mass brackets the sharp tail") {
    const ParticleBlob b = fresh_blob(150);
    const double eps = 0.05;

    // everything inside R: zero; everything beyond R + h: one
    CHECK(mollified_mass(b, {2.0 * eps, 0.5 * eps}) == 0.0);
    const ParticleBlob far =
        hand_blob({{2.0, 0.0}, {-2.0, 0.0}}, {0.5, 0.5});
    CHECK(mollified_mass(far, {0.5, 0.25}) == 1.0);

    testrng::Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const double h = eps * rng.uniform(0.05, 0.15);
        const double R = eps * rng.uniform(0.5, 1.15);
        const double sharp = mass_tail(b, R);
        CHECK(mollified_mass(b, {R, h}) <= sharp);
        CHECK(sharp <= mollified_mass(b, {R - h, h}));
    }

    CHECK_THROWS_AS(mollified_mass(b, {0.1, 0.0}), DomainError);
    CHECK_THROWS_AS(mollified_mass(b, {0.1, -0.01}), DomainError);
    CHECK_THROWS_AS(mollified_mass(b, {0.1, 0.06}), DomainError);
}

TEST_CASE("scaling bounds at alpha = 3") {
    const SimParams p = make_sim_params(1e-3, 3.0);
    const BoundReport r = bound_report(p, 1.0, 4.0);
    const double L = std::log(1000.0);

    CHECK(r.k == 0.5);
    CHECK(r.support_bound == doctest::Approx(std::pow(L, -0.5)).epsilon(1e-15));
    CHECK(r.delta_bound == doctest::Approx(std::pow(L, -2.0)).epsilon(1e-15));
    CHECK(r.inertia_bound == doctest::Approx(std::pow(L, -4.0)).epsilon(1e-15));
    CHECK(r.inertia_bound == doctest::Approx(4.3919e-4).epsilon(1e-3));
    CHECK(r.epsilon0 == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(r.regime_warning); // 4 c_fit = r_m sits exactly on the edge

    const BoundReport tighter = bound_report(p, 1.0, 3.9);
    CHECK_FALSE(tighter.regime_warning);
    CHECK(tighter.epsilon0 ==
          doctest::Approx(std::exp(-std::pow(4.0 / 3.9, 2.0))).epsilon(1e-14));

    const BoundReport strong = bound_report(p, 2.0, 4.0);
    CHECK(strong.epsilon0 == doctest::Approx(std::exp(-4.0)).epsilon(1e-14));

    SimParams shallow = p;
    shallow.alpha = 2.0;
    CHECK_THROWS_AS(bound_report(shallow, 1.0, 4.0), DomainError);
    CHECK_THROWS_AS(bound_report(p, 0.0, 4.0), DomainError);
    CHECK_THROWS_AS(bound_report(p, 1.0, 0.0), DomainError);
}

TEST_CASE("deviation from the point-vortex reference") {
    const std::vector<ParticleBlob> blobs = {hand_blob({{1.0, 2.0}}, {1.0}),
                                             hand_blob({{4.0, 6.0}}, {2.0})};
    PointVortexState ref;
    ref.positions = {{1.3, 1.6}, {4.0, 6.0}};
    ref.intensities = {1.0, 2.0};
    CHECK(pv_deviation(blobs, ref) == doctest::Approx(0.5).epsilon(1e-15));

    PointVortexState short_ref;
    short_ref.positions = {{1.0, 2.0}};
    short_ref.intensities = {1.0};
    CHECK_THROWS_AS(pv_deviation(blobs, short_ref), DomainError);
}
