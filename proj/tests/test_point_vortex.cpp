#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "vring/errors.hpp"
#include "vring/planar_vec.hpp"
#include "vring/point_vortex.hpp"

using namespace vring;

namespace {

PointVortexState three_vortex() {
    PointVortexState s;
    s.positions = {{0.62, 0.1}, {-0.45, 0.55}, {-0.2, -0.6}};
    s.intensities = {1.0, 0.8, -0.6};
    return s;
}

double max_pos_gap(const PointVortexState& a, const PointVortexState& b) {
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i) m = std::max(m, (a.positions[i] - b.positions[i]).norm());
    return m;
}

} // namespace

TEST_CASE("corotating pair rotates at rate 1/pi") {
    PointVortexState s;
    s.positions = {{0.5, 0.0}, {-0.5, 0.0}};
    s.intensities = {1.0, 1.0};

    // quarter period pi^2/2: each vortex advances 90 degrees counterclockwise
    const double quarter = 0.5 * kPi * kPi;
    const auto traj = pv_integrate(s, quarter, 1e-3, 0.0);
    const PointVortexState& f = traj.back();
    CHECK((f.positions[0] - PlanarVec{0.0, 0.5}).norm() <= 1e-9);
    CHECK((f.positions[1] - PlanarVec{0.0, -0.5}).norm() <= 1e-9);
}

TEST_CASE("dipole translates at speed 1/(2 pi gap)") {
    PointVortexState s;
    s.positions = {{0.5, 0.0}, {-0.5, 0.0}};
    s.intensities = {1.0, -1.0};

    const double horizon = 2.0;
    const auto traj = pv_integrate(s, horizon, 0.1, 0.0);
    const PointVortexState& f = traj.back();
    const double want = -horizon / (2.0 * kPi);
    for (int i = 0; i < 2; ++i) {
        CHECK(f.positions[i].x1 == s.positions[i].x1);
        CHECK(f.positions[i].x2 == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("first integrals are conserved") {
    const PointVortexState s = three_vortex();
    const PvInvariants before = pv_invariants(s);
    const auto traj = pv_integrate(s, 2.0, 1e-3, 0.0);
    const PvInvariants after = pv_invariants(traj.back());

    CHECK(std::abs(after.hamiltonian - before.hamiltonian) <= 1e-11);
    CHECK((after.linear_impulse - before.linear_impulse).norm() <= 1e-12);
    CHECK(std::abs(after.angular_impulse - before.angular_impulse) <= 1e-11);
}

TEST_CASE("invariant values match hand formulas") {
    PointVortexState s;
    s.positions = {{0.25, 0.0}, {-0.25, 0.0}};
    s.intensities = {1.0, 1.0};
    const PvInvariants inv = pv_invariants(s);
    CHECK(inv.hamiltonian == doctest::Approx(-std::log(0.5) / (2.0 * kPi)).epsilon(1e-14));
    CHECK(inv.linear_impulse.x1 == 0.0);
    CHECK(inv.linear_impulse.x2 == 0.0);
    CHECK(inv.angular_impulse == doctest::Approx(0.125).epsilon(1e-14));

    PointVortexState c = s;
    c.positions[1] = c.positions[0];
    CHECK_THROWS_AS(pv_invariants(c), CollapseError);
    CHECK_THROWS_AS(pv_rhs(c), CollapseError);
}

TEST_CASE("intensity-weighted velocities sum to zero") {
    const PointVortexState s = three_vortex();
    const auto vel = pv_rhs(s);
    PlanarVec total{0.0, 0.0};
    double scale = 0.0;
    for (int i = 0; i < s.size(); ++i) {
        total += s.intensities[i] * vel[i];
        scale += std::abs(s.intensities[i]) * vel[i].norm();
    }
    CHECK(total.norm() <= 1e-15 * scale);
}

TEST_CASE("drift adds intensity to the axial velocity only") {
    const PointVortexState s = three_vortex();
    const auto plain = pv_rhs(s, false);
    const auto drifted = pv_rhs(s, true);
    for (int i = 0; i < s.size(); ++i) {
        CHECK(drifted[i].x1 - plain[i].x1 ==
              doctest::Approx(s.intensities[i]).epsilon(1e-14));
        CHECK(drifted[i].x2 == plain[i].x2);
    }
}

TEST_CASE("step halving gains a factor of sixteen") {
    const PointVortexState s = three_vortex();
    const auto ref = pv_integrate(s, 1.0, 0.0125, 0.0);
    const auto coarse = pv_integrate(s, 1.0, 0.1, 0.0);
    const auto fine = pv_integrate(s, 1.0, 0.05, 0.0);
    const double e1 = max_pos_gap(coarse.back(), ref.back());
    const double e2 = max_pos_gap(fine.back(), ref.back());
    CHECK(e1 > 1e-13); // above the roundoff floor, so the ratio is meaningful
    const double ratio = e1 / e2;
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("close approach raises a collapse error mid-run") {
    // A translating dipole overtakes a near-passive vortex on its path. The
    // tracer is swept forward and around one side of the pair, dipping to a
    // separation of about 0.06 near t = 2.3 before escaping.
    PointVortexState s;
    s.positions = {{0.0, 0.05}, {0.0, -0.05}, {2.0, 0.0}};
    s.intensities = {1.0, -1.0, 1e-8};

    const auto free_run = pv_integrate(s, 3.0, 1e-3, 0.0);
    double dip = 1e300;
    for (const auto& st : free_run) dip = std::min(dip, min_separation(st));
    CHECK(dip < 0.07);
    CHECK(dip > 0.04);

    bool thrown = false;
    try {
        pv_integrate(s, 3.0, 1e-3, 0.08);
    } catch (const CollapseError& e) {
        thrown = true;
        CHECK(e.time > 1.8);
        CHECK(e.time < 2.6);
        CHECK(e.second == 2);
    }
    CHECK(thrown);
}

TEST_CASE("collapse below threshold at the initial state") {
    PointVortexState s;
    s.positions = {{0.0, 0.0}, {0.1, 0.0}};
    s.intensities = {1.0, 1.0};
    s.time = 5.0;

    bool thrown = false;
    try {
        pv_integrate(s, 1.0, 1e-2, 0.2);
    } catch (const CollapseError& e) {
        thrown = true;
        CHECK(e.time == 5.0);
        CHECK(e.first == 0);
        CHECK(e.second == 1);
    }
    CHECK(thrown);
}

TEST_CASE("trajectory bookkeeping") {
    PointVortexState s = three_vortex();
    s.time = 1.5;
    const double horizon = 0.25;
    const double dt = 0.1;
    const auto traj = pv_integrate(s, horizon, dt, 0.0);

    REQUIRE(traj.size() == 4); // initial + two whole steps + one partial
    CHECK(traj.front().time == 1.5);
    for (size_t k = 1; k + 1 < traj.size(); ++k)
        CHECK(traj[k].time == doctest::Approx(1.5 + k * dt).epsilon(1e-15));
    CHECK(traj.back().time == 1.5 + horizon);
}

TEST_CASE("step schedule covers the horizon") {
    const auto a = step_schedule(1.0, 0.3);
    REQUIRE(a.size() == 4);
    CHECK(a[0] == 0.3);
    CHECK(a[3] == doctest::Approx(0.1).epsilon(1e-12));
    double sum = 0.0;
    for (double h : a) sum += h;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

    const auto b = step_schedule(0.9, 0.3);
    double sum_b = 0.0;
    for (double h : b) {
        CHECK(h <= 0.3 * (1.0 + 1e-12));
        sum_b += h;
    }
    CHECK(sum_b == doctest::Approx(0.9).epsilon(1e-15));

    const auto c = step_schedule(1.0, 2.0);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == 1.0);

    CHECK_THROWS_AS(step_schedule(0.0, 0.1), ConfigError);
    CHECK_THROWS_AS(step_schedule(1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(step_schedule(1.0, -0.1), ConfigError);
}

TEST_CASE("degenerate states are rejected") {
    PointVortexState empty;
    CHECK_THROWS_AS(pv_integrate(empty, 1.0, 0.1, 0.0), ConfigError);

    PointVortexState mismatched;
    mismatched.positions = {{0.0, 0.0}, {1.0, 0.0}};
    mismatched.intensities = {1.0};
    CHECK_THROWS_AS(pv_integrate(mismatched, 1.0, 0.1, 0.0), ConfigError);

    PointVortexState lone;
    lone.positions = {{0.3, 0.4}};
    lone.intensities = {2.0};
    CHECK(std::isinf(min_separation(lone)));
    const auto traj = pv_integrate(lone, 1.0, 0.1, 0.0);
    CHECK(traj.back().positions[0].x1 == 0.3);
    CHECK(traj.back().positions[0].x2 == 0.4);
}
