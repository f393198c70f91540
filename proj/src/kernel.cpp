#include "vring/kernel.hpp"

#include <array>
#include <cmath>
#include <string>

#include "vring/errors.hpp"
#include "vring/quadrature.hpp"
#include "vring/special.hpp"

namespace vring {
namespace {

struct GFrame {
    double rox, roy;  // shifted radii r0 + x2, r0 + y2
    double dx1, dy2;  // x1 - y1, y2 - x2
    double d_sq;      // |x - y|^2
    double a_sq;      // reduced argument squared
    double pref;      // 1 / (2 pi rox^{3/2} roy^{1/2})
};

GFrame make_frame(PlanarVec x, PlanarVec y, double r0) {
    GFrame f;
    f.rox = r0 + x.x2;
    f.roy = r0 + y.x2;
    if (!(f.rox > 0.0) || !(f.roy > 0.0))
        throw DomainError("shifted radius must be positive: r0+x2=" + std::to_string(f.rox) +
                          ", r0+y2=" + std::to_string(f.roy));
    if (x == y)
        throw SingularityError("ring kernel evaluated at coincident points");
    f.dx1 = x.x1 - y.x1;
    f.dy2 = y.x2 - x.x2;
    f.d_sq = f.dx1 * f.dx1 + f.dy2 * f.dy2;
    f.a_sq = f.d_sq / (f.rox * f.roy);
    f.pref = kInv2Pi / (f.rox * std::sqrt(f.rox) * std::sqrt(f.roy));
    return f;
}

} // namespace

KernelArg kernel_arg(PlanarVec x, PlanarVec y, double r0) {
    const GFrame f = make_frame(x, y, r0);
    return {std::sqrt(f.a_sq)};
}

PlanarVec eval_K(PlanarVec x) {
    const double n2 = x.norm2();
    if (n2 == 0.0)
        throw SingularityError("planar kernel evaluated at the origin");
    const double s = kInv2Pi / n2;
    return {-x.x2 * s, x.x1 * s};
}

PlanarVec eval_G(PlanarVec x, PlanarVec y, double r0) {
    const GFrame f = make_frame(x, y, r0);
    const special_detail::Core c = special_detail::core(std::sqrt(f.a_sq));
    return {f.pref * (f.dy2 * c.i1 + f.roy * c.i2), f.pref * (f.dx1 * c.i1)};
}

PlanarVec eval_G_oracle(PlanarVec x, PlanarVec y, double r0, double tol, double* err_out) {
    if (!(tol > 0.0))
        throw DomainError("oracle tolerance must be positive");
    const GFrame f = make_frame(x, y, r0);
    const double a_sq = f.a_sq;
    const double dy2 = f.dy2, dx1 = f.dx1, roy = f.roy;

    // Integrand of 2 pi rox^{3/2} roy^{1/2} G over theta in [0, pi]:
    //   { (y2-x2) cos t + (r0+y2)(1 - cos t),  (x1-y1) cos t } / D(t)^{3/2},
    // D(t) = a^2 + 2(1 - cos t).
    auto g_theta = [&](double th) -> std::array<double, 2> {
        const double ct = std::cos(th);
        const double den = a_sq + 2.0 * (1.0 - ct);
        const double p = den * std::sqrt(den);
        return {(dy2 * ct + roy * (1.0 - ct)) / p, dx1 * ct / p};
    };

    quad::Result<2> total{};
    if (a_sq < 1.0) {
        // Peak of width ~a at theta = 0: substitute z = 2 sin(t/2) on
        // [0, pi/2], where D = a^2 + z^2 and cos t = 1 - z^2/2 exactly.
        auto g_z = [&](double z) -> std::array<double, 2> {
            const double z_sq = z * z;
            const double den = a_sq + z_sq;
            const double p = den * std::sqrt(den);
            const double ct = 1.0 - 0.5 * z_sq;
            const double jac = 2.0 / std::sqrt(4.0 - z_sq);
            return {(dy2 * ct + roy * 0.5 * z_sq) * jac / p, dx1 * ct * jac / p};
        };
        const quad::Result<2> qa =
            quad::integrate<2>(g_z, 0.0, std::sqrt(2.0), 0.5 * tol, 0.0, 4000);
        const quad::Result<2> qb =
            quad::integrate<2>(g_theta, 0.5 * kPi, kPi, 0.5 * tol, 0.0, 4000);
        total.value = {qa.value[0] + qb.value[0], qa.value[1] + qb.value[1]};
        total.error = qa.error + qb.error;
    } else {
        total = quad::integrate<2>(g_theta, 0.0, kPi, tol, 0.0, 4000);
    }

    const PlanarVec g{f.pref * total.value[0], f.pref * total.value[1]};
    if (err_out) {
        const double scale = std::abs(total.value[0]) + std::abs(total.value[1]);
        *err_out = scale > 0.0 ? total.error / scale : total.error;
    }
    return g;
}

double difference_ratio(PlanarVec x, PlanarVec y, double eps, double alpha) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw DomainError("eps must lie in (0, 1)");
    const double log_eps = std::abs(std::log(eps));
    const double r0 = std::pow(log_eps, alpha);
    if (!(std::abs(x.x2) <= 0.5 * r0) || !(std::abs(y.x2) <= 0.5 * r0))
        throw DomainError("difference_ratio requires |x2| <= r0/2 and |y2| <= r0/2");
    if (x == y)
        throw SingularityError("difference_ratio evaluated at coincident points");
    const double log_log = std::log(log_eps);
    double bracket_core = 1.0 + log_log;
    const double d = (x - y).norm();
    if (d < 1.0)
        bracket_core += std::abs(std::log(d));
    if (!(bracket_core > 0.0))
        throw DomainError("eps too large: bound bracket is nonpositive");
    const double bracket = std::pow(log_eps, -alpha) * bracket_core;

    const PlanarVec diff = eval_G(x, y, r0) - eval_K(x - y);
    return diff.norm() / bracket;
}

} // namespace vring
