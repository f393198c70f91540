#pragma once

#include <cmath>

namespace vring {

/** 2-vector in the shifted half-plane coordinates x = (z, r - r0). */
struct PlanarVec {
    double x1 = 0.0;
    double x2 = 0.0;

    friend PlanarVec operator+(PlanarVec a, PlanarVec b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
    friend PlanarVec operator-(PlanarVec a, PlanarVec b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
    friend PlanarVec operator*(double s, PlanarVec a) { return {s * a.x1, s * a.x2}; }
    friend PlanarVec operator*(PlanarVec a, double s) { return {s * a.x1, s * a.x2}; }
    friend PlanarVec operator-(PlanarVec a) { return {-a.x1, -a.x2}; }
    PlanarVec& operator+=(PlanarVec b) { x1 += b.x1; x2 += b.x2; return *this; }
    PlanarVec& operator-=(PlanarVec b) { x1 -= b.x1; x2 -= b.x2; return *this; }
    friend bool operator==(PlanarVec a, PlanarVec b) { return a.x1 == b.x1 && a.x2 == b.x2; }
    friend bool operator!=(PlanarVec a, PlanarVec b) { return !(a == b); }

    double norm2() const { return x1 * x1 + x2 * x2; }
    double norm() const { return std::sqrt(norm2()); }
};

inline double dot(PlanarVec a, PlanarVec b) { return a.x1 * b.x1 + a.x2 * b.x2; }

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInv2Pi = 0.15915494309189533577;

} // namespace vring
