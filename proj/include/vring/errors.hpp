#pragma once

#include <stdexcept>
#include <string>

namespace vring {

/** Bad or inconsistent user input (config files, CLI arguments, invalid setups). Exit code 2. */
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/** Base for runtime failures of the numerics themselves. Exit code 3. */
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/** Argument outside the admissible domain of a kernel or special function. */
struct DomainError : NumericError {
    explicit DomainError(const std::string& msg) : NumericError(msg) {}
};

/** Unregularized evaluation at coincident points. */
struct SingularityError : NumericError {
    explicit SingularityError(const std::string& msg) : NumericError(msg) {}
};

/** An adaptive quadrature failed to reach its requested tolerance. */
struct AccuracyError : NumericError {
    explicit AccuracyError(const std::string& msg) : NumericError(msg) {}
};

/** Two point vortices closer than the collapse threshold. */
struct CollapseError : NumericError {
    double time;
    int first, second;
    CollapseError(double t, int i, int j, const std::string& what_happened)
        : NumericError("vortex collapse at t=" + std::to_string(t) + ", pair (" +
                       std::to_string(i) + "," + std::to_string(j) + "): " + what_happened),
          time(t), first(i), second(j) {}
};

/** A particle reached the symmetry axis (r0 + x2 <= 0). */
struct AxisCollisionError : NumericError {
    explicit AxisCollisionError(const std::string& msg) : NumericError(msg) {}
};

/** A self-check property failed (e.g. broken sweep monotonicity). Exit code 4. */
struct AcceptanceViolation : std::runtime_error {
    explicit AcceptanceViolation(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace vring
