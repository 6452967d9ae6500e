#ifndef KICKED_TOP_TYPES_HPP
#define KICKED_TOP_TYPES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace kicked_top
{
using Complex  = std::complex< double >;
using MatrixC  = Eigen::MatrixXcd;
using VectorC  = Eigen::VectorXcd;
using MatrixR  = Eigen::MatrixXd;
using VectorR  = Eigen::VectorXd;
using Vector3R = Eigen::Vector3d;
using Matrix3R = Eigen::Matrix3d;

inline constexpr double pi = 3.14159265358979323846;

/// Input outside the documented domain (bad N, tau <= 0, empty range, ...).
class ValidationError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation produced a result that violates its own invariants
/// (non-unimodular Floquet spectrum, non-orthonormal eigenbasis, ...).
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Physical parameters of the kicked two-mode system, hbar = 1.
///
/// `c` is the raw interaction kick strength. Sweep and CLI layers work with
/// the scaled value c * (N + 1), see `c_scaled()` / `with_c_scaled()`.
struct SystemParams
{
    double epsilon = 0.0;
    double v       = 1.0;
    double c       = 0.0;
    double tau     = 1.0;
    int    N       = 1;

    [[nodiscard]] double ell() const { return 0.5 * N; }
    [[nodiscard]] double s() const { return 0.5 * (N + 1); }
    [[nodiscard]] double omega() const { return std::hypot(epsilon, v); }
    [[nodiscard]] double c_scaled() const { return c * (N + 1); }
    [[nodiscard]] bool   symmetric() const { return epsilon == 0.0; }

    [[nodiscard]] SystemParams with_c_scaled(double cs) const
    {
        auto p = *this;
        p.c    = cs / (N + 1);
        return p;
    }

    /// Throws ValidationError naming the offending field.
    void validate() const
    {
        if (N < 1)
            throw ValidationError("N: particle number must be >= 1, got " + std::to_string(N));
        if (!(tau > 0.0) || !std::isfinite(tau))
            throw ValidationError("tau: kick period must be > 0");
        if (!std::isfinite(epsilon) || !std::isfinite(v) || !std::isfinite(c))
            throw ValidationError("epsilon/v/c: must be finite");
    }
};
} // namespace kicked_top

#endif // KICKED_TOP_TYPES_HPP
