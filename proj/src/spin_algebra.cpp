#include "kicked_top/spin_algebra.hpp"

#include <Eigen/Eigenvalues>

namespace kicked_top
{
SpinOperators build_spin_operators(int N)
{
    if (N < 1)
        throw ValidationError("build_spin_operators: N must be >= 1");

    const Eigen::Index dim = N + 1;
    const double       ell = 0.5 * N;

    // <m+1| L+ |m> = sqrt(ell(ell+1) - m(m+1)), m = n - ell. Each element is
    // picked within 4 ulp of the rounded root so that consecutive a^2 - x
    // residuals agree; the diagonal of [L+, L-] only sees their differences.
    MatrixR lplus = MatrixR::Zero(dim, dim);
    double  previous = 0.0;
    for (Eigen::Index n = 0; n + 1 < dim; ++n)
    {
        const double m = static_cast< double >(n) - ell;
        const double x = ell * (ell + 1.0) - m * (m + 1.0);
        double       a = std::sqrt(x);
        double       best = a, best_err = std::fma(a, a, -x);
        double       lo = a, hi = a;
        for (int k = 0; k < 4; ++k)
        {
            lo = std::nextafter(lo, 0.0);
            hi = std::nextafter(hi, 2.0 * hi);
            for (const double cand : {lo, hi})
            {
                const double err = std::fma(cand, cand, -x);
                if (std::abs(err - previous) < std::abs(best_err - previous))
                {
                    best     = cand;
                    best_err = err;
                }
            }
        }
        lplus(n + 1, n) = best;
        previous        = best_err;
    }

    SpinOperators ops;
    ops.N  = N;
    ops.lx = (0.5 * (lplus + lplus.transpose())).cast< Complex >();
    ops.ly = (lplus - lplus.transpose()).cast< Complex >() * Complex(0.0, -0.5);
    ops.lz = MatrixC::Zero(dim, dim);
    for (Eigen::Index n = 0; n < dim; ++n)
        ops.lz(n, n) = static_cast< double >(n) - ell;

    // The lx spectrum is exactly {-ell, ..., ell}; only the vectors come from
    // the solver.
    const MatrixR                                  lx_real = ops.lx.real();
    const Eigen::SelfAdjointEigenSolver< MatrixR > solver(lx_real);
    ops.lx_vectors = solver.eigenvectors();

    VectorC phases(dim);
    for (Eigen::Index k = 0; k < dim; ++k)
    {
        const double m = static_cast< double >(k) - ell;
        phases(k)      = std::polar(1.0, -pi * m);
    }
    const MatrixC vectors = ops.lx_vectors.cast< Complex >();
    ops.rx                = vectors * phases.asDiagonal() * vectors.adjoint();
    return ops;
}

StateVector fock_state(int N, int n)
{
    if (N < 1 || n < 0 || n > N)
        throw ValidationError("fock_state: need 0 <= n <= N, N >= 1");
    StateVector state = StateVector::Zero(N + 1);
    state(n)          = 1.0;
    return state;
}

StateVector coherent_state(int N, double theta, double phi)
{
    if (N < 1)
        throw ValidationError("coherent_state: N must be >= 1");

    const double cos_half = std::cos(0.5 * theta);
    const double sin_half = std::sin(0.5 * theta);
    const double log_fact = std::lgamma(N + 1.0);

    StateVector state(N + 1);
    for (int n = 0; n <= N; ++n)
    {
        const double binom = std::exp(0.5 * (log_fact - std::lgamma(n + 1.0) - std::lgamma(N - n + 1.0)));
        const double mag   = binom * std::pow(cos_half, n) * std::pow(sin_half, N - n);
        state(n)           = std::polar(1.0, (N - n) * phi) * mag;
    }
    // positive rescale only, the phase convention is untouched
    state /= state.norm();
    return state;
}

Vector3R angular_expectation(const StateVector& state, const SpinOperators& ops)
{
    if (state.size() != ops.dim())
        throw ValidationError("angular_expectation: state dimension does not match operators");
    return {state.dot(ops.lx * state).real(), state.dot(ops.ly * state).real(), state.dot(ops.lz * state).real()};
}

HusimiGrid husimi(const StateVector& state, int n_theta, int n_phi)
{
    if (n_theta < 2 || n_phi < 2)
        throw ValidationError("husimi: grid sizes must be >= 2");

    const int  N = static_cast< int >(state.size()) - 1;
    HusimiGrid grid;
    grid.thetas.resize(n_theta);
    grid.phis.resize(n_phi);
    for (int i = 0; i < n_theta; ++i)
        grid.thetas[i] = pi * i / (n_theta - 1);
    for (int j = 0; j < n_phi; ++j)
        grid.phis[j] = -pi + 2.0 * pi * j / n_phi;

    grid.values.resize(n_theta, n_phi);
    for (int i = 0; i < n_theta; ++i)
    {
        // <theta,phi|psi> = sum_n conj(a_n(theta)) e^{-i(N-n)phi} psi_n
        const StateVector weights = coherent_state(N, grid.thetas[i], 0.0).conjugate().cwiseProduct(state);
        for (int j = 0; j < n_phi; ++j)
        {
            const Complex step = std::polar(1.0, -grid.phis[j]);
            // Horner in e^{-i phi}, highest power belongs to n = 0
            Complex acc = 0.0;
            for (int n = 0; n <= N; ++n)
                acc = acc * step + weights(n);
            grid.values(i, j) = std::norm(acc);
        }
    }
    return grid;
}

double husimi_normalization(const HusimiGrid& grid, int N)
{
    const auto   n_theta = static_cast< Eigen::Index >(grid.thetas.size());
    const auto   n_phi   = static_cast< Eigen::Index >(grid.phis.size());
    const double d_theta = pi / static_cast< double >(n_theta - 1);
    const double d_phi   = 2.0 * pi / static_cast< double >(n_phi);

    double total = 0.0;
    for (Eigen::Index i = 0; i < n_theta; ++i)
    {
        const double w = (i == 0 || i == n_theta - 1) ? 0.5 : 1.0;
        total += w * std::sin(grid.thetas[i]) * grid.values.row(i).sum();
    }
    return (N + 1) / (4.0 * pi) * total * d_theta * d_phi;
}

MatrixC unitary_exponential(const MatrixC& hermitian, double t)
{
    const Eigen::SelfAdjointEigenSolver< MatrixC > solver(hermitian);
    const VectorC phases = (solver.eigenvalues() * -t).unaryExpr([](double a) { return std::polar(1.0, a); });
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}
} // namespace kicked_top
