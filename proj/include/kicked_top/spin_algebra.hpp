#ifndef KICKED_TOP_SPIN_ALGEBRA_HPP
#define KICKED_TOP_SPIN_ALGEBRA_HPP

#include "kicked_top/types.hpp"

#include <vector>

namespace kicked_top
{
/// Schwinger angular-momentum matrices on the (N+1)-dimensional Fock space.
///
/// Basis index n counts particles in well 1, so lz = diag(n - N/2) and the
/// Fock state |N> sits at the north pole. `rx` is the parity rotation
/// exp(-i pi lx); `lx_vectors` holds the lx eigenbasis (columns ordered by
/// ascending eigenvalue m = -ell..ell), reused by the parity-sector
/// diagonalisation.
struct SpinOperators
{
    int     N = 0;
    MatrixC lx, ly, lz;
    MatrixC rx;
    MatrixR lx_vectors;

    [[nodiscard]] Eigen::Index dim() const { return N + 1; }
    [[nodiscard]] double       ell() const { return 0.5 * N; }
};

SpinOperators build_spin_operators(int N);

/// Normalized state over the Fock basis, amplitude index = n.
using StateVector = VectorC;

/// Fock state |n>.
StateVector fock_state(int N, int n);

/// SU(2) coherent state |theta, phi> in the Fock expansion
/// sqrt(C(N,n)) cos^n(theta/2) sin^(N-n)(theta/2) e^{i(N-n)phi}.
StateVector coherent_state(int N, double theta, double phi);

/// (<lx>, <ly>, <lz>) for a normalized state.
Vector3R angular_expectation(const StateVector& state, const SpinOperators& ops);

struct HusimiGrid
{
    std::vector< double > thetas; // uniform on [0, pi], endpoints included
    std::vector< double > phis;   // uniform on [-pi, pi), right end excluded
    MatrixR               values; // values(i, j) = Q(thetas[i], phis[j])
};

HusimiGrid husimi(const StateVector& state, int n_theta, int n_phi);

/// (N+1)/(4 pi) * integral of Q over the sphere, trapezoid in theta with the
/// sin(theta) area weight and the periodic rectangle rule in phi. Equals 1 for
/// any normalized state up to quadrature error.
double husimi_normalization(const HusimiGrid& grid, int N);

/// Largest entry-wise modulus of a matrix, used throughout for tolerance checks.
template < typename Derived >
double max_abs(const Eigen::MatrixBase< Derived >& m)
{
    return m.cwiseAbs().maxCoeff();
}

/// exp(-i t H) for Hermitian H via its eigendecomposition.
MatrixC unitary_exponential(const MatrixC& hermitian, double t);
} // namespace kicked_top

#endif // KICKED_TOP_SPIN_ALGEBRA_HPP
