#ifndef KICKED_TOP_FLOQUET_HPP
#define KICKED_TOP_FLOQUET_HPP

#include "kicked_top/spin_algebra.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace kicked_top
{
enum class FloquetVariant
{
    kick_after_rotation, // F  = exp(i c tau lz^2) exp(-i H0 tau)
    rotation_after_kick  // F~ = exp(-i H0 tau) exp(i c tau lz^2)
};

/// Parity under R_x: `even` is the R_x eigenvalue +1 (N even) or +i (N odd),
/// `odd` is -1 or -i. `none` when epsilon != 0 breaks the symmetry.
enum class Parity
{
    even,
    odd,
    none
};

std::string_view parity_label(Parity p); // "+", "-", "none"

struct Hamiltonians
{
    MatrixC h0; // epsilon lz + v lx
    MatrixC v;  // -lz^2
};

Hamiltonians build_hamiltonians(const SystemParams& params, const SpinOperators& ops);

struct FloquetOperator
{
    MatrixC        matrix;
    SystemParams   params;
    FloquetVariant variant = FloquetVariant::kick_after_rotation;
};

FloquetOperator floquet_operator(const SystemParams& params, const SpinOperators& ops,
                                 FloquetVariant variant = FloquetVariant::kick_after_rotation);

/// Eigenphases and eigenstates of one Floquet operator.
///
/// Column k of `states` is |kappa_k> with F|kappa_k> = exp(-i eps_k tau)|kappa_k>.
/// States are ordered by parity sector (even first) and ascending
/// quasi-energy within each sector; each vector's largest component is real
/// and positive.
struct FloquetDecomposition
{
    std::vector< double > quasienergies; // in [-pi/tau, pi/tau)
    MatrixC               states;
    std::vector< Parity > parities;
    double                tau = 1.0;

    [[nodiscard]] Eigen::Index size() const { return states.cols(); }
};

/// For epsilon = 0 the operator is first block-diagonalised in the R_x
/// eigenbasis, so parities are exact. Throws NumericalError when an
/// eigenvalue modulus deviates from 1 by more than 1e-8.
FloquetDecomposition diagonalize_floquet(const FloquetOperator& fop, const SpinOperators& ops);

/// Quasi-energy -arg(lambda)/tau with arg in (-pi, pi].
double quasienergy_from_eigenvalue(Complex lambda, double tau);

/// Circular distance of two quasi-energies on the zone of width 2 pi / tau.
double circular_distance(double a, double b, double tau);

/// F^dagger A F.
MatrixC heisenberg_conjugate(const FloquetOperator& fop, const MatrixC& a);

struct Observation
{
    int      kick    = 0;
    Vector3R l_norm  = Vector3R::Zero(); // <L> / ell
    double   p_plus  = 0.0; // NaN when the observer state is not set
    double   p_minus = 0.0;
    double   p_orth  = 0.0;
    double   norm    = 1.0;
};

struct Observers
{
    std::optional< StateVector > plus;  // projections recorded only when set
    std::optional< StateVector > minus;
    int                          stride = 1;
};

/// psi_{m+1} = F psi_m, recording every `stride` kicks (and always kick 0).
std::vector< Observation > propagate(const StateVector& state, const FloquetOperator& fop, const SpinOperators& ops,
                                     int n_kicks, const Observers& observers = {});
} // namespace kicked_top

#endif // KICKED_TOP_FLOQUET_HPP
