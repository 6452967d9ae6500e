#include "kicked_top/floquet.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <numeric>

namespace kicked_top
{
std::string_view parity_label(Parity p)
{
    switch (p)
    {
    case Parity::even: return "+";
    case Parity::odd: return "-";
    default: return "none";
    }
}

Hamiltonians build_hamiltonians(const SystemParams& params, const SpinOperators& ops)
{
    return {params.epsilon * ops.lz + params.v * ops.lx, -(ops.lz * ops.lz)};
}

FloquetOperator floquet_operator(const SystemParams& params, const SpinOperators& ops, FloquetVariant variant)
{
    params.validate();
    if (params.N != ops.N)
        throw ValidationError("floquet_operator: params.N does not match operator dimension");

    // H0 is real symmetric in the Fock basis
    const MatrixR                                  h0 = params.epsilon * ops.lz.real() + params.v * ops.lx.real();
    const Eigen::SelfAdjointEigenSolver< MatrixR > solver(h0);
    const MatrixC vectors = solver.eigenvectors().cast< Complex >();
    const VectorC free_phases =
        (solver.eigenvalues() * -params.tau).unaryExpr([](double a) { return std::polar(1.0, a); });
    const MatrixC free = vectors * free_phases.asDiagonal() * vectors.adjoint();

    // exp(i c tau lz^2) is diagonal with exact phases
    VectorC kick(ops.dim());
    for (Eigen::Index n = 0; n < ops.dim(); ++n)
    {
        const double m = ops.lz(n, n).real();
        kick(n)        = std::polar(1.0, params.c * params.tau * m * m);
    }

    FloquetOperator fop;
    fop.params  = params;
    fop.variant = variant;
    fop.matrix  = variant == FloquetVariant::kick_after_rotation ? MatrixC(kick.asDiagonal() * free)
                                                                 : MatrixC(free * kick.asDiagonal());
    return fop;
}

double quasienergy_from_eigenvalue(Complex lambda, double tau)
{
    // std::arg is in [-pi, pi]; map -pi onto +pi so that -arg/tau is in [-pi/tau, pi/tau)
    double phase = std::arg(lambda);
    if (phase <= -pi)
        phase = pi;
    return -phase / tau;
}

double circular_distance(double a, double b, double tau)
{
    const double period = 2.0 * pi / tau;
    const double d      = std::fmod(std::abs(a - b), period);
    return std::min(d, period - d);
}

namespace
{
struct Eigenpair
{
    double   quasienergy;
    VectorC  vector;
    Parity   parity;
    Eigen::Index dominant;
};

void diagonalize_block(const MatrixC& block_matrix, const MatrixC& basis, Parity parity, double tau,
                       std::vector< Eigenpair >& out)
{
    const Eigen::ComplexSchur< MatrixC > schur(block_matrix);
    if (schur.info() != Eigen::Success)
        throw NumericalError("diagonalize_floquet: Schur decomposition did not converge");

    const MatrixC& t = schur.matrixT();
    const MatrixC  q = basis * schur.matrixU();
    for (Eigen::Index k = 0; k < t.rows(); ++k)
    {
        const Complex lambda = t(k, k);
        if (std::abs(std::abs(lambda) - 1.0) > 1e-8)
            throw NumericalError("diagonalize_floquet: non-unimodular eigenvalue, |lambda| = " +
                                 std::to_string(std::abs(lambda)));

        VectorC      v = q.col(k);
        Eigen::Index dominant = 0;
        v.cwiseAbs().maxCoeff(&dominant);
        v *= std::polar(1.0, -std::arg(v(dominant)));
        out.push_back({quasienergy_from_eigenvalue(lambda, tau), std::move(v), parity, dominant});
    }
}
} // namespace

FloquetDecomposition diagonalize_floquet(const FloquetOperator& fop, const SpinOperators& ops)
{
    const double tau = fop.params.tau;
    const auto   dim = fop.matrix.rows();
    if (dim != ops.dim())
        throw ValidationError("diagonalize_floquet: operator and spin operators differ in dimension");

    std::vector< Eigenpair > pairs;
    pairs.reserve(static_cast< std::size_t >(dim));

    if (fop.params.symmetric())
    {
        // R_x eigenvalue of the lx eigenvector with m = -ell + k is exp(-i pi m);
        // even sector = {+1, +i}, odd sector = {-1, -i}.
        std::vector< Eigen::Index > even, odd;
        for (Eigen::Index k = 0; k < dim; ++k)
        {
            const Complex r = std::polar(1.0, -pi * (static_cast< double >(k) - ops.ell()));
            (r.real() + r.imag() > 0.0 ? even : odd).push_back(k);
        }
        for (const auto& [cols, parity] : {std::pair{even, Parity::even}, std::pair{odd, Parity::odd}})
        {
            if (cols.empty())
                continue;
            MatrixC basis(dim, static_cast< Eigen::Index >(cols.size()));
            for (std::size_t j = 0; j < cols.size(); ++j)
                basis.col(static_cast< Eigen::Index >(j)) = ops.lx_vectors.col(cols[j]).cast< Complex >();
            diagonalize_block(basis.adjoint() * fop.matrix * basis, basis, parity, tau, pairs);
        }
    }
    else
        diagonalize_block(fop.matrix, MatrixC::Identity(dim, dim), Parity::none, tau, pairs);

    std::stable_sort(pairs.begin(), pairs.end(), [](const Eigenpair& a, const Eigenpair& b) {
        if (a.parity != b.parity)
            return a.parity < b.parity;
        if (a.quasienergy != b.quasienergy)
            return a.quasienergy < b.quasienergy;
        return a.dominant < b.dominant;
    });

    FloquetDecomposition out;
    out.tau = tau;
    out.states.resize(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k)
    {
        const auto& p = pairs[static_cast< std::size_t >(k)];
        out.quasienergies.push_back(p.quasienergy);
        out.parities.push_back(p.parity);
        out.states.col(k) = p.vector;
    }
    return out;
}

MatrixC heisenberg_conjugate(const FloquetOperator& fop, const MatrixC& a)
{
    if (a.rows() != fop.matrix.rows() || a.cols() != fop.matrix.cols())
        throw ValidationError("heisenberg_conjugate: dimension mismatch");
    return fop.matrix.adjoint() * a * fop.matrix;
}

std::vector< Observation > propagate(const StateVector& state, const FloquetOperator& fop, const SpinOperators& ops,
                                     int n_kicks, const Observers& observers)
{
    if (n_kicks < 0)
        throw ValidationError("propagate: n_kicks must be >= 0");
    if (state.size() != fop.matrix.rows())
        throw ValidationError("propagate: state dimension does not match the Floquet operator");
    if (observers.stride < 1)
        throw ValidationError("propagate: stride must be >= 1");

    // orthonormal basis of span{minus, plus} for the orthogonal-subspace weight
    const bool  islands = observers.plus && observers.minus;
    StateVector b1, b2;
    if (islands)
    {
        b1 = *observers.minus;
        b2 = *observers.plus - b1 * b1.dot(*observers.plus);
        b2.normalize();
    }

    const double ell = ops.ell();
    auto observe     = [&](int kick, const StateVector& psi) {
        Observation o;
        o.kick   = kick;
        o.norm   = psi.norm();
        o.l_norm = angular_expectation(psi, ops) / ell;
        const double nan = std::numeric_limits< double >::quiet_NaN();
        o.p_plus         = observers.plus ? std::norm(observers.plus->dot(psi)) : nan;
        o.p_minus        = observers.minus ? std::norm(observers.minus->dot(psi)) : nan;
        o.p_orth = islands ? o.norm * o.norm - std::norm(b1.dot(psi)) - std::norm(b2.dot(psi)) : nan;
        return o;
    };

    std::vector< Observation > out;
    out.reserve(static_cast< std::size_t >(n_kicks / observers.stride) + 1);
    StateVector psi = state;
    StateVector next(psi.size());
    out.push_back(observe(0, psi));
    for (int k = 1; k <= n_kicks; ++k)
    {
        next.noalias() = fop.matrix * psi;
        psi.swap(next);
        if (k % observers.stride == 0)
            out.push_back(observe(k, psi));
    }
    return out;
}
} // namespace kicked_top
