#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kicked_top/spin_algebra.hpp"

#include <random>

using namespace kicked_top;

namespace
{
MatrixC comm(const MatrixC& a, const MatrixC& b) { return a * b - b * a; }

// Products of entries ~ell^2 round at ~1e-12 in double; the algebra check is
// evaluated in long double so it measures the matrices, not the check.
using MatrixL = Eigen::Matrix< std::complex< long double >, Eigen::Dynamic, Eigen::Dynamic >;

double algebra_residual(const MatrixC& a, const MatrixC& b, const MatrixC& expected)
{
    const MatrixL al = a.cast< std::complex< long double > >();
    const MatrixL bl = b.cast< std::complex< long double > >();
    const MatrixL r  = al * bl - bl * al - expected.cast< std::complex< long double > >();
    return static_cast< double >(r.cwiseAbs().maxCoeff());
}

StateVector random_state(int N, std::mt19937& rng)
{
    std::normal_distribution< double > g;
    StateVector                        s(N + 1);
    for (auto& x : s)
        x = Complex(g(rng), g(rng));
    return s / s.norm();
}
} // namespace

TEST_CASE("spin-1/2 representation is Pauli/2")
{
    const auto ops = build_spin_operators(1);
    MatrixC    sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    // Fock order n = 0, 1 is m = -1/2, +1/2, the reverse of the usual Pauli basis
    sy << 0, Complex(0, 1), Complex(0, -1), 0;
    sz << -1, 0, 0, 1;
    CHECK(max_abs(ops.lx - 0.5 * sx) < 1e-15);
    CHECK(max_abs(ops.ly - 0.5 * sy) < 1e-15);
    CHECK(max_abs(ops.lz - 0.5 * sz) < 1e-15);
}

TEST_CASE("lz is diag(n - N/2)")
{
    const auto ops = build_spin_operators(2);
    CHECK(ops.lz(0, 0).real() == -1.0);
    CHECK(ops.lz(1, 1).real() == 0.0);
    CHECK(ops.lz(2, 2).real() == 1.0);
    CHECK(max_abs(ops.lz - MatrixC(ops.lz.diagonal().asDiagonal())) == 0.0);
}

TEST_CASE("su(2) commutators, hermiticity and Casimir up to N = 200")
{
    for (const int N : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 51, 99, 100, 150, 199, 200})
    {
        CAPTURE(N);
        const auto   ops = build_spin_operators(N);
        const double ell = ops.ell();
        const Complex i(0.0, 1.0);
        CHECK(max_abs(ops.lx - ops.lx.adjoint()) < 1e-12);
        CHECK(max_abs(ops.ly - ops.ly.adjoint()) < 1e-12);
        CHECK(max_abs(ops.lz - ops.lz.adjoint()) < 1e-12);
        CHECK(algebra_residual(ops.lx, ops.ly, i * ops.lz) < 1e-12);
        CHECK(algebra_residual(ops.ly, ops.lz, i * ops.lx) < 1e-12);
        CHECK(algebra_residual(ops.lz, ops.lx, i * ops.ly) < 1e-12);
        const MatrixC casimir = ops.lx * ops.lx + ops.ly * ops.ly + ops.lz * ops.lz;
        CHECK(max_abs(casimir - ell * (ell + 1.0) * MatrixC::Identity(N + 1, N + 1)) < 1e-10);
    }
}

TEST_CASE("N = 20 commutator below 1e-12")
{
    const auto ops = build_spin_operators(20);
    CHECK(max_abs(comm(ops.lx, ops.ly) - Complex(0, 1) * ops.lz) < 1e-12);
}

TEST_CASE("parity rotation is unitary and squares to +-1")
{
    for (const int N : {1, 2, 5, 10, 33})
    {
        CAPTURE(N);
        const auto    ops = build_spin_operators(N);
        const MatrixC id  = MatrixC::Identity(N + 1, N + 1);
        CHECK(max_abs(ops.rx.adjoint() * ops.rx - id) < 1e-12);
        CHECK(max_abs(ops.rx * ops.rx - (N % 2 == 0 ? 1.0 : -1.0) * id) < 1e-12);
    }
}

TEST_CASE("parity rotation maps |n> to |N-n> up to phase")
{
    const auto ops = build_spin_operators(6);
    for (int n = 0; n <= 6; ++n)
        CHECK(std::abs(fock_state(6, 6 - n).dot(ops.rx * fock_state(6, n))) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bad N is rejected")
{
    CHECK_THROWS_AS(build_spin_operators(0), ValidationError);
    CHECK_THROWS_AS(coherent_state(0, 0.1, 0.2), ValidationError);
    CHECK_THROWS_AS(fock_state(3, 4), ValidationError);
}

TEST_CASE("coherent states at the poles")
{
    const int N = 7;
    CHECK(std::abs(coherent_state(N, 0.0, 1.3).dot(fock_state(N, N))) == doctest::Approx(1.0));
    const auto south = coherent_state(N, pi, 0.9);
    CHECK(std::abs(south(0)) == doctest::Approx(1.0));
    // global phase e^{i N phi}
    CHECK(std::arg(south(0)) == doctest::Approx(std::arg(std::polar(1.0, N * 0.9))));
}

TEST_CASE("coherent state norm and <Lz>")
{
    const auto ops = build_spin_operators(10);
    const auto s   = coherent_state(10, pi / 3, 0.7);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(angular_expectation(s, ops).z() == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("coherent state expectation lies on the sphere of radius N/2")
{
    std::mt19937                             rng(7);
    std::uniform_real_distribution< double > th(0.0, pi), ph(-pi, pi);
    for (const int N : {1, 4, 17, 40})
        for (int k = 0; k < 10; ++k)
        {
            const double   t = th(rng), p = ph(rng);
            const auto     ops = build_spin_operators(N);
            const Vector3R l   = angular_expectation(coherent_state(N, t, p), ops);
            const Vector3R ref = 0.5 * N * Vector3R(std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t));
            CHECK((l - ref).norm() < 1e-10);
        }
}

TEST_CASE("expectation of Fock states and cat states")
{
    const auto ops = build_spin_operators(4);
    CHECK((angular_expectation(fock_state(4, 4), ops) - Vector3R(0, 0, 2)).norm() < 1e-14);
    const StateVector cat = (fock_state(4, 0) + fock_state(4, 4)) / std::sqrt(2.0);
    CHECK(angular_expectation(cat, ops).norm() < 1e-14);
    CHECK_THROWS_AS(angular_expectation(fock_state(3, 0), ops), ValidationError);
}

TEST_CASE("|<L>| <= ell for random states")
{
    std::mt19937 rng(3);
    for (const int N : {2, 9, 30})
    {
        const auto ops = build_spin_operators(N);
        for (int k = 0; k < 20; ++k)
            CHECK(angular_expectation(random_state(N, rng), ops).norm() <= ops.ell() + 1e-12);
    }
}

TEST_CASE("parity maps coherent states to (pi - theta, -phi)")
{
    std::mt19937                             rng(11);
    std::uniform_real_distribution< double > th(0.0, pi), ph(-pi, pi);
    for (const int N : {3, 8, 20})
    {
        const auto ops = build_spin_operators(N);
        for (int k = 0; k < 10; ++k)
        {
            const double t = th(rng), p = ph(rng);
            const auto   image = coherent_state(N, pi - t, -p);
            CHECK(std::abs(image.dot(ops.rx * coherent_state(N, t, p))) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("Husimi of the north pole is cos^{2N}(theta/2)")
{
    const int  N    = 6;
    const auto grid = husimi(fock_state(N, N), 21, 10);
    CHECK(grid.thetas.front() == 0.0);
    CHECK(grid.thetas.back() == doctest::Approx(pi));
    CHECK(grid.phis.front() == doctest::Approx(-pi));
    CHECK(grid.phis.back() < pi);
    for (std::size_t i = 0; i < grid.thetas.size(); ++i)
        for (Eigen::Index j = 0; j < grid.values.cols(); ++j)
            CHECK(grid.values(static_cast< Eigen::Index >(i), j) ==
                  doctest::Approx(std::pow(std::cos(0.5 * grid.thetas[i]), 2 * N)).epsilon(1e-12));
}

TEST_CASE("Husimi maximum sits on the coherent-state centre")
{
    const int    N = 25;
    const double t0 = 1.1, p0 = -0.8;
    const auto   grid = husimi(coherent_state(N, t0, p0), 91, 180);
    Eigen::Index i = 0, j = 0;
    CHECK(grid.values.maxCoeff(&i, &j) <= 1.0 + 1e-12);
    CHECK(grid.values.minCoeff() >= 0.0);
    CHECK(std::abs(grid.thetas[static_cast< std::size_t >(i)] - t0) <= pi / 90 + 1e-12);
    CHECK(std::abs(grid.phis[static_cast< std::size_t >(j)] - p0) <= 2 * pi / 180 + 1e-12);
}

TEST_CASE("Husimi normalization on a 200 x 400 grid")
{
    std::mt19937 rng(5);
    for (const int N : {1, 10, 40})
    {
        CAPTURE(N);
        CHECK(husimi_normalization(husimi(random_state(N, rng), 200, 400), N) == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(husimi_normalization(husimi(coherent_state(N, 0.4, 2.0), 200, 400), N) ==
              doctest::Approx(1.0).epsilon(1e-3));
    }
    CHECK_THROWS_AS(husimi(fock_state(2, 0), 1, 10), ValidationError);
}

TEST_CASE("unitary exponential of a Hermitian matrix")
{
    const auto    ops = build_spin_operators(5);
    const MatrixC u   = unitary_exponential(ops.lz, 0.3);
    CHECK(max_abs(u.adjoint() * u - MatrixC::Identity(6, 6)) < 1e-14);
    for (int n = 0; n <= 5; ++n)
        CHECK(std::abs(u(n, n) - std::polar(1.0, -0.3 * (n - 2.5))) < 1e-14);
}
