#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kicked_top/floquet.hpp"
#include "kicked_top/meanfield.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <random>

using namespace kicked_top;

namespace
{
SystemParams make(int N, double eps, double v, double c_scaled, double tau = 1.0)
{
    SystemParams p;
    p.N       = N;
    p.epsilon = eps;
    p.v       = v;
    p.tau     = tau;
    return p.with_c_scaled(c_scaled);
}

std::vector< Complex > sorted_eigenvalues(const MatrixC& m)
{
    const Eigen::ComplexEigenSolver< MatrixC > es(m);
    std::vector< Complex > ev(es.eigenvalues().begin(), es.eigenvalues().end());
    std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
    return ev;
}

// Largest distance from any eigenvalue of a to the nearest eigenvalue of b.
double spectral_distance(const MatrixC& a, const MatrixC& b)
{
    const auto ea = sorted_eigenvalues(a);
    const auto eb = sorted_eigenvalues(b);
    double     worst = 0.0;
    for (const auto x : ea)
    {
        double best = 1e300;
        for (const auto y : eb)
            best = std::min(best, std::abs(x - y));
        worst = std::max(worst, best);
    }
    return worst;
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

TEST_CASE("Hamiltonians")
{
    const auto ops = build_spin_operators(2);
    const auto h   = build_hamiltonians(make(2, 0.0, 1.0, 0.0), ops);
    CHECK(max_abs(h.h0 - ops.lx) == 0.0);
    CHECK(max_abs(h.v - MatrixC(Eigen::Vector3cd(-1, 0, -1).asDiagonal())) == 0.0);

    const auto ops5 = build_spin_operators(5);
    const auto h5   = build_hamiltonians(make(5, 2.0, 0.0, 0.0), ops5);
    for (int n = 0; n <= 5; ++n)
        CHECK(h5.h0(n, n).real() == doctest::Approx(2.0 * (n - 2.5)));
    CHECK(max_abs(MatrixC(h5.h0 - MatrixC(h5.h0.diagonal().asDiagonal()))) == 0.0);

    const auto hg = build_hamiltonians(make(5, 0.3, 0.7, 1.0), ops5);
    CHECK(max_abs(hg.h0 - hg.h0.adjoint()) < 1e-12);
    CHECK(max_abs(hg.v - hg.v.adjoint()) < 1e-12);
}

TEST_CASE("Floquet operator is unitary and commutes with R_x")
{
    for (const int N : {1, 2, 7, 20, 50})
        for (const double cs : {0.0, 1.0, 2.0, 3.5})
        {
            CAPTURE(N);
            CAPTURE(cs);
            const auto    ops = build_spin_operators(N);
            const auto    f   = floquet_operator(make(N, 0.0, 1.0, cs), ops);
            const MatrixC id  = MatrixC::Identity(N + 1, N + 1);
            CHECK(max_abs(f.matrix.adjoint() * f.matrix - id) < 1e-12);
            CHECK(max_abs(f.matrix * ops.rx - ops.rx * f.matrix) < 1e-12);
            const auto ft = floquet_operator(make(N, 0.4, 1.0, cs), ops);
            CHECK(max_abs(ft.matrix.adjoint() * ft.matrix - id) < 1e-12);
        }
}

TEST_CASE("c = 0 gives the free propagator")
{
    const auto ops = build_spin_operators(6);
    const auto p   = make(6, 0.3, 0.9, 0.0, 1.2);
    const auto h   = build_hamiltonians(p, ops);
    CHECK(max_abs(floquet_operator(p, ops).matrix - unitary_exponential(h.h0, p.tau)) < 1e-13);
}

TEST_CASE("N = 1, tau = pi closed form")
{
    const auto    ops = build_spin_operators(1);
    MatrixC       sx(2, 2);
    sx << 0, 1, 1, 0;
    for (const double c : {0.0, 0.37, 2.0})
    {
        SystemParams p;
        p.N   = 1;
        p.tau = pi;
        p.c   = c;
        const MatrixC expected = std::polar(1.0, c * pi / 4.0) * Complex(0.0, -1.0) * sx;
        CHECK(max_abs(floquet_operator(p, ops).matrix - expected) < 1e-12);
    }
}

TEST_CASE("agreement with the second-quantised single-particle propagator")
{
    std::mt19937                             rng(1);
    std::uniform_real_distribution< double > u(-1.5, 1.5);
    for (const int N : {1, 2, 3, 8, 15})
        for (int k = 0; k < 5; ++k)
        {
            CAPTURE(N);
            const auto p   = make(N, k == 0 ? 0.0 : u(rng), u(rng), 3.0 * u(rng), 0.3 + std::abs(u(rng)));
            const auto ops = build_spin_operators(N);
            const auto f   = floquet_operator(p, ops);
            const auto ref = oracle::floquet(p.epsilon, p.v, p.c, p.tau, N);
            CHECK(max_abs(f.matrix - ref) < 1e-11);

            const auto dec = diagonalize_floquet(f, ops);
            const auto ev  = sorted_eigenvalues(ref);
            for (Eigen::Index j = 0; j < dec.size(); ++j)
            {
                const Complex lambda = std::polar(1.0, -dec.quasienergies[static_cast< std::size_t >(j)] * p.tau);
                double        best   = 1e300;
                for (const auto e : ev)
                    best = std::min(best, std::abs(e - lambda));
                CHECK(best < 1e-10);
            }
        }
}

TEST_CASE("F and the swapped-order operator share their spectrum")
{
    std::mt19937                             rng(2);
    std::uniform_real_distribution< double > u(-2.0, 2.0);
    for (const int N : {1, 4, 20, 33})
        for (int k = 0; k < 3; ++k)
        {
            const auto p   = make(N, k == 0 ? 0.0 : u(rng), u(rng), 3.0 * u(rng), 0.5 + std::abs(u(rng)));
            const auto ops = build_spin_operators(N);
            const auto f   = floquet_operator(p, ops, FloquetVariant::kick_after_rotation);
            const auto ft  = floquet_operator(p, ops, FloquetVariant::rotation_after_kick);
            CHECK(ft.variant == FloquetVariant::rotation_after_kick);
            CHECK(spectral_distance(f.matrix, ft.matrix) < 1e-10);
            CHECK(spectral_distance(ft.matrix, f.matrix) < 1e-10);
        }
}

TEST_CASE("decomposition residuals, orthonormality and parity")
{
    for (const int N : {1, 2, 5, 20, 33, 60})
    {
        CAPTURE(N);
        const auto    ops = build_spin_operators(N);
        const auto    p   = make(N, 0.0, 1.0, 2.0);
        const auto    f   = floquet_operator(p, ops);
        const auto    dec = diagonalize_floquet(f, ops);
        const MatrixC id  = MatrixC::Identity(N + 1, N + 1);
        REQUIRE(dec.size() == N + 1);
        CHECK(max_abs(dec.states.adjoint() * dec.states - id) < 1e-10);

        int n_even = 0;
        for (Eigen::Index k = 0; k < dec.size(); ++k)
        {
            const auto    idx   = static_cast< std::size_t >(k);
            const VectorC state = dec.states.col(k);
            const Complex lambda = std::polar(1.0, -dec.quasienergies[idx] * p.tau);
            CHECK((f.matrix * state - lambda * state).norm() < 1e-10);
            CHECK(dec.quasienergies[idx] >= -pi / p.tau);
            CHECK(dec.quasienergies[idx] < pi / p.tau);

            const Complex unit   = N % 2 == 0 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
            const Complex rx_val = dec.parities[idx] == Parity::even ? unit : -unit;
            REQUIRE(dec.parities[idx] != Parity::none);
            CHECK((ops.rx * state - rx_val * state).norm() < 1e-10);
            n_even += dec.parities[idx] == Parity::even ? 1 : 0;
            if (k > 0 && dec.parities[idx] == dec.parities[idx - 1])
                CHECK(dec.quasienergies[idx] >= dec.quasienergies[idx - 1]);
        }
        CHECK(std::max(n_even, N + 1 - n_even) == (N + 2) / 2);
        CHECK(std::min(n_even, N + 1 - n_even) == (N + 1) / 2);
    }
}

TEST_CASE("broken symmetry reports no parity")
{
    const auto ops = build_spin_operators(10);
    const auto p   = make(10, 0.2, 1.0, 2.0);
    const auto f   = floquet_operator(p, ops);
    const auto dec = diagonalize_floquet(f, ops);
    for (Eigen::Index k = 0; k < dec.size(); ++k)
    {
        CHECK(dec.parities[static_cast< std::size_t >(k)] == Parity::none);
        const Complex lambda = std::polar(1.0, -dec.quasienergies[static_cast< std::size_t >(k)] * p.tau);
        CHECK((f.matrix * dec.states.col(k) - lambda * dec.states.col(k)).norm() < 1e-10);
    }
    CHECK(parity_label(Parity::none) == "none");
    CHECK(parity_label(Parity::even) == "+");
    CHECK(parity_label(Parity::odd) == "-");
}

TEST_CASE("non-unitary input is rejected")
{
    const auto ops = build_spin_operators(3);
    auto       f   = floquet_operator(make(3, 0.0, 1.0, 1.0), ops);
    f.matrix *= 1.01;
    CHECK_THROWS_AS(diagonalize_floquet(f, ops), NumericalError);
    CHECK_THROWS_AS(diagonalize_floquet(f, build_spin_operators(4)), ValidationError);
}

TEST_CASE("integrable quasi-energies are folded multiples of v")
{
    for (const double tau : {1.0, 2.5})
    {
        const int  N   = 12;
        const auto ops = build_spin_operators(N);
        const auto p   = make(N, 0.0, 1.0, 0.0, tau);
        const auto dec = diagonalize_floquet(floquet_operator(p, ops), ops);
        std::vector< double > expected;
        for (int k = 0; k <= N; ++k)
        {
            const double m = k - 0.5 * N;
            expected.push_back(quasienergy_from_eigenvalue(std::polar(1.0, -m * tau), tau));
        }
        auto got = dec.quasienergies;
        std::sort(got.begin(), got.end());
        std::sort(expected.begin(), expected.end());
        for (std::size_t k = 0; k < got.size(); ++k)
            CHECK(got[k] == doctest::Approx(expected[k]).epsilon(1e-10));
    }
}

TEST_CASE("quasi-energy branch and circular distance")
{
    CHECK(quasienergy_from_eigenvalue(Complex(1.0, 0.0), 1.0) == 0.0);
    CHECK(quasienergy_from_eigenvalue(Complex(-1.0, 0.0), 1.0) == doctest::Approx(-pi));
    CHECK(quasienergy_from_eigenvalue(Complex(-1.0, -0.0), 2.0) == doctest::Approx(-pi / 2.0));
    CHECK(quasienergy_from_eigenvalue(Complex(0.0, 1.0), 1.0) == doctest::Approx(-pi / 2.0));
    CHECK(circular_distance(pi - 0.1, -pi + 0.1, 1.0) == doctest::Approx(0.2));
    CHECK(circular_distance(0.3, 0.3 + 2.0 * pi, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Heisenberg conjugation closed forms at epsilon = 0")
{
    for (const auto& [N, cs, tau] : {std::tuple{4, 1.0, 1.0}, std::tuple{20, 2.0, 1.0}, std::tuple{9, 3.5, 0.7}})
    {
        CAPTURE(N);
        const auto ops = build_spin_operators(N);
        const auto p   = make(N, 0.0, 1.0, cs, tau);
        const auto f   = floquet_operator(p, ops);
        const double  st = std::sin(p.v * tau), ct = std::cos(p.v * tau);

        const MatrixC lz_out = heisenberg_conjugate(f, ops.lz);
        CHECK(max_abs(lz_out - (st * ops.ly + ct * ops.lz)) < 1e-10);
        CHECK(max_abs(lz_out - lz_out.adjoint()) < 1e-12);

        // L+ picks up exp(-i c tau (1 + 2 F^dag lz F)) from the kick
        const MatrixC id   = MatrixC::Identity(N + 1, N + 1);
        const MatrixC head = ops.lx + Complex(0.0, 1.0) * (ct * ops.ly - st * ops.lz);
        const MatrixC gen  = id + 2.0 * st * ops.ly + 2.0 * ct * ops.lz;
        const MatrixC raised = head * unitary_exponential(gen, p.c * tau);
        const MatrixC lx_closed = 0.5 * (raised + raised.adjoint());
        const MatrixC lx_out    = heisenberg_conjugate(f, ops.lx);
        CHECK(max_abs(lx_out - lx_closed) < 1e-9);
        CHECK(max_abs(lx_out - lx_out.adjoint()) < 1e-12);

        const MatrixC ly_closed = Complex(0.0, -0.5) * (raised - raised.adjoint());
        CHECK(max_abs(heisenberg_conjugate(f, ops.ly) - ly_closed) < 1e-9);

        CHECK(max_abs(heisenberg_conjugate(f, id) - id) < 1e-12);
    }
    const auto ops = build_spin_operators(3);
    CHECK_THROWS_AS(heisenberg_conjugate(floquet_operator(make(3, 0.0, 1.0, 1.0), ops), MatrixC::Identity(2, 2)),
                    ValidationError);
}

TEST_CASE("propagation records and conserves the norm")
{
    const int  N   = 20;
    const auto ops = build_spin_operators(N);
    const auto f   = floquet_operator(make(N, 0.0, 1.0, 3.5), ops);
    std::mt19937 rng(3);
    const auto   psi = random_state(N, rng);

    const auto only = propagate(psi, f, ops, 0);
    REQUIRE(only.size() == 1);
    CHECK(only[0].kick == 0);
    CHECK(std::isnan(only[0].p_plus));
    CHECK(std::isnan(only[0].p_orth));

    const auto series = propagate(psi, f, ops, 10000);
    REQUIRE(series.size() == 10001);
    for (const auto& o : series)
        CHECK(std::abs(o.norm - 1.0) < 1e-10);

    Observers obs;
    obs.stride = 7;
    obs.minus  = coherent_state(N, 1.0, 0.3);
    obs.plus   = coherent_state(N, pi - 1.0, -0.3);
    const auto strided = propagate(obs.minus.value(), f, ops, 100, obs);
    REQUIRE(strided.size() == 15);
    CHECK(strided[1].kick == 7);
    CHECK(strided[0].p_minus == doctest::Approx(1.0));
    for (const auto& o : strided)
    {
        CHECK(o.p_orth >= -1e-12);
        CHECK(o.p_orth <= 1.0 + 1e-12);
    }
    CHECK_THROWS_AS(propagate(psi, f, ops, -1), ValidationError);
    obs.stride = 0;
    CHECK_THROWS_AS(propagate(psi, f, ops, 3, obs), ValidationError);
}

TEST_CASE("many-particle and mean-field dynamics agree without interaction")
{
    std::mt19937                             rng(4);
    std::uniform_real_distribution< double > u(-1.5, 1.5), th(0.0, pi);
    for (const int N : {1, 6, 25})
        for (int k = 0; k < 4; ++k)
        {
            const auto   p   = make(N, u(rng), u(rng), 0.0, 0.5 + std::abs(u(rng)));
            const auto   ops = build_spin_operators(N);
            const double t0 = th(rng), p0 = 2.0 * u(rng);
            const auto   series = propagate(coherent_state(N, t0, p0), floquet_operator(p, ops), ops, 200);
            const auto   orbit  = iterate_map(bloch_from_angles(p.s(), t0, p0), p, 200);
            for (std::size_t m = 0; m < series.size(); ++m)
                CHECK((series[m].l_norm - orbit[m] / p.s()).norm() < 1e-8);
        }
}
