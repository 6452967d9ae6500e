#include "kicked_top/meanfield.hpp"

#include <algorithm>
#include <stdexcept>

namespace kicked_top
{
std::pair< double, double > angles_from_bloch(const Vector3R& s)
{
    const double r     = s.norm();
    const double theta = std::acos(std::clamp(s.z() / r, -1.0, 1.0));
    double       phi   = std::atan2(s.y(), s.x());
    if (phi >= pi)
        phi -= 2.0 * pi;
    return {theta, phi};
}

std::vector< PortraitPoint > phase_portrait(const SystemParams& params,
                                            const std::vector< std::pair< double, double > >& seeds, int n_kicks)
{
    if (seeds.empty())
        throw ValidationError("phase_portrait: seeds must be non-empty");
    params.validate();

    const KickMap< double > map(params);
    std::vector< PortraitPoint > out;
    out.reserve(seeds.size() * (static_cast< std::size_t >(n_kicks) + 1));
    for (std::size_t id = 0; id < seeds.size(); ++id)
    {
        const auto [theta0, phi0] = seeds[id];
        const auto orbit          = iterate_map< double >(bloch_from_angles(params.s(), theta0, phi0), map, n_kicks);
        for (std::size_t k = 0; k < orbit.size(); ++k)
        {
            const auto [theta, phi] = angles_from_bloch(orbit[k]);
            out.push_back({static_cast< int >(id), static_cast< int >(k), theta, phi, orbit[k]});
        }
    }
    return out;
}

std::pair< double, double > stability_interval(const SystemParams& params)
{
    params.validate();
    if (!params.symmetric())
        throw ValidationError("stability_interval: (-s,0,0) is a fixed point only for epsilon = 0");

    const double vt = params.v * params.tau;
    const double si = std::sin(vt);
    const double co = std::cos(vt);
    if (std::abs(si) < 1e-14)
        throw std::domain_error("stability_interval: sin(v tau) = 0, interval undefined");

    // Half-trace of the tangent map at (-s,0,0) is cos(v tau) + c tau s sin(v tau).
    const double scale = params.s() * params.tau * si;
    const double a     = (-1.0 - co) / scale;
    const double b     = (1.0 - co) / scale;
    return si > 0.0 ? std::pair{a, b} : std::pair{b, a};
}

Vector3R bloch_from_wave(const MeanFieldWave& psi)
{
    const Complex cross = std::conj(psi.psi1) * psi.psi2;
    return {cross.real(), cross.imag(), 0.5 * (std::norm(psi.psi1) - std::norm(psi.psi2))};
}

MeanFieldWave wave_from_bloch(const Vector3R& s)
{
    const double  r = s.norm();
    const Complex transverse(s.x(), s.y()); // conj(psi1) psi2
    if (r + s.z() >= r - s.z())
    {
        const double p1 = std::sqrt(r + s.z());
        return {p1, transverse / p1};
    }
    const double p2 = std::sqrt(r - s.z());
    return {std::conj(transverse) / p2, p2};
}

MeanFieldWave gpe_rhs(const MeanFieldWave& psi, double epsilon, double v, double c)
{
    const double  kappa = std::norm(psi.psi2) - std::norm(psi.psi1);
    const double  d     = 0.5 * (epsilon + c * kappa);
    const Complex mi(0.0, -1.0);
    return {mi * (d * psi.psi1 + 0.5 * v * psi.psi2), mi * (0.5 * v * psi.psi1 - d * psi.psi2)};
}

Vector3R bloch_rhs(const Vector3R& s, double epsilon, double v, double c)
{
    return {-epsilon * s.y() + 2.0 * c * s.y() * s.z(), epsilon * s.x() - v * s.z() - 2.0 * c * s.x() * s.z(),
            v * s.y()};
}

MeanFieldWave gpe_oracle_evolve(const MeanFieldWave& psi, const SystemParams& params, double t, double dt)
{
    if (!(dt > 0.0))
        throw ValidationError("gpe_oracle_evolve: dt must be > 0");
    if (t < 0.0)
        throw ValidationError("gpe_oracle_evolve: t must be >= 0");

    const auto   steps = static_cast< long >(std::ceil(t / dt - 1e-12));
    const double h     = steps > 0 ? t / static_cast< double >(steps) : 0.0;

    auto axpy = [](const MeanFieldWave& a, double w, const MeanFieldWave& b) {
        return MeanFieldWave{a.psi1 + w * b.psi1, a.psi2 + w * b.psi2};
    };
    auto rhs = [&](const MeanFieldWave& x) { return gpe_rhs(x, params.epsilon, params.v, 0.0); };

    MeanFieldWave x = psi;
    for (long i = 0; i < steps; ++i)
    {
        const auto k1 = rhs(x);
        const auto k2 = rhs(axpy(x, 0.5 * h, k1));
        const auto k3 = rhs(axpy(x, 0.5 * h, k2));
        const auto k4 = rhs(axpy(x, h, k3));
        x.psi1 += h / 6.0 * (k1.psi1 + 2.0 * k2.psi1 + 2.0 * k3.psi1 + k4.psi1);
        x.psi2 += h / 6.0 * (k1.psi2 + 2.0 * k2.psi2 + 2.0 * k3.psi2 + k4.psi2);
    }
    return x;
}
} // namespace kicked_top
