#include "kicked_top/fixed_points.hpp"

#include <algorithm>

namespace kicked_top
{
namespace
{
// Orthonormal basis of the plane orthogonal to the unit vector p.
Eigen::Matrix< double, 3, 2 > tangent_basis(const Vector3R& p)
{
    Eigen::Index axis = 0;
    p.cwiseAbs().minCoeff(&axis);
    const Vector3R e1 = Vector3R::Unit(axis).cross(p).normalized();
    const Vector3R e2 = p.cross(e1);
    Eigen::Matrix< double, 3, 2 > basis;
    basis << e1, e2;
    return basis;
}

// Inverse stereographic chart centred on the unit vector p, radius r.
// Maps u = 0 to r p with unit derivative r E.
Vector3R chart(const Vector3R& p, const Eigen::Matrix< double, 3, 2 >& basis, const Eigen::Vector2d& u, double r)
{
    const double q = u.squaredNorm();
    return r * ((4.0 - q) * p + 4.0 * (basis * u)) / (4.0 + q);
}

double angular_distance(const Vector3R& a, const Vector3R& b)
{
    return std::atan2(a.cross(b).norm(), a.dot(b));
}
} // namespace

std::array< Complex, 2 > tangent_multipliers(const KickMap< double >& map, const Vector3R& s)
{
    const auto            basis = tangent_basis(s.normalized());
    const Eigen::Matrix2d m     = basis.transpose() * map.jacobian(s) * basis;

    const double half_tr = 0.5 * m.trace();
    const double det     = m.determinant();
    const Complex root   = std::sqrt(Complex(half_tr * half_tr - det, 0.0));
    return {half_tr + root, half_tr - root};
}

FixedPointSearch find_fixed_points(const SystemParams& params, const FixedPointOptions& options)
{
    params.validate();
    if (options.n_theta < 1 || options.n_phi < 1)
        throw ValidationError("find_fixed_points: start grid must be non-empty");

    const KickMap< double > map(params);
    const double            r   = params.s();
    const double            tol = options.tolerance * r;

    FixedPointSearch result;
    for (int i = 0; i < options.n_theta; ++i)
    {
        // open grid in theta, the poles are reached by Newton if they are fixed
        const double theta0 = pi * (i + 0.5) / options.n_theta;
        for (int j = 0; j < options.n_phi; ++j)
        {
            const double phi0 = -pi + 2.0 * pi * j / options.n_phi;
            Vector3R     x    = bloch_from_angles(r, theta0, phi0);

            double residual = (map(x) - x).norm();
            for (int it = 0; it < options.max_iter && residual > tol; ++it)
            {
                const Vector3R p     = x / r;
                const auto     basis = tangent_basis(p);
                const Vector3R g     = map(x) - x;

                const Eigen::Matrix< double, 3, 2 > jac =
                    (map.jacobian(x) - Matrix3R::Identity()) * basis * r;
                Eigen::Vector2d step = jac.colPivHouseholderQr().solve(-g);
                if (!step.allFinite())
                    break;
                const double len = step.norm();
                if (len > 0.5)
                    step *= 0.5 / len;

                x        = chart(p, basis, step, r);
                residual = (map(x) - x).norm();
            }

            if (residual > tol)
            {
                if (residual < 1e-4 * r)
                    ++result.stagnated;
                continue;
            }

            // re-project onto the sphere; the chart already keeps |x| = r up to rounding
            x *= r / x.norm();

            const bool duplicate = std::any_of(result.points.begin(), result.points.end(), [&](const FixedPoint& q) {
                return angular_distance(q.s, x) < options.merge_radius;
            });
            if (duplicate)
                continue;

            FixedPoint fp;
            fp.s                        = x;
            std::tie(fp.theta, fp.phi)  = angles_from_bloch(x);
            fp.residual                 = (map(x) - x).norm();
            fp.multipliers              = tangent_multipliers(map, x);
            fp.stable = std::abs(fp.multipliers[0]) <= 1.0 + options.stable_slack &&
                        std::abs(fp.multipliers[1]) <= 1.0 + options.stable_slack;
            result.points.push_back(fp);
        }
    }

    std::sort(result.points.begin(), result.points.end(), [](const FixedPoint& a, const FixedPoint& b) {
        return a.theta != b.theta ? a.theta < b.theta : a.phi < b.phi;
    });
    return result;
}

IslandPair find_island_pair(const SystemParams& params, const FixedPointOptions& options)
{
    const auto   search = find_fixed_points(params, options);
    const double r      = params.s();
    const double off    = 1e-6 * r;

    IslandPair best;
    for (const auto& south : search.points)
    {
        if (!south.stable || south.s.z() >= -off)
            continue;
        if (best.found && south.s.z() >= best.south.s.z())
            continue;

        // partner: the parity image (sx, -sy, -sz) when epsilon = 0,
        // otherwise the most northern stable point
        const FixedPoint* north = nullptr;
        for (const auto& q : search.points)
        {
            if (!q.stable || q.s.z() <= off)
                continue;
            if (params.symmetric())
            {
                const Vector3R image(south.s.x(), -south.s.y(), -south.s.z());
                if (angular_distance(q.s, image) < 1e3 * options.merge_radius)
                {
                    north = &q;
                    break;
                }
            }
            else if (north == nullptr || q.s.z() > north->s.z())
                north = &q;
        }
        if (north == nullptr)
            continue;
        best = {true, south, *north};
    }
    return best;
}
} // namespace kicked_top
