#ifndef KICKED_TOP_MEANFIELD_HPP
#define KICKED_TOP_MEANFIELD_HPP

#include "kicked_top/types.hpp"

#include <utility>
#include <vector>

namespace kicked_top
{
template < typename Scalar >
using BlochVector = Eigen::Matrix< Scalar, 3, 1 >;

template < typename Scalar >
using Matrix3 = Eigen::Matrix< Scalar, 3, 3 >;

/// Free evolution between kicks: rotation by omega*tau about the axis
/// (v, 0, epsilon)/omega. Returns the identity when omega == 0.
template < typename Scalar >
Matrix3< Scalar > rotation_matrix(Scalar epsilon, Scalar v, Scalar tau)
{
    using std::cos;
    using std::sin;
    using std::sqrt;

    const Scalar omega2 = epsilon * epsilon + v * v;
    if (omega2 == Scalar(0))
        return Matrix3< Scalar >::Identity();

    const Scalar omega = sqrt(omega2);
    const Scalar co    = cos(omega * tau);
    const Scalar si    = sin(omega * tau);
    const Scalar ex    = epsilon / omega;
    const Scalar vx    = v / omega;

    Matrix3< Scalar > r;
    r << vx * vx + ex * ex * co, -ex * si, ex * vx * (Scalar(1) - co),
         ex * si,                co,       -vx * si,
         ex * vx * (Scalar(1) - co), vx * si, ex * ex + vx * vx * co;
    return r;
}

inline Matrix3R rotation_matrix(const SystemParams& p)
{
    return rotation_matrix< double >(p.epsilon, p.v, p.tau);
}

/// True when there is no dynamics between kicks (omega == 0); the rotation
/// matrix is then the identity.
inline bool rotation_is_degenerate(const SystemParams& p)
{
    return p.omega() == 0.0;
}

/// Interaction kick: rotation about z by -2 c tau sz, sz untouched.
template < typename Scalar >
Matrix3< Scalar > torsion_matrix(Scalar c, Scalar tau, Scalar sz)
{
    using std::cos;
    using std::sin;
    const Scalar a  = Scalar(2) * c * tau * sz;
    const Scalar co = cos(a);
    const Scalar si = sin(a);

    Matrix3< Scalar > k;
    k << co, si, Scalar(0),
        -si, co, Scalar(0),
         Scalar(0), Scalar(0), Scalar(1);
    return k;
}

/// Stroboscopic mean-field map s -> K(z) R s, with z the z-component of R s.
///
/// The rotation is computed once, so repeated application (trajectories,
/// Newton iterations) only pays for the torsion.
template < typename Scalar >
class KickMap
{
public:
    KickMap(Scalar epsilon, Scalar v, Scalar c, Scalar tau)
        : rotation_(rotation_matrix< Scalar >(epsilon, v, tau)), c_(c), tau_(tau)
    {}

    explicit KickMap(const SystemParams& p)
        : KickMap(Scalar(p.epsilon), Scalar(p.v), Scalar(p.c), Scalar(p.tau))
    {}

    BlochVector< Scalar > operator()(const BlochVector< Scalar >& s) const
    {
        const BlochVector< Scalar > rotated = rotation_ * s;
        return torsion_matrix< Scalar >(c_, tau_, rotated.z()) * rotated;
    }

    /// Derivative of the map with respect to s (3x3, ambient coordinates).
    Matrix3< Scalar > jacobian(const BlochVector< Scalar >& s) const
    {
        using std::cos;
        using std::sin;
        const BlochVector< Scalar > y = rotation_ * s;
        const Scalar                a = Scalar(2) * c_ * tau_ * y.z();
        const Scalar                k = Scalar(2) * c_ * tau_;

        // d(K(z) y)/dy = K(z) + (dK/dz y) e_z^T
        Matrix3< Scalar > dk = torsion_matrix< Scalar >(c_, tau_, y.z());
        dk(0, 2) += k * (-sin(a) * y.x() + cos(a) * y.y());
        dk(1, 2) += k * (-cos(a) * y.x() - sin(a) * y.y());
        return dk * rotation_;
    }

    const Matrix3< Scalar >& rotation() const { return rotation_; }

private:
    Matrix3< Scalar > rotation_;
    Scalar            c_;
    Scalar            tau_;
};

inline Vector3R kick_map(const Vector3R& s, const SystemParams& p)
{
    return KickMap< double >(p)(s);
}

/// Trajectory of length n_kicks + 1 starting with s0.
template < typename Scalar >
std::vector< BlochVector< Scalar > > iterate_map(const BlochVector< Scalar >& s0, const KickMap< Scalar >& map,
                                                 int n_kicks)
{
    if (n_kicks < 0)
        throw ValidationError("iterate_map: n_kicks must be >= 0");
    std::vector< BlochVector< Scalar > > out;
    out.reserve(static_cast< std::size_t >(n_kicks) + 1);
    out.push_back(s0);
    for (int k = 0; k < n_kicks; ++k)
        out.push_back(map(out.back()));
    return out;
}

inline std::vector< Vector3R > iterate_map(const Vector3R& s0, const SystemParams& p, int n_kicks)
{
    return iterate_map< double >(s0, KickMap< double >(p), n_kicks);
}

/// Point of radius `radius` in direction (theta, phi).
template < typename Scalar >
BlochVector< Scalar > bloch_from_angles(Scalar radius, Scalar theta, Scalar phi)
{
    using std::cos;
    using std::sin;
    return radius * BlochVector< Scalar >(sin(theta) * cos(phi), sin(theta) * sin(phi), cos(theta));
}

/// theta in [0, pi], phi in [-pi, pi).
std::pair< double, double > angles_from_bloch(const Vector3R& s);

struct PortraitPoint
{
    int      seed_id;
    int      kick_index;
    double   theta;
    double   phi;
    Vector3R s;
};

/// Union of stroboscopic orbits, ordered by seed index then kick index.
std::vector< PortraitPoint > phase_portrait(const SystemParams& params,
                                            const std::vector< std::pair< double, double > >& seeds, int n_kicks);

/// Open interval of raw c for which (-s, 0, 0) is linearly stable at the
/// given v, tau (epsilon = 0). Throws std::domain_error when sin(v tau) = 0.
std::pair< double, double > stability_interval(const SystemParams& params);

struct MeanFieldWave
{
    Complex psi1;
    Complex psi2;
};

Vector3R      bloch_from_wave(const MeanFieldWave& psi);
MeanFieldWave wave_from_bloch(const Vector3R& s);

/// Right-hand side of the discrete GPE with a continuous interaction c.
MeanFieldWave gpe_rhs(const MeanFieldWave& psi, double epsilon, double v, double c);

/// Nonlinear Bloch equations with continuous interaction c.
Vector3R bloch_rhs(const Vector3R& s, double epsilon, double v, double c);

/// Fixed-step RK4 integration of the linear two-level equation (no
/// interaction) over time t. The number of steps is ceil(t / dt).
MeanFieldWave gpe_oracle_evolve(const MeanFieldWave& psi, const SystemParams& params, double t, double dt);
} // namespace kicked_top

#endif // KICKED_TOP_MEANFIELD_HPP
