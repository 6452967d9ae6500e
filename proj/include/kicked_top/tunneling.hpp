#ifndef KICKED_TOP_TUNNELING_HPP
#define KICKED_TOP_TUNNELING_HPP

#include "kicked_top/fixed_points.hpp"
#include "kicked_top/floquet.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kicked_top
{
/// No pair of stable self-trapping islands exists for the given parameters.
class NoIslandsError : public ValidationError
{
public:
    using ValidationError::ValidationError;
};

inline constexpr double default_validity_threshold = 0.85;

struct IslandStates
{
    StateVector plus;  // coherent state on the northern island
    StateVector minus; // coherent state on the southern island
    FixedPoint  north;
    FixedPoint  south;
};

/// Throws NoIslandsError when the mean-field map has no stable island pair.
IslandStates island_states(const SystemParams& params);

struct ThirdLevel
{
    Eigen::Index index       = -1;
    double       quasienergy = 0.0;
    double       overlap     = 0.0; // |<kappa_c|->|^2
    double       delta_eps   = 0.0; // circular distance to the nearest doublet member
    double       period      = 0.0; // 2 pi / (delta_eps tau), in units of tau
};

/// Doublet analysis for one parameter point.
///
/// `plus`/`minus` refer to the even/odd parity members |kappa_+>, |kappa_->.
/// For epsilon != 0 they are simply the two largest overlaps, in that order.
/// Periods are given in units of tau.
struct TunnelingResult
{
    Eigen::Index plus_index  = -1;
    Eigen::Index minus_index = -1;
    double       eps_plus    = 0.0;
    double       eps_minus   = 0.0;
    double       delta_eps   = 0.0; // circular splitting, in [0, pi/tau]
    double       signed_splitting = 0.0; // eps_minus - eps_plus wrapped into [-pi/tau, pi/tau)
    double       t_tunnel    = 0.0; // +inf when censored
    bool         censored    = false;
    double       overlap_plus  = 0.0; // |<kappa_+|->|^2
    double       overlap_minus = 0.0; // |<kappa_-|->|^2
    double       reconstruction_quality = 0.0; // |<-|psi_->|^2
    bool         two_state_valid = false;
    double       validity_threshold = default_validity_threshold;
    std::optional< ThirdLevel > third_level;

    [[nodiscard]] double overlap_sum() const { return overlap_plus + overlap_minus; }
};

TunnelingResult identify_doublet(const FloquetDecomposition& decomp, const StateVector& minus,
                                 double validity_threshold = default_validity_threshold);

/// |psi_+-> = (|kappa_+> -+ e^{i alpha}|kappa_->)/sqrt(2), alpha chosen to
/// maximise |<-|psi_->|^2. Returns (psi_plus, psi_minus).
std::pair< StateVector, StateVector > reconstruct_islands(const FloquetDecomposition& decomp,
                                                          const TunnelingResult& doublet, const StateVector& minus);

/// Two-level prediction of <L(n tau)> for a start in `minus`:
/// (1 - cos phi)/2 L_+ + (1 + cos phi)/2 L_- + sin(phi) Im <+|L|->,
/// phi = n (eps_minus - eps_plus) tau.
Vector3R two_level_prediction(const TunnelingResult& doublet, const SpinOperators& ops, const StateVector& minus,
                              const StateVector& plus, int n, double tau);

struct PropagationPeriod
{
    double period       = 0.0; // 2 x kick of the first population maximum on |+>
    int    peak_kick    = -1;
    bool   censored     = true; // no transfer (p_plus > p_minus) within max_kicks
    bool   truncated    = false; // transfer seen, but the record ended before p_plus fell back
};

/// Propagates |-> and returns twice the kick at which the first transfer
/// episode peaks. The episode starts at the first kick with p_plus > p_minus
/// and ends once p_plus has dropped below half of its running maximum.
PropagationPeriod tunneling_period_from_propagation(const SystemParams& params, int max_kicks);

/// Full per-point pipeline: fixed points -> islands -> Floquet -> doublet.
struct PointEvaluation
{
    bool            has_islands = false;
    TunnelingResult tunneling;
};

PointEvaluation evaluate_point(const SystemParams& params, const SpinOperators& ops,
                               double validity_threshold = default_validity_threshold);

struct SweepEvent
{
    std::string type; // "CDT" or "CAT"
    double      param = 0.0;
    double      width = 0.0;
    double      depth_decades = 0.0; // CAT: dip below the local baseline
    double      min_same_parity_gap = 0.0; // CAT: closest same-parity level to the doublet
};

struct SweepPoint
{
    double          param = 0.0;
    SystemParams    params;
    PointEvaluation eval;
    bool            gap = true; // no islands or two-state approximation invalid
};

struct SweepCurve
{
    std::string               parameter; // "N", "c_scaled" or "v"
    std::vector< SweepPoint > points;
    std::vector< SweepEvent > events;
};

struct SweepOptions
{
    int    workers            = 1;
    double validity_threshold = default_validity_threshold;
    int    dip_window         = 3;   // points on each side for the median baseline
    double c_dip_window       = 0.1; // sweep_over_c: baseline half-width in c_scaled, if wider than dip_window
    double dip_decades        = 0.5; // minimum dip depth to flag a resonance
};

/// c = c_scaled / (N + 1) for every N in the range. Resonance dips are
/// flagged as CAT events.
SweepCurve sweep_over_N(double c_scaled, const std::vector< int >& n_values, const SystemParams& base,
                        const SweepOptions& options = {});

/// Tunneling analysis along c_scaled at fixed N (values strictly increasing).
/// Events: CAT dips from flag_dips and CDT candidates from flag_sign_changes.
SweepCurve sweep_over_c(int N, const std::vector< double >& c_scaled_values, const SystemParams& base,
                        const SweepOptions& options = {});

/// log10 of T_tunnel, +inf when censored, NaN without islands.
double log10_period(const PointEvaluation& e);

/// Points whose log10 T lies at least `decades` below the median of the
/// surrounding window and which are local minima.
std::vector< SweepEvent > flag_dips(const SweepCurve& curve, int window, double decades);

/// Neighbouring points across which the signed doublet splitting changes sign
/// while both splittings stay below the median splitting of the surrounding
/// window; a jump caused by a change of doublet partner fails that test. The
/// event sits at the linear zero, its width is the grid step.
std::vector< SweepEvent > flag_sign_changes(const SweepCurve& curve, int window);
} // namespace kicked_top

#endif // KICKED_TOP_TUNNELING_HPP
