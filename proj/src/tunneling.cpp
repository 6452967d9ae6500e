#include "kicked_top/tunneling.hpp"

#include "kicked_top/parallel.hpp"

#include <algorithm>
#include <limits>

namespace kicked_top
{
IslandStates island_states(const SystemParams& params)
{
    const auto pair = find_island_pair(params);
    if (!pair.found)
        throw NoIslandsError("island_states: no stable island pair at c_scaled = " +
                             std::to_string(params.c_scaled()) + ", v = " + std::to_string(params.v) +
                             " (outside the self-trapping regime)");
    return {coherent_state(params.N, pair.north.theta, pair.north.phi),
            coherent_state(params.N, pair.south.theta, pair.south.phi), pair.north, pair.south};
}

namespace
{
double wrap_signed(double d, double tau)
{
    const double period = 2.0 * pi / tau;
    d                   = std::fmod(d + 0.5 * period, period);
    if (d < 0.0)
        d += period;
    return d - 0.5 * period;
}

double period_from_splitting(double delta, double tau)
{
    return delta > 1e-14 ? 2.0 * pi / (delta * tau) : std::numeric_limits< double >::infinity();
}
} // namespace

TunnelingResult identify_doublet(const FloquetDecomposition& decomp, const StateVector& minus,
                                 double validity_threshold)
{
    if (minus.size() != decomp.states.rows())
        throw ValidationError("identify_doublet: state dimension mismatch");

    const VectorR overlaps = (decomp.states.adjoint() * minus).cwiseAbs2();
    const auto    dim      = decomp.size();

    TunnelingResult r;
    r.validity_threshold = validity_threshold;

    const bool labelled = std::any_of(decomp.parities.begin(), decomp.parities.end(),
                                      [](Parity p) { return p != Parity::none; });
    if (labelled)
    {
        for (Eigen::Index k = 0; k < dim; ++k)
        {
            auto& slot = decomp.parities[static_cast< std::size_t >(k)] == Parity::even ? r.plus_index : r.minus_index;
            if (slot < 0 || overlaps(k) > overlaps(slot))
                slot = k;
        }
    }
    else
    {
        for (Eigen::Index k = 0; k < dim; ++k)
        {
            if (r.plus_index < 0 || overlaps(k) > overlaps(r.plus_index))
            {
                r.minus_index = r.plus_index;
                r.plus_index  = k;
            }
            else if (r.minus_index < 0 || overlaps(k) > overlaps(r.minus_index))
                r.minus_index = k;
        }
    }
    if (r.plus_index < 0 || r.minus_index < 0)
        throw ValidationError("identify_doublet: need at least one state per parity sector");

    const double tau   = decomp.tau;
    r.eps_plus         = decomp.quasienergies[static_cast< std::size_t >(r.plus_index)];
    r.eps_minus        = decomp.quasienergies[static_cast< std::size_t >(r.minus_index)];
    r.delta_eps        = circular_distance(r.eps_plus, r.eps_minus, tau);
    r.signed_splitting = wrap_signed(r.eps_minus - r.eps_plus, tau);
    r.t_tunnel         = period_from_splitting(r.delta_eps, tau);
    r.censored         = std::isinf(r.t_tunnel);
    r.overlap_plus     = overlaps(r.plus_index);
    r.overlap_minus    = overlaps(r.minus_index);
    r.two_state_valid  = r.overlap_sum() >= validity_threshold;

    // reconstruction with the optimal relative phase: |a| + |b| combined coherently
    r.reconstruction_quality = 0.5 * std::pow(std::sqrt(r.overlap_plus) + std::sqrt(r.overlap_minus), 2);

    Eigen::Index third = -1;
    for (Eigen::Index k = 0; k < dim; ++k)
        if (k != r.plus_index && k != r.minus_index && (third < 0 || overlaps(k) > overlaps(third)))
            third = k;
    if (third >= 0)
    {
        ThirdLevel t;
        t.index       = third;
        t.quasienergy = decomp.quasienergies[static_cast< std::size_t >(third)];
        t.overlap     = overlaps(third);
        t.delta_eps   = std::min(circular_distance(t.quasienergy, r.eps_plus, tau),
                                 circular_distance(t.quasienergy, r.eps_minus, tau));
        t.period      = period_from_splitting(t.delta_eps, tau);
        r.third_level = t;
    }
    return r;
}

std::pair< StateVector, StateVector > reconstruct_islands(const FloquetDecomposition& decomp,
                                                          const TunnelingResult& doublet, const StateVector& minus)
{
    const StateVector kp = decomp.states.col(doublet.plus_index);
    const StateVector km = decomp.states.col(doublet.minus_index);
    const Complex     a  = kp.dot(minus); // <kappa_+|->
    const Complex     b  = km.dot(minus);

    // align the two contributions to <-|psi_->
    Complex rel = 1.0;
    if (std::abs(a) > 0.0 && std::abs(b) > 0.0)
        rel = std::polar(1.0, std::arg(b) - std::arg(a));

    const double      h = std::sqrt(0.5);
    const StateVector psi_minus = h * (kp + rel * km);
    const StateVector psi_plus  = h * (kp - rel * km);
    return {psi_plus, psi_minus};
}

Vector3R two_level_prediction(const TunnelingResult& doublet, const SpinOperators& ops, const StateVector& minus,
                              const StateVector& plus, int n, double tau)
{
    const double phi = n * (doublet.eps_minus - doublet.eps_plus) * tau;
    const Vector3R l_plus  = angular_expectation(plus, ops);
    const Vector3R l_minus = angular_expectation(minus, ops);
    const Vector3R im_cross(plus.dot(ops.lx * minus).imag(), plus.dot(ops.ly * minus).imag(),
                            plus.dot(ops.lz * minus).imag());
    return 0.5 * (1.0 - std::cos(phi)) * l_plus + 0.5 * (1.0 + std::cos(phi)) * l_minus + std::sin(phi) * im_cross;
}

PropagationPeriod tunneling_period_from_propagation(const SystemParams& params, int max_kicks)
{
    if (max_kicks < 0)
        throw ValidationError("tunneling_period_from_propagation: max_kicks must be >= 0");

    const auto ops     = build_spin_operators(params.N);
    const auto islands = island_states(params);
    const auto fop     = floquet_operator(params, ops);

    PropagationPeriod out;
    StateVector psi = islands.minus;
    StateVector next(psi.size());
    double      best = -1.0;
    for (int k = 0; k <= max_kicks; ++k)
    {
        if (k > 0)
        {
            next.noalias() = fop.matrix * psi;
            psi.swap(next);
        }
        const double p_plus  = std::norm(islands.plus.dot(psi));
        const double p_minus = std::norm(islands.minus.dot(psi));
        if (out.censored)
        {
            if (p_plus <= p_minus)
                continue;
            out.censored = false;
        }
        if (p_plus > best)
        {
            best          = p_plus;
            out.peak_kick = k;
        }
        else if (p_plus < 0.5 * best)
        {
            out.period = 2.0 * out.peak_kick;
            return out;
        }
    }
    if (!out.censored)
    {
        out.truncated = true;
        out.period    = 2.0 * out.peak_kick;
    }
    else
        out.period = std::numeric_limits< double >::infinity();
    return out;
}

PointEvaluation evaluate_point(const SystemParams& params, const SpinOperators& ops, double validity_threshold)
{
    PointEvaluation e;
    const auto      pair = find_island_pair(params);
    if (!pair.found)
        return e;
    e.has_islands     = true;
    const auto minus  = coherent_state(params.N, pair.south.theta, pair.south.phi);
    const auto decomp = diagonalize_floquet(floquet_operator(params, ops), ops);
    e.tunneling       = identify_doublet(decomp, minus, validity_threshold);
    return e;
}

double log10_period(const PointEvaluation& e)
{
    if (!e.has_islands)
        return std::numeric_limits< double >::quiet_NaN();
    if (e.tunneling.censored)
        return std::numeric_limits< double >::infinity();
    return std::log10(e.tunneling.t_tunnel);
}

std::vector< SweepEvent > flag_dips(const SweepCurve& curve, int window, double decades)
{
    std::vector< SweepEvent > out;
    const auto                n = static_cast< int >(curve.points.size());
    auto                      value = [&](int i) { return log10_period(curve.points[static_cast< std::size_t >(i)].eval); };

    for (int i = 0; i < n; ++i)
    {
        const double y = value(i);
        if (!std::isfinite(y))
            continue;
        std::vector< double > around;
        bool                  local_min = true;
        for (int j = std::max(0, i - window); j <= std::min(n - 1, i + window); ++j)
        {
            if (j == i)
                continue;
            const double w = value(j);
            if (std::isnan(w))
                continue;
            around.push_back(w);
            if (std::abs(j - i) == 1 && w < y)
                local_min = false;
        }
        if (!local_min || around.size() < 2)
            continue;
        std::sort(around.begin(), around.end());
        const std::size_t mid    = around.size() / 2;
        const double      median = around.size() % 2 ? around[mid] : 0.5 * (around[mid - 1] + around[mid]);
        if (median - y < decades)
            continue;

        SweepEvent ev;
        ev.type          = "CAT";
        ev.param         = curve.points[static_cast< std::size_t >(i)].param;
        ev.depth_decades = median - y;
        // extent of the neighbourhood below the half-depth level
        const double level = y + 0.5 * ev.depth_decades;
        int          lo = i, hi = i;
        while (lo > 0 && value(lo - 1) < level)
            --lo;
        while (hi < n - 1 && value(hi + 1) < level)
            ++hi;
        ev.width = curve.points[static_cast< std::size_t >(hi)].param - curve.points[static_cast< std::size_t >(lo)].param;
        out.push_back(ev);
    }
    return out;
}

std::vector< SweepEvent > flag_sign_changes(const SweepCurve& curve, int window)
{
    std::vector< SweepEvent > out;
    const auto&               pts = curve.points;
    const auto                n   = static_cast< int >(pts.size());
    for (int i = 0; i + 1 < n; ++i)
    {
        const auto& a = pts[static_cast< std::size_t >(i)];
        const auto& b = pts[static_cast< std::size_t >(i + 1)];
        if (!a.eval.has_islands || !b.eval.has_islands)
            continue;
        const double da = a.eval.tunneling.signed_splitting;
        const double db = b.eval.tunneling.signed_splitting;
        const double hi = std::max(std::abs(da), std::abs(db));
        if (!(da * db < 0.0) || hi > 0.5 * pi / a.params.tau)
            continue;

        std::vector< double > around;
        for (int j = std::max(0, i - window); j <= std::min(n - 1, i + 1 + window); ++j)
            if (j != i && j != i + 1 && pts[static_cast< std::size_t >(j)].eval.has_islands)
                around.push_back(pts[static_cast< std::size_t >(j)].eval.tunneling.delta_eps);
        if (around.empty())
            continue;
        std::sort(around.begin(), around.end());
        const std::size_t mid    = around.size() / 2;
        const double      median = around.size() % 2 ? around[mid] : 0.5 * (around[mid - 1] + around[mid]);
        if (!(hi < median))
            continue;

        SweepEvent ev;
        ev.type  = "CDT";
        ev.param = a.param + (b.param - a.param) * da / (da - db);
        ev.width = b.param - a.param;
        out.push_back(ev);
    }
    return out;
}

namespace
{
SweepPoint make_point(double param, const SystemParams& p, const SpinOperators& ops, double threshold)
{
    SweepPoint pt;
    pt.param  = param;
    pt.params = p;
    pt.eval   = evaluate_point(p, ops, threshold);
    pt.gap    = !pt.eval.has_islands || !pt.eval.tunneling.two_state_valid;
    return pt;
}
} // namespace

SweepCurve sweep_over_N(double c_scaled, const std::vector< int >& n_values, const SystemParams& base,
                        const SweepOptions& options)
{
    if (n_values.empty())
        throw ValidationError("sweep_over_N: N range must be non-empty");
    for (std::size_t i = 0; i < n_values.size(); ++i)
    {
        if (n_values[i] < 1)
            throw ValidationError("sweep_over_N: N must be >= 1");
        if (i > 0 && n_values[i] <= n_values[i - 1])
            throw ValidationError("sweep_over_N: N values must be strictly increasing");
    }

    SweepCurve curve;
    curve.parameter = "N";
    curve.points    = parallel_map(n_values.size(), options.workers, [&](std::size_t i) {
        SystemParams p = base;
        p.N            = n_values[i];
        p              = p.with_c_scaled(c_scaled);
        return make_point(n_values[i], p, build_spin_operators(p.N), options.validity_threshold);
    });
    curve.events = flag_dips(curve, options.dip_window, options.dip_decades);
    return curve;
}

SweepCurve sweep_over_c(int N, const std::vector< double >& c_scaled_values, const SystemParams& base,
                        const SweepOptions& options)
{
    if (c_scaled_values.empty())
        throw ValidationError("sweep_over_c: c range must be non-empty");
    for (std::size_t i = 1; i < c_scaled_values.size(); ++i)
        if (!(c_scaled_values[i] > c_scaled_values[i - 1]))
            throw ValidationError("sweep_over_c: c values must be strictly increasing");

    SystemParams proto = base;
    proto.N            = N;
    proto.validate();
    const auto ops = build_spin_operators(N);

    SweepCurve curve;
    curve.parameter = "c_scaled";
    curve.points    = parallel_map(c_scaled_values.size(), options.workers, [&](std::size_t i) {
        return make_point(c_scaled_values[i], proto.with_c_scaled(c_scaled_values[i]), ops,
                          options.validity_threshold);
    });
    int window = options.dip_window;
    if (c_scaled_values.size() > 1)
    {
        const double step = (c_scaled_values.back() - c_scaled_values.front()) / (c_scaled_values.size() - 1);
        window = std::max(window, static_cast< int >(std::ceil(options.c_dip_window / step)));
    }
    curve.events = flag_sign_changes(curve, options.dip_window);
    for (auto& e : flag_dips(curve, window, options.dip_decades))
        curve.events.push_back(std::move(e));
    std::stable_sort(curve.events.begin(), curve.events.end(),
                     [](const SweepEvent& x, const SweepEvent& y) { return x.param < y.param; });
    return curve;
}
} // namespace kicked_top
