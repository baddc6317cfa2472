#include "macrofield/analytic.hpp"

#include "macrofield/errors.hpp"

#include <cmath>
#include <numbers>

namespace macrofield {

namespace {

// Brackets of the closed form before the common factor exp(p_n t / 2).
State brackets(const AnalyticBranch& b, double t) {
    switch (b.kind) {
    case BranchKind::hyperbolic: {
        const double s = std::sqrt(-b.phi);
        const double ch = std::cosh(0.5 * s * t);
        const double sh = std::sinh(0.5 * s * t);
        return {b.Y0 * ch - b.p_n * (b.Y0 + 2.0 * b.K0) / s * sh,
                b.K0 * ch + (2.0 * b.p_s * b.Y0 + b.p_n * b.K0) / s * sh};
    }
    case BranchKind::harmonic: {
        const double s = std::sqrt(b.phi);
        const double c = std::cos(0.5 * s * t);
        const double sn = std::sin(0.5 * s * t);
        return {b.Y0 * c - b.p_n * (b.Y0 + 2.0 * b.K0) / s * sn,
                b.K0 * c + (2.0 * b.p_s * b.Y0 + b.p_n * b.K0) / s * sn};
    }
    case BranchKind::degenerate_pn0:
    case BranchKind::degenerate_pn4ps:
        return {b.Y0 - b.p_n * (0.5 * b.Y0 + b.K0) * t,
                b.K0 + (b.p_s * b.Y0 + 0.5 * b.p_n * b.K0) * t};
    }
    return {};
}

} // namespace

std::string_view to_string(BranchKind kind) {
    switch (kind) {
    case BranchKind::hyperbolic: return "hyperbolic";
    case BranchKind::harmonic: return "harmonic";
    case BranchKind::degenerate_pn0: return "degenerate_pn0";
    case BranchKind::degenerate_pn4ps: return "degenerate_pn4ps";
    }
    return "unknown";
}

std::string_view to_string(Regime regime) {
    switch (regime) {
    case Regime::growth: return "growth";
    case Regime::crisis: return "crisis";
    case Regime::boundary: return "boundary";
    }
    return "unknown";
}

double phi(double p_n, double p_s) { return p_n * (4.0 * p_s - p_n); }

AnalyticBranch make_branch(double p_n, double p_s, double Y0, double K0) {
    AnalyticBranch b;
    b.p_n = p_n;
    b.p_s = p_s;
    b.Y0 = Y0;
    b.K0 = K0;
    b.phi = phi(p_n, p_s);
    if (b.phi < -kEpsPhi) {
        b.kind = BranchKind::hyperbolic;
    } else if (b.phi > kEpsPhi) {
        b.kind = BranchKind::harmonic;
    } else {
        b.kind = std::abs(p_n) <= std::abs(p_n - 4.0 * p_s) ? BranchKind::degenerate_pn0
                                                            : BranchKind::degenerate_pn4ps;
    }
    b.alpha0 = K0 != 0.0 ? Y0 / K0 : INFINITY;
    b.A0 = K0 / Y0;
    b.beta_s = p_n != 0.0 ? p_s / p_n : 0.0;
    const double root = std::sqrt(std::abs(b.phi));
    if (root > 0.0) {
        b.alpha = (1.0 + 2.0 * b.A0) / root;
        b.beta = (1.0 + 2.0 * b.beta_s * b.alpha0) / root;
    }
    b.gamma = 0.5 + b.A0;
    b.eta = 0.5 + 0.25 * b.alpha0;
    return b;
}

State basis_solution(const AnalyticBranch& b, double t) {
    const State br = brackets(b, t);
    const double g = std::exp(0.5 * b.p_n * t);
    return {br.Y * g, br.K * g};
}

State growth_factors(const AnalyticBranch& b, double t) {
    const State br = brackets(b, t);
    return {br.Y / b.Y0, br.K / b.K0};
}

double capital_coefficient_closed(const AnalyticBranch& b, double t) {
    const State br = brackets(b, t);
    if (std::abs(br.Y / b.Y0) < 1e-9) {
        throw PoleError("capital coefficient diverges: GDP growth form vanishes at t=" +
                        std::to_string(t));
    }
    return br.K / br.Y;
}

double characteristic_time(double p_n, double p_s) {
    const double f = phi(p_n, p_s);
    if (!(f < 0.0)) {
        throw ImaginaryTimeError("characteristic time is imaginary for phi >= 0 (phi=" +
                                 std::to_string(f) + ")");
    }
    return 4.0 * std::numbers::pi / std::sqrt(-f);
}

double characteristic_frequency(double p_n, double p_s) {
    return 1.0 / characteristic_time(p_n, p_s);
}

double t_max(double T_h) {
    if (!(T_h > 0.0)) throw ParameterError("T_h must be positive");
    return T_h * std::numbers::ln2;
}

RegimeReport classify_regime(double p_v, double p_rel, double p_s) {
    RegimeReport r;
    r.p_n = p_v * (1.0 - 2.0 * p_rel);
    r.phi = phi(r.p_n, p_s);
    r.p_arel = p_rel - 0.5;
    if (r.phi < -kEpsPhi) {
        r.regime = Regime::growth;
        r.phi_sign = -1;
    } else if (r.phi > kEpsPhi) {
        r.regime = Regime::crisis;
        r.phi_sign = 1;
    } else {
        r.regime = Regime::boundary;
        r.phi_sign = 0;
    }
    if (p_v != 0.0 && p_rel != 0.5) {
        const bool pv_pos = p_v > 0.0;
        const bool low_rel = p_rel < 0.5;
        const std::string quadrant = std::string(pv_pos ? "p_v>0" : "p_v<0") +
                                     (low_rel ? ", p_rel<1/2: " : ", p_rel>1/2: ");
        if (pv_pos == low_rel) {
            r.condition = quadrant + "p_n > 4p_s";
            r.condition_holds = r.p_n > 4.0 * p_s;
        } else {
            r.condition = quadrant + "4p_s > p_n";
            r.condition_holds = 4.0 * p_s > r.p_n;
        }
    }
    return r;
}

double iwf_comparison(double g, double Y0, double t) { return Y0 * std::exp(g * t); }

double iwf_deviation(const AnalyticBranch& b, double t) {
    const double ref = iwf_comparison(std::abs(b.p_n), b.Y0, t);
    return std::abs(basis_solution(b, t).Y - ref) / ref;
}

Trajectory piecewise_solution(const ModelParams& params, int horizon) {
    validate(params);
    if (horizon <= 0) throw ParameterError("horizon must be positive");
    if (!params.a0.is_zero() || !params.b0.is_zero() || !params.p_B.is_zero() ||
        !params.p_P.is_zero()) {
        throw ParameterError("closed-form chaining needs zero a0, b0, p_B and p_P");
    }
    Trajectory traj;
    traj.t0 = params.t0;
    traj.step = 1.0;
    State s{params.Y0, params.K0};
    auto record = [&](int k) {
        const double t = k;
        const auto d = rhs(params, t, s.Y, s.K);
        traj.steps.push_back({t, params.t0 + k, s.Y, s.K, net_business_rate(params, t),
                              params.p_s(t, params.t0), 0.0, d.dY, d.dK});
    };
    record(0);
    for (int k = 0; k < horizon; ++k) {
        const double t = k;
        const auto branch = make_branch(net_business_rate(params, t), params.p_s(t, params.t0), s.Y, s.K);
        s = basis_solution(branch, 1.0);
        if (!std::isfinite(s.Y) || !std::isfinite(s.K)) {
            traj.stop_reason = StopReason::diverged;
            return traj;
        }
        record(k + 1);
        if (s.Y <= 0.0) {
            traj.stop_reason = StopReason::gdp_nonpositive;
            return traj;
        }
    }
    traj.stop_reason = StopReason::horizon;
    return traj;
}

} // namespace macrofield
