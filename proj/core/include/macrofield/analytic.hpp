#pragma once

#include "macrofield/model.hpp"

#include <string>
#include <string_view>

namespace macrofield {

inline constexpr double kEpsPhi = 1e-12;

enum class BranchKind { hyperbolic, harmonic, degenerate_pn0, degenerate_pn4ps };

std::string_view to_string(BranchKind kind);

/// Closed-form solution segment for frozen p_n and p_s with no externals.
struct AnalyticBranch {
    BranchKind kind = BranchKind::hyperbolic;
    double p_n = 0.0;
    double p_s = 0.0;
    double Y0 = 1.0;
    double K0 = 0.0;
    double phi = 0.0;
    double alpha0 = 0.0; ///< Y0/K0
    double A0 = 0.0;     ///< K0/Y0
    double beta_s = 0.0; ///< p_s/p_n, 0 when p_n = 0
    double alpha = 0.0;  ///< (1 + 2 A0)/sqrt|phi|
    double beta = 0.0;   ///< (1 + 2 beta_s alpha0)/sqrt|phi|
    double gamma = 0.0;  ///< 1/2 + A0
    double eta = 0.0;    ///< 1/2 + alpha0/4
};

struct State {
    double Y = 0.0;
    double K = 0.0;
};

double phi(double p_n, double p_s);

AnalyticBranch make_branch(double p_n, double p_s, double Y0, double K0);

/// Y(t), K(t) of the branch; t in years from the branch start.
State basis_solution(const AnalyticBranch& branch, double t);

/// Growth forms Y/(Y0 e^{p_n t/2}) and K/(K0 e^{p_n t/2}).
State growth_factors(const AnalyticBranch& branch, double t);

/// K/Y from the growth forms. Throws PoleError when Y's growth form vanishes.
double capital_coefficient_closed(const AnalyticBranch& branch, double t);

/// 4 pi / sqrt(-phi). Throws ImaginaryTimeError when phi >= 0.
double characteristic_time(double p_n, double p_s);
double characteristic_frequency(double p_n, double p_s);

/// Time of zero net business rate for the exponential p_rel with p_rel0 = 1: T_h ln 2.
double t_max(double T_h);

enum class Regime { growth, crisis, boundary };

std::string_view to_string(Regime regime);

struct RegimeReport {
    double p_n = 0.0;
    double phi = 0.0;
    int phi_sign = 0;
    Regime regime = Regime::boundary;
    /// Growth condition for the (p_v, p_rel) quadrant, e.g. "p_v>0, p_rel>1/2: 4p_s > p_n".
    /// Empty on the boundaries p_v = 0 or p_rel = 1/2.
    std::string condition;
    bool condition_holds = false;
    double p_arel = 0.0; ///< p_rel - 1/2
};

RegimeReport classify_regime(double p_v, double p_rel, double p_s);

/// Y0 exp(g t).
double iwf_comparison(double g, double Y0, double t);

/// Relative gap between the branch's Y(t) and Y0 exp(|p_n| t).
double iwf_deviation(const AnalyticBranch& branch, double t);

/// Chains closed-form branches year by year, freezing p_n and p_s at each year start.
/// Requires zero externals, population and productivity rates.
Trajectory piecewise_solution(const ModelParams& params, int horizon);

} // namespace macrofield
