#pragma once

#include "macrofield/dataset.hpp"
#include "macrofield/model.hpp"

#include <optional>
#include <vector>

namespace macrofield {

/// Point-to-currency conversion ratios at the two anchor years.
struct ChainCorrection {
    double V_i = 1.0;
    double V_e = 1.0;
    int t_i = 0;
    int t_e = 0;

    /// Linearly interpolated factor; extrapolated linearly outside [t_i, t_e].
    [[nodiscard]] double factor(double year) const;
};

/// Anchors default to the first and last years shared by model and data.
ChainCorrection chain_correction(const Trajectory& model_points, const EconSeries& data,
                                 std::optional<int> t_i = std::nullopt,
                                 std::optional<int> t_e = std::nullopt);

struct ChainedStep {
    int year = 0;
    double Y = 0.0;
    double K = 0.0;
    double factor = 1.0;
    bool extrapolated = false;
};

std::vector<ChainedStep> apply_chain(const ChainCorrection& corr, const Trajectory& model_points);

struct PrelFit {
    double p_rel0 = 1.0;
    double T_h = 0.0;
    double rms = 0.0;
    int iterations = 0;
    bool constrained = false;
    int from = 0; ///< year taken as t = 0
    int to = 0;
};

struct PrelFitOptions {
    bool constrained = false; ///< hold p_rel0 = 1
    std::optional<int> from;
    std::optional<int> to;
    double tolerance = 1e-10;
    int max_iterations = 200;
};

/// Least squares of p_rel(t) = (p_rel0/e) exp(-(t - T_h)/T_h) against L/K, t = year - from.
PrelFit fit_prel_exponential(const EconSeries& series, const PrelFitOptions& options = {});

/// Same fit on explicit samples (t in years, p_rel values).
PrelFit fit_prel_exponential(const std::vector<double>& t, const std::vector<double>& p_rel,
                             const PrelFitOptions& options = {});

/// Y = -a_K K^2 + b_K K + c_K.
struct QuadraticFit {
    double a_K = 0.0;
    double b_K = 0.0;
    double c_K = 0.0;
    double residual_rms = 0.0;
    int from = 0;
    int to = 0;
    int n = 0;

    [[nodiscard]] double operator()(double K) const { return -a_K * K * K + b_K * K + c_K; }
};

QuadraticFit fit_quadratic_YK(const EconSeries& series, std::optional<int> from = std::nullopt,
                              std::optional<int> to = std::nullopt);
QuadraticFit fit_quadratic_YK(const std::vector<double>& K, const std::vector<double>& Y);

struct CapitalExtremes {
    double K_E_low = 0.0;
    double K_E_high = 0.0;
    double K_max = 0.0;
    double Y_at_K_max = 0.0;
};

/// Roots and vertex of the fitted parabola. Throws DomainError when a_K <= 0.
CapitalExtremes capital_extremes(const QuadraticFit& fit);

/// Basket price sum_j h_j a_j P_j.
double basket_price(const std::vector<double>& h, const std::vector<double>& a,
                    const std::vector<double>& P);

/// Year-on-year change P(t+1)/P(t) - 1 of a price index.
std::vector<double> basket_inflation(const std::vector<double>& prices);

} // namespace macrofield
