#pragma once

#include "macrofield/analytic.hpp"
#include "macrofield/model.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace macrofield {

enum class TransferKind { capital, gdp };

std::string_view to_string(TransferKind kind);

/// Flow from one economy to another. Enters the matrix at [to][from] with + and at
/// [from][to] with -, so every declared entry is antisymmetric.
struct Transfer {
    std::size_t from = 0;
    std::size_t to = 0;
    TransferKind kind = TransferKind::capital;
    RateFn rate = 0.0;
    /// Amount is rate * Y of the source economy instead of an absolute amount.
    bool gdp_share = false;
};

/// Declared exogenous creation (positive) or destruction (negative) with no counterpart.
struct ExogenousFlow {
    std::size_t economy = 0;
    TransferKind kind = TransferKind::capital;
    RateFn rate = 0.0;
};

struct WorldParams {
    std::vector<ModelParams> economies;
    std::vector<Transfer> transfers;
    std::vector<ExogenousFlow> exogenous;
    /// Apply transfers with a one-year delay: share-based amounts use the source GDP
    /// recorded one year earlier.
    bool retarded = false;

    /// Calendar start of the world clock: the earliest economy start.
    [[nodiscard]] int t0() const;
};

void validate(const WorldParams& world);

/// N x N capital (A0) and GDP (B0) transfer matrices, row i = receipts of economy i.
struct TransferMatrices {
    std::vector<std::vector<double>> A0;
    std::vector<std::vector<double>> B0;
};

/// Matrices at world time t (years since world t0). source_gdp supplies the Y used by
/// share-based transfers; inactive economies neither send nor receive.
TransferMatrices transfer_matrices(const WorldParams& world, double t,
                                   const std::vector<double>& source_gdp,
                                   const std::vector<bool>& active);

std::vector<bool> active_economies(const WorldParams& world, double t);

/// Per-economy derivatives at world time t. Throws ParameterError on size mismatch.
std::vector<Derivative> world_rhs(const WorldParams& world, double t, const std::vector<State>& states);

struct WorldStep {
    double t = 0.0;
    int year = 0;
    std::vector<State> states;
    std::vector<bool> active;
};

struct WorldTrajectory {
    int t0 = 0;
    std::vector<WorldStep> steps;
    std::vector<std::optional<int>> collapse_year;
    StopReason stop_reason = StopReason::horizon;

    [[nodiscard]] std::optional<int> peak_year(std::size_t economy) const;
    [[nodiscard]] double peak_gdp(std::size_t economy) const;
};

/// Integrates all economies together. Continues past individual collapses; an economy
/// stays at its initial state until its own start year.
WorldTrajectory integrate_world(const WorldParams& world, int horizon, double step = 0.25,
                                Method method = Method::rk4);

struct ExportExperiment {
    WorldTrajectory coupled;
    Trajectory strong_alone;
    Trajectory weak_alone;
};

/// Strong economy exports export_fraction of its GDP per year as capital to the weak one,
/// which starts start_lag_years later (weak.t0 is overridden).
ExportExperiment capital_export_experiment(const ModelParams& strong, ModelParams weak,
                                           double export_fraction, int start_lag_years,
                                           int horizon = 140, double step = 0.25);

struct Amplification {
    double nominal_Y = 0.0;
    double nominal_K = 0.0;
    double retarded_Y = 0.0;
    double retarded_K = 0.0;
};

/// Derivative-sale multipliers: nominal (-3B on Y, +3A on K) and the retarded 2/3 of it.
Amplification derivative_sales_amplification(double B, double A);

} // namespace macrofield
