#pragma once

#include "macrofield/dataset.hpp"
#include "macrofield/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace macrofield {

// Quantity equation and velocity.

/// ((1 - p_s) Y + (1 + p_s) dK/dt) / Y.
double quantity_check(double Y, double dK_dt, double p_s);
/// c ((1 - p_s) Y + (1 + p_s) dK/dt) / K.
double velocity(double Y, double K, double dK_dt, double p_s, double c = 1.0);
/// Y / K.
double naive_velocity(double Y, double K);
/// K V / H. Throws DomainError when H <= 0.
double price_level(double K, double V, double H);
/// Purchases per year in billions for a population given in thousands.
double purchases_per_year(double population_thousands, double purchases_per_day = 1.0);

struct QEState {
    double K = 0.0; ///< billions
    double V = 0.0; ///< 1/year
    double H = 0.0; ///< billions of purchases per year
    double P = 0.0; ///< currency per purchase
    double Y = 0.0; ///< billions per year
};

/// Completes K, V, H into a consistent state with P = K V / H and Y = K V.
QEState qe_state(double K, double V, double H);

// Balance of debt burden against savings.

enum class Difference { forward, backward };
enum class Flow { balanced, inflow, outflow };

std::string_view to_string(Flow flow);

struct BalanceRow {
    int year = 0;
    double debt_burden = 0.0;  ///< dK/dt
    double savings = 0.0;      ///< p_s Y
    double compensation = 0.0; ///< (p_s + p_B) Y
    double a0_required = 0.0;  ///< p_s Y - dK/dt
    double burden_ratio = 0.0; ///< dK/dt / (p_s Y)
    Flow flow = Flow::balanced;
};

/// Per-year balance. Backward differences attribute K(t) - K(t-1) to year t;
/// p_B is the population growth over the same interval.
std::vector<BalanceRow> balance_report(const EconSeries& series,
                                       Difference diff = Difference::backward);
std::vector<BalanceRow> balance_report(const Trajectory& trajectory);
BalanceRow balance_row(int year, double dK_dt, double Y, double p_s, double p_B = 0.0);

// Inflation.

enum class InflationMethod { structural, core, core_simplified, house_number, data_cpi };

std::string_view to_string(InflationMethod m);
InflationMethod parse_inflation_method(std::string_view name);

/// p_w^2 tau + (p_w Y + p_v^2 K) / (Y + p_v K), tau in years.
double core_inflation(double p_w, double p_v, double Y, double K, double tau = 1.0);
/// p_w (1 + p_w).
double core_inflation_simplified(double p_w);
/// (p_w + p_va) / 2.
double house_number_inflation(double p_w, double p_va);
/// (V/Y) (dK/dt - K (dH/H + dV/V)).
double structural_inflation(double V, double Y, double K, double dK_dt, double H_rate, double V_rate);

/// Reference price level Y ((1 - p_s) Y + (1 + p_s) dK/dt) / (H0 exp(p_w t)), p_w = dY/Y.
double reference_price_level(double Y, double dY, double dK, double p_s, double H0, double t);
/// Closed-form time derivative of the reference price level with its a(t), b(t) coefficients.
double reference_price_rate(double Y, double dY, double ddY, double dK, double ddK, double p_s,
                            double dp_s, double H0, double t);

struct InflationOptions {
    /// Overrides the asset price rate of the house-number estimate (default dK/K from data).
    std::optional<double> p_va;
    double purchases_per_day = 1.0;
    /// Structural method: H from population (default) or the quasi-stable H0 exp(p_w t).
    bool population_trade = true;
    double tau = 1.0;
};

struct InflationPoint {
    int year = 0;
    std::optional<double> value;
};

/// Growth rates are backward differences, so year t uses years t-1 and t.
std::vector<InflationPoint> inflation_series(const EconSeries& series, InflationMethod method,
                                             const InflationOptions& options = {});
std::vector<InflationPoint> inflation_series(const Trajectory& trajectory, InflationMethod method,
                                             const InflationOptions& options = {});

/// Trade change after the critical time: (Y / P_dot) / t'.
double crisis_trade_volume(double Y, double P_dot, double t_since_Tk);
/// Critical year taken as the year of maximal GDP.
int critical_year(const EconSeries& series);
int critical_year(const Trajectory& trajectory);

// Public debt.

struct DebtPoint {
    int year = 0;
    double modeled = 0.0;
    double official = 0.0;
};

/// S(T) = S0 + sum_{tau=T0..T} p_s(tau) Y(tau) (1 + p_A)^(tau - T0).
std::vector<DebtPoint> debt_path(const EconSeries& series, double p_A, double S0);

struct DebtRatioPoint {
    int year = 0;
    double ratio = 0.0;
    DebtBase base = DebtBase::gdp;
};

std::vector<DebtRatioPoint> debt_ratio(const EconSeries& series);

// Crisis phases.

struct PhaseCrossings {
    std::optional<int> capital_exceeds_gdp;  ///< K/Y >= 1
    std::optional<int> loans_exceed_gdp;     ///< L/Y >= 1
    std::optional<int> prel_below_half;      ///< p_rel <= 1/2
    std::optional<int> capital_triple_gdp;   ///< K/Y >= 3
    std::optional<int> debt_exceeds_gdp;     ///< S/Y >= 1
    std::optional<int> debt_loans_quota;     ///< S/L >= quota
};

struct PhaseYear {
    int year = 0;
    /// Nested phases, each requiring the previous one.
    int capital_phase = 1; ///< I: K<Y, II: K>=Y, III: L>=Y, IV: p_rel<=1/2
    int debt_phase = 1;    ///< I: K<Y, II: K>=Y, III: L>=Y, IV: S/L>=quota, V: S>=Y
    bool crisis = false;   ///< p_rel <= 1/2 and K/Y >= 3
};

struct PhaseReport {
    double quota = 0.5;
    PhaseCrossings crossings;
    std::vector<PhaseYear> years;
};

PhaseReport phase_classify(const EconSeries& series, double quota = 0.5);

// Substitution between two products.

struct SubstitutionParams {
    double H0x = 1.0;
    double P0x = 1.0;
    double H0y = 1.0;
    double P0y = 1.0;
    double h_min_x = 0.0;
    double t0x = 0.0;
    double t_sh_x = 1.0;
};

struct SubstitutionState {
    double HP_x = 0.0;
    double HP_y = 0.0;
    double rate_x = 0.0;
    double rate_y = 0.0;
};

SubstitutionState substitution_trajectory(const SubstitutionParams& p, double t);

// Systemic importance, savings and interest.

struct SystemicVerdict {
    bool systemic = false;
    double margin = 0.0; ///< R - dY/dt
};

SystemicVerdict systemic_importance(double R, double dY_dt);

/// Capital left for real trade: sum M_a V_a minus the net interest drained by financial products.
double financial_product_drain(const std::vector<std::pair<double, double>>& commercial_MV,
                               const std::vector<double>& net_interest);

struct SavingsIdentity {
    double S_total = 0.0;        ///< p_s Y + p_n K
    double I_n = 0.0;            ///< p_n K
    double interest_share = 0.0; ///< p_n K / Y
    double gap = 0.0;            ///< dK/dt - S_total - a0
};

SavingsIdentity savings_identity(double Y, double K, double dK_dt, double p_s, double p_n,
                                 std::optional<double> a0 = std::nullopt);

struct InterestEstimates {
    double supply_demand = 0.0; ///< c Y / K
    double commutator = 0.0;    ///< dY/dt Y / K^2
};

InterestEstimates interest_estimators(double Y, double K, double dY_dt, double c = 0.125);

struct LotkaVolterraCoefficients {
    double alpha = 0.0; ///< p_n / Y
    double beta = 0.0;  ///< p_s / K
};

LotkaVolterraCoefficients lotka_volterra_map(const ModelParams& params, double t, double Y, double K);

} // namespace macrofield
