#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace macrofield {

struct ConstantRate {
    double value = 0.0;
};

/// Per-calendar-year values; the value of year y holds on [y, y+1). Flat outside the range.
struct TableRate {
    int first_year = 0;
    std::vector<double> values;
};

/// p_rel(t) = (p_rel0/e) exp(-(t - T_h)/T_h), t in years since the start year.
struct ExponentialPrel {
    double p_rel0 = 1.0;
    double T_h = 80.0;
};

/// Time-dependent rate (1/year) or amount (billions/year).
class RateFn {
public:
    using Variant = std::variant<ConstantRate, TableRate, ExponentialPrel>;

    RateFn() = default;
    RateFn(double value) : v_(ConstantRate{value}) {}
    RateFn(ConstantRate c) : v_(c) {}
    RateFn(TableRate t);
    RateFn(ExponentialPrel e);

    /// Value at t years after the calendar year t0.
    [[nodiscard]] double operator()(double t, int t0) const;
    [[nodiscard]] const Variant& variant() const { return v_; }
    [[nodiscard]] bool is_zero() const;

private:
    Variant v_{ConstantRate{0.0}};
};

struct ModelParams {
    double p_v0 = 0.055;
    RateFn p_rel = ExponentialPrel{1.0, 80.0};
    RateFn p_s = 0.1;
    RateFn p_B = 0.0;
    RateFn p_P = 0.0;
    RateFn a0 = 0.0;
    RateFn b0 = 0.0;
    /// When set, replaces p_v0 (1 - 2 p_rel(t)) as the net business rate.
    std::optional<RateFn> p_n;
    double Y0 = 52.582;
    double K0 = 19.966;
    int t0 = 1950;
};

/// Throws ParameterError for p_v0 < 0, Y0 <= 0 or K0 <= 0.
void validate(const ModelParams& params);

/// Parameters with a frozen net business rate and savings rate and no externals.
ModelParams constant_rate_params(double p_n, double p_s, double Y0, double K0, int t0 = 0);

double net_business_rate(const ModelParams& params, double t);

struct Derivative {
    double dY = 0.0;
    double dK = 0.0;
};

Derivative rhs(const ModelParams& params, double t, double Y, double K);

enum class Method { rk4, euler };
enum class StopReason { horizon, gdp_nonpositive, diverged };

std::string_view to_string(Method m);
std::string_view to_string(StopReason r);
Method parse_method(std::string_view name);

struct IntegrateOptions {
    int horizon = 85;       ///< years
    double step = 0.25;     ///< years, rounded down to 1/n
    Method method = Method::rk4;
    bool allow_negative = false;
};

struct TrajectoryStep {
    double t = 0.0; ///< years since t0
    int year = 0;
    double Y = 0.0;
    double K = 0.0;
    double p_n = 0.0;
    double p_s = 0.0;
    double p_B = 0.0;
    double dY = 0.0;
    double dK = 0.0;
};

struct Trajectory {
    int t0 = 0;
    std::vector<TrajectoryStep> steps;
    StopReason stop_reason = StopReason::horizon;
    Method method = Method::rk4;
    double step = 0.25; ///< effective step used

    [[nodiscard]] const TrajectoryStep* at_year(int year) const;
    /// Year of the largest recorded Y.
    [[nodiscard]] int peak_year() const;
    /// First recorded year with Y <= 0.
    [[nodiscard]] std::optional<int> collapse_year() const;
};

/// Step actually used for a requested step: 1/ceil(1/step), so whole years are hit exactly.
double effective_step(double step);

/// Fixed-step integration from (Y0, K0), recording every whole year.
Trajectory integrate(const ModelParams& params, const IntegrateOptions& options = {});

std::string trajectory_to_csv(const Trajectory& trajectory);

} // namespace macrofield
