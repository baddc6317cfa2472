#include "macrofield/diagnostics.hpp"

#include "macrofield/errors.hpp"

#include <algorithm>
#include <cmath>

namespace macrofield {

double quantity_check(double Y, double dK_dt, double p_s) {
    if (!(Y > 0.0)) throw DomainError("quantity check needs Y > 0");
    return ((1.0 - p_s) * Y + (1.0 + p_s) * dK_dt) / Y;
}

double velocity(double Y, double K, double dK_dt, double p_s, double c) {
    if (!(K > 0.0)) throw DomainError("velocity needs K > 0");
    return c * ((1.0 - p_s) * Y + (1.0 + p_s) * dK_dt) / K;
}

double naive_velocity(double Y, double K) {
    if (!(K > 0.0)) throw DomainError("velocity needs K > 0");
    return Y / K;
}

double price_level(double K, double V, double H) {
    if (!(H > 0.0)) throw DomainError("price level needs H > 0");
    return K * V / H;
}

double purchases_per_year(double population_thousands, double purchases_per_day) {
    return population_thousands * 1e3 * purchases_per_day * 365.0 / 1e9;
}

QEState qe_state(double K, double V, double H) {
    return {K, V, H, price_level(K, V, H), K * V};
}

std::string_view to_string(Flow flow) {
    switch (flow) {
    case Flow::balanced: return "balanced";
    case Flow::inflow: return "inflow";
    case Flow::outflow: return "outflow";
    }
    return "unknown";
}

BalanceRow balance_row(int year, double dK_dt, double Y, double p_s, double p_B) {
    BalanceRow r;
    r.year = year;
    r.debt_burden = dK_dt;
    r.savings = p_s * Y;
    r.compensation = (p_s + p_B) * Y;
    r.a0_required = r.savings - dK_dt;
    r.burden_ratio = r.savings != 0.0 ? dK_dt / r.savings : 0.0;
    const double scale = std::max({std::abs(r.savings), std::abs(dK_dt), 1.0});
    if (std::abs(r.a0_required) <= 1e-12 * scale) {
        r.flow = Flow::balanced;
    } else {
        r.flow = r.a0_required > 0.0 ? Flow::inflow : Flow::outflow;
    }
    return r;
}

std::vector<BalanceRow> balance_report(const EconSeries& series, Difference diff) {
    std::vector<BalanceRow> out;
    const auto& rec = series.records;
    for (std::size_t i = 0; i < rec.size(); ++i) {
        std::size_t a = 0;
        std::size_t b = 0;
        if (diff == Difference::backward) {
            if (i == 0) continue;
            a = i - 1;
            b = i;
        } else {
            if (i + 1 >= rec.size()) continue;
            a = i;
            b = i + 1;
        }
        const double dK = rec[b].assets - rec[a].assets;
        const double p_B = (rec[b].population - rec[a].population) / rec[a].population;
        out.push_back(balance_row(rec[i].year, dK, rec[i].gdp, rec[i].savings_rate, p_B));
    }
    return out;
}

std::vector<BalanceRow> balance_report(const Trajectory& traj) {
    std::vector<BalanceRow> out;
    for (const auto& s : traj.steps) out.push_back(balance_row(s.year, s.dK, s.Y, s.p_s, s.p_B));
    return out;
}

std::string_view to_string(InflationMethod m) {
    switch (m) {
    case InflationMethod::structural: return "structural";
    case InflationMethod::core: return "core";
    case InflationMethod::core_simplified: return "core_simplified";
    case InflationMethod::house_number: return "house_number";
    case InflationMethod::data_cpi: return "data_cpi";
    }
    return "unknown";
}

InflationMethod parse_inflation_method(std::string_view name) {
    for (auto m : {InflationMethod::structural, InflationMethod::core, InflationMethod::core_simplified,
                   InflationMethod::house_number, InflationMethod::data_cpi}) {
        if (to_string(m) == name) return m;
    }
    throw ParameterError("unknown inflation method '" + std::string(name) + "'");
}

double core_inflation(double p_w, double p_v, double Y, double K, double tau) {
    return p_w * p_w * tau + (p_w * Y + p_v * p_v * K) / (Y + p_v * K);
}

double core_inflation_simplified(double p_w) { return p_w * (1.0 + p_w); }

double house_number_inflation(double p_w, double p_va) { return 0.5 * (p_w + p_va); }

double structural_inflation(double V, double Y, double K, double dK_dt, double H_rate, double V_rate) {
    if (!(Y > 0.0)) throw DomainError("inflation undefined for Y <= 0");
    return V / Y * (dK_dt - K * (H_rate + V_rate));
}

double reference_price_level(double Y, double dY, double dK, double p_s, double H0, double t) {
    return Y / (H0 * std::exp(dY / Y * t)) * ((1.0 - p_s) * Y + (1.0 + p_s) * dK);
}

double reference_price_rate(double Y, double dY, double ddY, double dK, double ddK, double p_s,
                            double dp_s, double H0, double t) {
    const double a = Y * (dY * dY - ddY) + dK * (dY * dY - Y * ddY) + p_s * ddY * (Y * Y - dK) +
                     p_s * dY * dY * (dK - Y);
    const double b = Y * Y * dY * (1.0 - p_s) + Y * Y * ddK * (1.0 + p_s) + Y * Y * dp_s * (dK - Y);
    return std::exp(-dY / Y * t) / (H0 * Y) * (a * t + b);
}

namespace {

struct Columns {
    std::vector<int> year;
    std::vector<double> Y;
    std::vector<double> K;
    std::vector<double> p_s;
    std::vector<double> population;
    std::vector<double> cpi;
};

std::vector<InflationPoint> inflation_from(const Columns& c, InflationMethod method,
                                           const InflationOptions& opt, bool has_population) {
    const std::size_t n = c.year.size();
    std::vector<InflationPoint> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i].year = c.year[i];
    if (method == InflationMethod::data_cpi) {
        if (c.cpi.empty()) throw ParameterError("data_cpi needs an official CPI column");
        for (std::size_t i = 0; i < n; ++i) out[i].value = c.cpi[i];
        return out;
    }
    auto growth = [&](const std::vector<double>& v, std::size_t i) { return (v[i] - v[i - 1]) / v[i - 1]; };
    auto money_flow = [&](std::size_t i) {
        return (1.0 - c.p_s[i]) * c.Y[i] + (1.0 + c.p_s[i]) * (c.K[i] - c.K[i - 1]);
    };
    for (std::size_t i = 1; i < n; ++i) {
        if (!(c.Y[i] > 0.0) || !(c.Y[i - 1] > 0.0)) continue;
        const double p_w = growth(c.Y, i);
        const double p_v = growth(c.K, i);
        switch (method) {
        case InflationMethod::core:
            out[i].value = core_inflation(p_w, p_v, c.Y[i], c.K[i], opt.tau);
            break;
        case InflationMethod::core_simplified:
            out[i].value = core_inflation_simplified(p_w);
            break;
        case InflationMethod::house_number:
            out[i].value = house_number_inflation(p_w, opt.p_va.value_or(p_v));
            break;
        case InflationMethod::structural: {
            if (i < 2 || !(c.Y[i - 2] > 0.0)) break;
            const double ratio = money_flow(i) / money_flow(i - 1);
            if (has_population && opt.population_trade) {
                const double H1 = purchases_per_year(c.population[i], opt.purchases_per_day);
                const double H0 = purchases_per_year(c.population[i - 1], opt.purchases_per_day);
                out[i].value = ratio * H0 / H1 - 1.0;
            } else {
                out[i].value = ratio * std::exp(-p_w) - 1.0;
            }
            break;
        }
        case InflationMethod::data_cpi:
            break;
        }
    }
    return out;
}

} // namespace

std::vector<InflationPoint> inflation_series(const EconSeries& series, InflationMethod method,
                                             const InflationOptions& options) {
    Columns c;
    for (const auto& r : series.records) {
        c.year.push_back(r.year);
        c.Y.push_back(r.gdp);
        c.K.push_back(r.assets);
        c.p_s.push_back(r.savings_rate);
        c.population.push_back(r.population);
        c.cpi.push_back(r.cpi);
    }
    return inflation_from(c, method, options, true);
}

std::vector<InflationPoint> inflation_series(const Trajectory& traj, InflationMethod method,
                                             const InflationOptions& options) {
    if (method == InflationMethod::data_cpi) throw ParameterError("a model trajectory has no official CPI");
    Columns c;
    for (const auto& s : traj.steps) {
        c.year.push_back(s.year);
        c.Y.push_back(s.Y);
        c.K.push_back(s.K);
        c.p_s.push_back(s.p_s);
    }
    return inflation_from(c, method, options, false);
}

double crisis_trade_volume(double Y, double P_dot, double t_since_Tk) {
    if (t_since_Tk == 0.0) throw SingularityError("trade volume is singular at the critical time");
    if (P_dot == 0.0) throw SingularityError("trade volume is singular for zero price change");
    return Y / P_dot / t_since_Tk;
}

int critical_year(const EconSeries& series) {
    auto it = std::max_element(series.records.begin(), series.records.end(),
                               [](const auto& a, const auto& b) { return a.gdp < b.gdp; });
    if (it == series.records.end()) throw ValidationError("no records");
    return it->year;
}

int critical_year(const Trajectory& traj) { return traj.peak_year(); }

std::vector<DebtPoint> debt_path(const EconSeries& series, double p_A, double S0) {
    if (!(p_A >= 0.0)) throw ParameterError("p_A must be non-negative");
    std::vector<DebtPoint> out;
    if (series.records.empty()) return out;
    const int T0 = series.first_year();
    double S = S0;
    for (const auto& r : series.records) {
        S += r.savings_rate * r.gdp * std::pow(1.0 + p_A, r.year - T0);
        out.push_back({r.year, S, r.state_debt});
    }
    return out;
}

std::vector<DebtRatioPoint> debt_ratio(const EconSeries& series) {
    std::vector<DebtRatioPoint> out;
    for (const auto& r : series.records) {
        const auto d = debt_ratio(r);
        out.push_back({r.year, d.ratio, d.base});
    }
    return out;
}

PhaseReport phase_classify(const EconSeries& series, double quota) {
    PhaseReport rep;
    rep.quota = quota;
    std::vector<int> years;
    std::vector<std::optional<double>> kt, lt, prel, sy, sl;
    for (const auto& r : series.records) {
        years.push_back(r.year);
        kt.push_back(r.assets / r.gdp);
        lt.push_back(r.loans / r.gdp);
        prel.push_back(r.loans / r.assets);
        sy.push_back(r.state_debt / r.gdp);
        sl.push_back(r.loans > 0.0 ? std::optional<double>(r.state_debt / r.loans) : std::nullopt);
    }
    auto& c = rep.crossings;
    c.capital_exceeds_gdp = find_crossing(years, kt, 1.0, Direction::up);
    c.loans_exceed_gdp = find_crossing(years, lt, 1.0, Direction::up);
    c.prel_below_half = find_crossing(years, prel, 0.5, Direction::down);
    c.capital_triple_gdp = find_crossing(years, kt, 3.0, Direction::up);
    c.debt_exceeds_gdp = find_crossing(years, sy, 1.0, Direction::up);
    c.debt_loans_quota = find_crossing(years, sl, quota, Direction::up);

    for (std::size_t i = 0; i < years.size(); ++i) {
        PhaseYear p;
        p.year = years[i];
        // Phases nest: each one requires the conditions of the previous ones.
        if (*kt[i] >= 1.0) {
            p.capital_phase = 2;
            p.debt_phase = 2;
            if (*lt[i] >= 1.0) {
                p.capital_phase = 3;
                p.debt_phase = 3;
                if (*prel[i] <= 0.5) p.capital_phase = 4;
                if (sl[i] && *sl[i] >= quota) {
                    p.debt_phase = 4;
                    if (*sy[i] >= 1.0) p.debt_phase = 5;
                }
            }
        }
        p.crisis = *prel[i] <= 0.5 && *kt[i] >= 3.0;
        rep.years.push_back(p);
    }
    return rep;
}

SubstitutionState substitution_trajectory(const SubstitutionParams& p, double t) {
    if (!(p.h_min_x >= 0.0 && p.h_min_x <= 1.0)) throw ParameterError("h_min must lie in [0, 1]");
    if (!(p.t_sh_x > 0.0)) throw ParameterError("t_sh must be positive");
    const double x0 = p.H0x * p.P0x;
    const double y0 = p.H0y * p.P0y;
    if (t <= p.t0x) return {x0, y0, 0.0, 0.0};
    const double decay = std::exp(-(t - p.t0x) / p.t_sh_x);
    const double moved = (1.0 - p.h_min_x) * (1.0 - decay) * x0;
    const double rate = (1.0 - p.h_min_x) / p.t_sh_x * decay * x0;
    return {x0 - moved, moved + y0, -rate, rate};
}

SystemicVerdict systemic_importance(double R, double dY_dt) { return {R >= dY_dt, R - dY_dt}; }

double financial_product_drain(const std::vector<std::pair<double, double>>& commercial_MV,
                               const std::vector<double>& net_interest) {
    double acc = 0.0;
    for (const auto& [M, V] : commercial_MV) acc += M * V;
    for (double z : net_interest) acc -= z;
    return acc;
}

SavingsIdentity savings_identity(double Y, double K, double dK_dt, double p_s, double p_n,
                                 std::optional<double> a0) {
    SavingsIdentity s;
    s.I_n = p_n * K;
    s.S_total = p_s * Y + s.I_n;
    s.interest_share = Y != 0.0 ? s.I_n / Y : 0.0;
    s.gap = dK_dt - s.S_total - a0.value_or(0.0);
    return s;
}

InterestEstimates interest_estimators(double Y, double K, double dY_dt, double c) {
    if (!(K > 0.0)) throw DomainError("interest estimators need K > 0");
    return {c * Y / K, dY_dt * Y / (K * K)};
}

LotkaVolterraCoefficients lotka_volterra_map(const ModelParams& params, double t, double Y, double K) {
    if (!(Y > 0.0) || !(K > 0.0)) throw DomainError("predator-prey map needs Y > 0 and K > 0");
    return {net_business_rate(params, t) / Y, params.p_s(t, params.t0) / K};
}

} // namespace macrofield
