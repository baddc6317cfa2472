#include "macrofield/model.hpp"

#include "integrator.hpp"
#include "macrofield/dataset.hpp"
#include "macrofield/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace macrofield {

RateFn::RateFn(TableRate t) : v_(std::move(t)) {
    if (std::get<TableRate>(v_).values.empty()) throw ParameterError("rate table is empty");
}

RateFn::RateFn(ExponentialPrel e) : v_(e) {
    if (!(e.T_h > 0.0)) throw ParameterError("T_h must be positive");
    if (!(e.p_rel0 > 0.0 && e.p_rel0 <= 1.0)) throw ParameterError("p_rel0 must lie in (0, 1]");
}

double RateFn::operator()(double t, int t0) const {
    struct Visitor {
        double t;
        int t0;
        double operator()(const ConstantRate& c) const { return c.value; }
        double operator()(const TableRate& tab) const {
            const double year = std::floor(static_cast<double>(t0) + t);
            const double idx = std::clamp(year - tab.first_year, 0.0,
                                          static_cast<double>(tab.values.size() - 1));
            return tab.values[static_cast<std::size_t>(idx)];
        }
        double operator()(const ExponentialPrel& e) const {
            return e.p_rel0 / std::numbers::e * std::exp(-(t - e.T_h) / e.T_h);
        }
    };
    return std::visit(Visitor{t, t0}, v_);
}

bool RateFn::is_zero() const {
    if (const auto* c = std::get_if<ConstantRate>(&v_)) return c->value == 0.0;
    if (const auto* tab = std::get_if<TableRate>(&v_)) {
        return std::all_of(tab->values.begin(), tab->values.end(), [](double v) { return v == 0.0; });
    }
    return false;
}

void validate(const ModelParams& p) {
    if (!(p.p_v0 >= 0.0)) throw ParameterError("p_v0 must be non-negative");
    if (!(p.Y0 > 0.0)) throw ParameterError("Y0 must be positive");
    if (!(p.K0 > 0.0)) throw ParameterError("K0 must be positive");
}

ModelParams constant_rate_params(double p_n, double p_s, double Y0, double K0, int t0) {
    ModelParams p;
    p.p_n = RateFn(p_n);
    p.p_s = p_s;
    p.Y0 = Y0;
    p.K0 = K0;
    p.t0 = t0;
    return p;
}

double net_business_rate(const ModelParams& p, double t) {
    if (p.p_n) return (*p.p_n)(t, p.t0);
    return p.p_v0 * (1.0 - 2.0 * p.p_rel(t, p.t0));
}

Derivative rhs(const ModelParams& p, double t, double Y, double K) {
    const double pn = net_business_rate(p, t);
    const double dY = p.b0(t, p.t0) + (p.p_B(t, p.t0) + p.p_P(t, p.t0)) * Y - pn * K;
    const double dK = p.a0(t, p.t0) + p.p_s(t, p.t0) * Y + pn * K;
    return {dY, dK};
}

std::string_view to_string(Method m) { return m == Method::rk4 ? "rk4" : "euler"; }

std::string_view to_string(StopReason r) {
    switch (r) {
    case StopReason::horizon: return "horizon";
    case StopReason::gdp_nonpositive: return "gdp_nonpositive";
    case StopReason::diverged: return "diverged";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "rk4") return Method::rk4;
    if (name == "euler") return Method::euler;
    throw ParameterError("unknown method '" + std::string(name) + "' (expected rk4 or euler)");
}

const TrajectoryStep* Trajectory::at_year(int year) const {
    for (const auto& s : steps) {
        if (s.year == year) return &s;
    }
    return nullptr;
}

int Trajectory::peak_year() const {
    auto it = std::max_element(steps.begin(), steps.end(),
                               [](const auto& a, const auto& b) { return a.Y < b.Y; });
    return it == steps.end() ? t0 : it->year;
}

std::optional<int> Trajectory::collapse_year() const {
    for (const auto& s : steps) {
        if (s.Y <= 0.0) return s.year;
    }
    return std::nullopt;
}

double effective_step(double step) {
    if (!(step > 0.0) || step > 1.0) throw ParameterError("step must lie in (0, 1]");
    return 1.0 / std::ceil(1.0 / step - 1e-12);
}

Trajectory integrate(const ModelParams& params, const IntegrateOptions& options) {
    validate(params);
    if (options.horizon <= 0) throw ParameterError("horizon must be positive");
    const double h = effective_step(options.step);
    const int n = static_cast<int>(std::lround(1.0 / h));

    Trajectory traj;
    traj.t0 = params.t0;
    traj.method = options.method;
    traj.step = h;

    auto record = [&](int k, double Y, double K) {
        const double t = k;
        const auto d = rhs(params, t, Y, K);
        traj.steps.push_back({t, params.t0 + k, Y, K, net_business_rate(params, t),
                              params.p_s(t, params.t0), params.p_B(t, params.t0), d.dY, d.dK});
    };

    using State = std::array<double, 2>;
    auto f = [&](double t, const State& y, State& dydt) {
        const auto d = rhs(params, t, y[0], y[1]);
        dydt[0] = d.dY;
        dydt[1] = d.dK;
    };

    State y{params.Y0, params.K0};
    State k1{}, k2{}, k3{}, k4{}, tmp{};
    record(0, y[0], y[1]);
    for (int year = 0; year < options.horizon; ++year) {
        for (int i = 0; i < n; ++i) {
            const double t = year + i * h;
            if (options.method == Method::rk4) {
                detail::rk4_step(f, t, y, h, k1, k2, k3, k4, tmp);
            } else {
                detail::euler_step(f, t, y, h, k1);
            }
        }
        if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
            traj.stop_reason = StopReason::diverged;
            return traj;
        }
        record(year + 1, y[0], y[1]);
        if (y[0] <= 0.0 && !options.allow_negative) {
            traj.stop_reason = StopReason::gdp_nonpositive;
            return traj;
        }
    }
    traj.stop_reason = StopReason::horizon;
    return traj;
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "year,t,Y,K,p_n,p_s,p_B,dY_dt,dK_dt\n";
    for (const auto& s : traj.steps) {
        out += std::to_string(s.year);
        for (double v : {s.t, s.Y, s.K, s.p_n, s.p_s, s.p_B, s.dY, s.dK}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

} // namespace macrofield
