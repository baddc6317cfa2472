#include "macrofield/multiworld.hpp"

#include "integrator.hpp"
#include "macrofield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace macrofield {

std::string_view to_string(TransferKind kind) { return kind == TransferKind::capital ? "capital" : "gdp"; }

int WorldParams::t0() const {
    if (economies.empty()) return 0;
    int t = economies.front().t0;
    for (const auto& e : economies) t = std::min(t, e.t0);
    return t;
}

void validate(const WorldParams& world) {
    if (world.economies.empty()) throw ParameterError("world has no economies");
    for (const auto& e : world.economies) validate(e);
    const std::size_t n = world.economies.size();
    for (const auto& tr : world.transfers) {
        if (tr.from >= n || tr.to >= n) throw ParameterError("transfer refers to a missing economy");
        if (tr.from == tr.to) throw ParameterError("transfer from an economy to itself");
    }
    for (const auto& ex : world.exogenous) {
        if (ex.economy >= n) throw ParameterError("exogenous flow refers to a missing economy");
    }
}

std::vector<bool> active_economies(const WorldParams& world, double t) {
    const int base = world.t0();
    std::vector<bool> active;
    active.reserve(world.economies.size());
    for (const auto& e : world.economies) active.push_back(t >= static_cast<double>(e.t0 - base));
    return active;
}

TransferMatrices transfer_matrices(const WorldParams& world, double t,
                                   const std::vector<double>& source_gdp,
                                   const std::vector<bool>& active) {
    const std::size_t n = world.economies.size();
    if (source_gdp.size() != n || active.size() != n) throw ParameterError("state count does not match economies");
    TransferMatrices m{std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)),
                       std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))};
    const int base = world.t0();
    for (const auto& tr : world.transfers) {
        if (!active[tr.from] || !active[tr.to]) continue;
        const auto& src = world.economies[tr.from];
        double amount = tr.rate(t - (src.t0 - base), src.t0);
        if (tr.gdp_share) amount *= source_gdp[tr.from];
        auto& mat = tr.kind == TransferKind::capital ? m.A0 : m.B0;
        mat[tr.to][tr.from] += amount;
        mat[tr.from][tr.to] -= amount;
    }
    return m;
}

namespace {

struct Context {
    const WorldParams& world;
    int base;
    std::vector<double> offset;
    // Retarded mode: GDP recorded one year before the current one, and the matching time.
    const std::vector<double>* delayed_gdp = nullptr;
    double delayed_t = 0.0;
};

void evaluate(const Context& ctx, double t, const std::vector<double>& y, const std::vector<bool>& active,
              std::vector<double>& dydt) {
    const auto& world = ctx.world;
    const std::size_t n = world.economies.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) {
            dydt[2 * i] = 0.0;
            dydt[2 * i + 1] = 0.0;
            continue;
        }
        const auto d = rhs(world.economies[i], t - ctx.offset[i], y[2 * i], y[2 * i + 1]);
        dydt[2 * i] = d.dY;
        dydt[2 * i + 1] = d.dK;
    }
    if (world.transfers.empty() && world.exogenous.empty()) return;

    std::vector<double> gdp(n, 0.0);
    double t_eval = t;
    std::vector<bool> send = active;
    if (world.retarded) {
        if (ctx.delayed_gdp == nullptr) {
            std::fill(send.begin(), send.end(), false);
        } else {
            gdp = *ctx.delayed_gdp;
            t_eval = ctx.delayed_t;
            const auto was_active = active_economies(world, t_eval);
            for (std::size_t i = 0; i < n; ++i) send[i] = active[i] && was_active[i];
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) gdp[i] = y[2 * i];
    }
    const auto m = transfer_matrices(world, t_eval, gdp, send);
    for (std::size_t i = 0; i < n; ++i) {
        double sumA = 0.0;
        double sumB = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sumA += m.A0[i][j];
            sumB += m.B0[i][j];
        }
        dydt[2 * i] += sumB;
        dydt[2 * i + 1] += sumA;
    }
    for (const auto& ex : world.exogenous) {
        if (!active[ex.economy]) continue;
        const auto& e = world.economies[ex.economy];
        const double amount = ex.rate(t - ctx.offset[ex.economy], e.t0);
        dydt[2 * ex.economy + (ex.kind == TransferKind::capital ? 1 : 0)] += amount;
    }
}

Context make_context(const WorldParams& world) {
    Context ctx{world, world.t0(), {}};
    for (const auto& e : world.economies) ctx.offset.push_back(static_cast<double>(e.t0 - ctx.base));
    return ctx;
}

} // namespace

std::vector<Derivative> world_rhs(const WorldParams& world, double t, const std::vector<State>& states) {
    validate(world);
    const std::size_t n = world.economies.size();
    if (states.size() != n) {
        throw ParameterError("expected " + std::to_string(n) + " states, got " + std::to_string(states.size()));
    }
    std::vector<double> y(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        y[2 * i] = states[i].Y;
        y[2 * i + 1] = states[i].K;
    }
    std::vector<double> dydt(2 * n, 0.0);
    const Context ctx = make_context(world);
    evaluate(ctx, t, y, active_economies(world, t), dydt);
    std::vector<Derivative> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {dydt[2 * i], dydt[2 * i + 1]};
    return out;
}

std::optional<int> WorldTrajectory::peak_year(std::size_t economy) const {
    std::optional<int> year;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : steps) {
        if (!s.active[economy]) continue;
        if (s.states[economy].Y > best) {
            best = s.states[economy].Y;
            year = s.year;
        }
    }
    return year;
}

double WorldTrajectory::peak_gdp(std::size_t economy) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : steps) {
        if (s.active[economy]) best = std::max(best, s.states[economy].Y);
    }
    return best;
}

WorldTrajectory integrate_world(const WorldParams& world, int horizon, double step, Method method) {
    validate(world);
    if (horizon <= 0) throw ParameterError("horizon must be positive");
    const double h = effective_step(step);
    const int substeps = static_cast<int>(std::lround(1.0 / h));
    const std::size_t n = world.economies.size();
    Context ctx = make_context(world);

    WorldTrajectory traj;
    traj.t0 = ctx.base;
    traj.collapse_year.assign(n, std::nullopt);

    std::vector<double> y(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        y[2 * i] = world.economies[i].Y0;
        y[2 * i + 1] = world.economies[i].K0;
    }
    std::vector<double> k1(2 * n), k2(2 * n), k3(2 * n), k4(2 * n), tmp(2 * n);
    std::vector<double> previous_gdp;

    auto record = [&](int k) {
        WorldStep s;
        s.t = k;
        s.year = ctx.base + k;
        s.active = active_economies(world, s.t);
        for (std::size_t i = 0; i < n; ++i) {
            s.states.push_back({y[2 * i], y[2 * i + 1]});
            if (s.active[i] && y[2 * i] <= 0.0 && !traj.collapse_year[i]) traj.collapse_year[i] = s.year;
        }
        traj.steps.push_back(std::move(s));
    };

    record(0);
    for (int year = 0; year < horizon; ++year) {
        const auto active = active_economies(world, year);
        if (world.retarded && year >= 1) {
            previous_gdp.assign(n, 0.0);
            const auto& prev = traj.steps[static_cast<std::size_t>(year - 1)];
            for (std::size_t i = 0; i < n; ++i) previous_gdp[i] = prev.states[i].Y;
            ctx.delayed_gdp = &previous_gdp;
            ctx.delayed_t = year - 1;
        }
        auto f = [&](double t, const std::vector<double>& state, std::vector<double>& dydt) {
            evaluate(ctx, t, state, active, dydt);
        };
        for (int i = 0; i < substeps; ++i) {
            const double t = year + i * h;
            if (method == Method::rk4) {
                detail::rk4_step(f, t, y, h, k1, k2, k3, k4, tmp);
            } else {
                detail::euler_step(f, t, y, h, k1);
            }
        }
        if (!std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); })) {
            traj.stop_reason = StopReason::diverged;
            return traj;
        }
        record(year + 1);
    }
    traj.stop_reason = StopReason::horizon;
    return traj;
}

ExportExperiment capital_export_experiment(const ModelParams& strong, ModelParams weak,
                                           double export_fraction, int start_lag_years, int horizon,
                                           double step) {
    if (export_fraction < 0.0) throw ParameterError("export fraction must be non-negative");
    if (start_lag_years < 0) throw ParameterError("start lag must be non-negative");
    weak.t0 = strong.t0 + start_lag_years;

    WorldParams world;
    world.economies = {strong, weak};
    if (export_fraction > 0.0) {
        world.transfers.push_back({0, 1, TransferKind::capital, RateFn(export_fraction), true});
    }
    ExportExperiment out;
    out.coupled = integrate_world(world, horizon, step);
    IntegrateOptions opt;
    opt.horizon = horizon;
    opt.step = step;
    out.strong_alone = integrate(strong, opt);
    opt.horizon = std::max(1, horizon - start_lag_years);
    out.weak_alone = integrate(weak, opt);
    return out;
}

Amplification derivative_sales_amplification(double B, double A) {
    if (std::abs(std::abs(A) - std::abs(B)) > 1e-12 * std::max({1.0, std::abs(A), std::abs(B)})) {
        throw ParameterError("amplification estimate assumes |A| = |B|");
    }
    return {-3.0 * B, 3.0 * A, -2.0 * B, 2.0 * A};
}

} // namespace macrofield
