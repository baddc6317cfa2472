#include "cli.hpp"

#include "macrofield/analytic.hpp"
#include "macrofield/calibrate.hpp"
#include "macrofield/config.hpp"
#include "macrofield/diagnostics.hpp"
#include "macrofield/errors.hpp"
#include "macrofield/multiworld.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace macrofield::cli {

using nlohmann::json;

std::string Table::to_csv() const {
    std::string s;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i != 0) s += ',';
        s += columns[i];
    }
    s += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i != 0) s += ',';
            if (row[i] && std::isfinite(*row[i])) s += format_double(*row[i]);
        }
        s += '\n';
    }
    return s;
}

std::string Table::to_json() const {
    json arr = json::array();
    for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size() && i < columns.size(); ++i) {
            if (row[i] && std::isfinite(*row[i])) {
                obj[columns[i]] = *row[i];
            } else {
                obj[columns[i]] = nullptr;
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

namespace {

json opt_json(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Shared data-source and output flags.
struct Common {
    std::string input;
    bool frg = false;
    bool decimal_comma = false;
    std::optional<int> from;
    std::optional<int> to;
    std::string out;
    std::string format = "csv";

    void add_data(CLI::App* cmd) {
        auto* in = cmd->add_option("--input", input, "Input CSV (year,assets,loans,gdp,state_debt,savings_rate,population,cpi)");
        auto* f = cmd->add_flag("--frg", frg, "Use the built-in FRG dataset (default when no --input)");
        in->excludes(f);
        cmd->add_flag("--decimal-comma", decimal_comma, "Input numerals use a decimal comma");
        cmd->add_option("--from", from, "First year to use");
        cmd->add_option("--to", to, "Last year to use");
    }

    void add_output(CLI::App* cmd, const std::string& default_format = "csv") {
        format = default_format;
        cmd->add_option("--out", out, "Write output to PATH instead of stdout");
        cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    }

    [[nodiscard]] EconSeries load() const {
        EconSeries s;
        if (!input.empty()) {
            ParseOptions o;
            o.decimal_comma = decimal_comma;
            s = read_series_file(input, o);
        } else {
            s = load_frg_dataset();
        }
        if (from || to) s = s.slice(from.value_or(s.first_year()), to.value_or(s.last_year()));
        return s;
    }

    void emit(const std::string& text, std::ostream& out_stream) const {
        if (out.empty()) {
            out_stream << text;
            return;
        }
        std::ofstream f(out, std::ios::binary);
        if (!f) throw ValidationError("cannot write '" + out + "'");
        f << text;
    }

    void emit(const Table& t, std::ostream& out_stream) const {
        emit(format == "json" ? t.to_json() : t.to_csv(), out_stream);
    }
};

json trajectory_summary(const Trajectory& traj, int horizon) {
    json j;
    j["t0"] = traj.t0;
    j["method"] = std::string(to_string(traj.method));
    j["step"] = traj.step;
    j["horizon"] = horizon;
    j["stop_reason"] = std::string(to_string(traj.stop_reason));
    j["first_year"] = traj.steps.front().year;
    j["last_year"] = traj.steps.back().year;
    j["peak_year"] = traj.peak_year();
    j["peak_gdp"] = traj.at_year(traj.peak_year())->Y;
    j["collapse_year"] = opt_json(traj.collapse_year());
    return j;
}

Table trajectory_table(const Trajectory& traj) {
    Table t{{"year", "t", "Y", "K", "p_n", "p_s", "p_B", "dY_dt", "dK_dt"}, {}};
    for (const auto& s : traj.steps) {
        t.add({static_cast<double>(s.year), s.t, s.Y, s.K, s.p_n, s.p_s, s.p_B, s.dY, s.dK});
    }
    return t;
}

Table derived_table(const DerivedSeries& d) {
    Table t;
    t.columns = {"year"};
    const auto names = d.column_names();
    for (const auto& n : names) t.columns.emplace_back(n);
    std::vector<std::vector<std::optional<double>>> cols;
    for (const auto& n : names) cols.push_back(d.column(n));
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        std::vector<std::optional<double>> row{static_cast<double>(d.rows[i].year)};
        for (const auto& c : cols) row.push_back(c[i]);
        t.add(std::move(row));
    }
    return t;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"macrofield: financial-capital field model of an economy"};
    app.name("macrofield");
    app.require_subcommand(1);
    std::function<void()> action;

    // derive
    Common derive_opts;
    auto* derive = app.add_subcommand("derive", "Per-year indicators (K/Y, L/Y, p_rel, rates) from a dataset");
    derive_opts.add_data(derive);
    derive_opts.add_output(derive);
    derive->callback([&] {
        action = [&] {
            const auto d = derive_indicators(derive_opts.load());
            if (derive_opts.format == "json") {
                derive_opts.emit(derived_table(d), out);
            } else {
                derive_opts.emit(derived_to_csv(d), out);
            }
        };
    });

    // simulate
    Common sim_opts;
    std::string sim_config;
    std::optional<double> sim_step;
    std::string sim_method;
    std::optional<int> sim_horizon;
    bool sim_allow_negative = false;
    std::string sim_population;
    std::string sim_summary;
    auto* simulate = app.add_subcommand("simulate", "Integrate the two-field model");
    simulate->add_option("--config", sim_config, "Simulation config JSON (model keys plus horizon, step, method)");
    simulate->add_option("--step", sim_step, "Integration step in years, at most 1");
    simulate->add_option("--method", sim_method, "Integrator")->check(CLI::IsMember({"rk4", "euler"}));
    simulate->add_option("--horizon", sim_horizon, "Years to integrate");
    simulate->add_flag("--allow-negative", sim_allow_negative, "Continue past Y <= 0");
    simulate->add_option("--population-table", sim_population,
                         "Population growth p_B from a dataset ('frg' or a CSV path)");
    simulate->add_option("--summary", sim_summary, "Also write the summary JSON to PATH");
    sim_opts.add_output(simulate);
    simulate->callback([&] {
        action = [&] {
            SimulationConfig cfg;
            if (!sim_config.empty()) cfg = parse_simulation_config(read_text(sim_config));
            if (sim_step) cfg.options.step = *sim_step;
            if (!sim_method.empty()) cfg.options.method = parse_method(sim_method);
            if (sim_horizon) cfg.options.horizon = *sim_horizon;
            if (sim_allow_negative) cfg.options.allow_negative = true;
            if (!sim_population.empty()) {
                const auto pop = sim_population == "frg" ? load_frg_dataset() : read_series_file(sim_population);
                cfg.params.p_B = population_growth_table(pop);
            }
            const auto traj = integrate(cfg.params, cfg.options);
            const auto summary = trajectory_summary(traj, cfg.options.horizon);
            if (!sim_summary.empty()) {
                Common s;
                s.out = sim_summary;
                s.emit(summary.dump(2) + "\n", out);
            }
            if (sim_opts.format == "json") {
                json j;
                j["summary"] = summary;
                j["trajectory"] = json::parse(trajectory_table(traj).to_json());
                sim_opts.emit(j.dump(2) + "\n", out);
            } else {
                sim_opts.emit(trajectory_to_csv(traj), out);
            }
        };
    });

    // analytic
    auto* analytic = app.add_subcommand("analytic", "Closed-form solutions and regime analysis");
    analytic->require_subcommand(1);
    Common an_opts;
    double an_pn = -0.055;
    double an_ps = 0.1;
    double an_y0 = 1.0;
    double an_k0 = 0.0;
    int an_horizon = 60;
    double an_pv = 0.055;
    double an_prel = 1.0;
    double an_th = 80.0;

    auto* solution = analytic->add_subcommand("solution", "Closed-form Y(t), K(t) for frozen rates");
    solution->add_option("--p-n", an_pn, "Net business rate")->capture_default_str();
    solution->add_option("--p-s", an_ps, "Savings rate")->capture_default_str();
    solution->add_option("--y0", an_y0, "Initial GDP")->capture_default_str();
    solution->add_option("--k0", an_k0, "Initial capital")->capture_default_str();
    solution->add_option("--horizon", an_horizon, "Years")->capture_default_str();
    an_opts.add_output(solution);
    solution->callback([&] {
        action = [&] {
            if (an_horizon < 0) throw ParameterError("horizon must be non-negative");
            const auto b = make_branch(an_pn, an_ps, an_y0, an_k0);
            Table t{{"t", "Y", "K", "growth_Y", "growth_K"}, {}};
            for (int i = 0; i <= an_horizon; ++i) {
                const auto s = basis_solution(b, i);
                const auto g = growth_factors(b, i);
                t.add({static_cast<double>(i), s.Y, s.K, g.Y, g.K});
            }
            an_opts.emit(t, out);
        };
    });

    auto* regime = analytic->add_subcommand("regime", "Growth or crisis regime from p_v, p_rel, p_s");
    regime->add_option("--p-v", an_pv, "Capital growth rate")->capture_default_str();
    regime->add_option("--p-rel", an_prel, "Loans share of capital")->capture_default_str();
    regime->add_option("--p-s", an_ps, "Savings rate")->capture_default_str();
    regime->add_option("--out", an_opts.out, "Write output to PATH");
    regime->callback([&] {
        action = [&] {
            const auto r = classify_regime(an_pv, an_prel, an_ps);
            json j{{"p_v", an_pv},          {"p_rel", an_prel},
                   {"p_s", an_ps},          {"p_n", r.p_n},
                   {"phi", r.phi},          {"phi_sign", r.phi_sign},
                   {"regime", std::string(to_string(r.regime))},
                   {"condition", r.condition}, {"condition_holds", r.condition_holds},
                   {"p_arel", r.p_arel}};
            an_opts.emit(j.dump(2) + "\n", out);
        };
    });

    auto* tc = analytic->add_subcommand("tc", "Characteristic time 4 pi / sqrt(-phi) of the oscillating branch");
    tc->add_option("--p-n", an_pn, "Net business rate")->capture_default_str();
    tc->add_option("--p-s", an_ps, "Savings rate")->capture_default_str();
    tc->add_option("--out", an_opts.out, "Write output to PATH");
    tc->callback([&] {
        action = [&] {
            json j{{"p_n", an_pn},
                   {"p_s", an_ps},
                   {"phi", phi(an_pn, an_ps)},
                   {"T_c", characteristic_time(an_pn, an_ps)},
                   {"omega", characteristic_frequency(an_pn, an_ps)}};
            an_opts.emit(j.dump(2) + "\n", out);
        };
    });

    auto* tmax = analytic->add_subcommand("tmax", "Time of zero net business rate for the exponential p_rel");
    tmax->add_option("--t-h", an_th, "Decay time T_h of p_rel")->capture_default_str();
    tmax->add_option("--out", an_opts.out, "Write output to PATH");
    tmax->callback([&] {
        action = [&] {
            json j{{"T_h", an_th}, {"t_max", t_max(an_th)}};
            an_opts.emit(j.dump(2) + "\n", out);
        };
    });

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "Fit model parameters to a dataset");
    calibrate->require_subcommand(1);
    Common cal_opts;
    bool cal_constrained = false;
    auto* prel = calibrate->add_subcommand("prel", "Fit p_rel(t) = (p_rel0/e) exp(-(t - T_h)/T_h) to L/K");
    cal_opts.add_data(prel);
    prel->add_flag("--constrained", cal_constrained, "Hold p_rel0 = 1");
    prel->add_option("--out", cal_opts.out, "Write output to PATH");
    prel->callback([&] {
        action = [&] {
            PrelFitOptions o;
            o.constrained = cal_constrained;
            const auto series = cal_opts.load();
            const auto f = fit_prel_exponential(series, o);
            json j{{"p_rel0", f.p_rel0},       {"T_h", f.T_h},   {"t_max", t_max(f.T_h)},
                   {"rms", f.rms},             {"iterations", f.iterations},
                   {"constrained", f.constrained}, {"from", f.from}, {"to", f.to}};
            cal_opts.emit(j.dump(2) + "\n", out);
        };
    });
    Common yk_opts;
    auto* yk = calibrate->add_subcommand("yk", "Fit Y = -a_K K^2 + b_K K + c_K and its extremes");
    yk_opts.add_data(yk);
    yk->add_option("--out", yk_opts.out, "Write output to PATH");
    yk->callback([&] {
        action = [&] {
            const auto f = fit_quadratic_YK(yk_opts.load());
            json j{{"a_K", f.a_K}, {"b_K", f.b_K}, {"c_K", f.c_K}, {"residual_rms", f.residual_rms},
                   {"from", f.from}, {"to", f.to}, {"n", f.n}};
            if (f.a_K > 0.0) {
                const auto e = capital_extremes(f);
                j["extremes"] = {{"K_E_low", e.K_E_low},
                                 {"K_E_high", e.K_E_high},
                                 {"K_max", e.K_max},
                                 {"Y_at_K_max", e.Y_at_K_max}};
            } else {
                j["extremes"] = nullptr;
            }
            yk_opts.emit(j.dump(2) + "\n", out);
        };
    });

    // phases
    Common ph_opts;
    double ph_quota = 0.5;
    auto* phases = app.add_subcommand("phases", "Capital and debt crisis phases with crossing years");
    ph_opts.add_data(phases);
    phases->add_option("--quota", ph_quota, "Debt-to-loans quota for debt phase IV")->capture_default_str();
    ph_opts.add_output(phases, "json");
    phases->callback([&] {
        action = [&] {
            const auto r = phase_classify(ph_opts.load(), ph_quota);
            if (ph_opts.format == "csv") {
                Table t{{"year", "capital_phase", "debt_phase", "crisis"}, {}};
                for (const auto& y : r.years) {
                    t.add({static_cast<double>(y.year), static_cast<double>(y.capital_phase),
                           static_cast<double>(y.debt_phase), y.crisis ? 1.0 : 0.0});
                }
                ph_opts.emit(t, out);
                return;
            }
            const auto& c = r.crossings;
            json years = json::array();
            for (const auto& y : r.years) {
                years.push_back({{"year", y.year},
                                 {"capital_phase", y.capital_phase},
                                 {"debt_phase", y.debt_phase},
                                 {"crisis", y.crisis}});
            }
            json j{{"quota", r.quota},
                   {"crossings",
                    {{"capital_exceeds_gdp", opt_json(c.capital_exceeds_gdp)},
                     {"loans_exceed_gdp", opt_json(c.loans_exceed_gdp)},
                     {"prel_below_half", opt_json(c.prel_below_half)},
                     {"capital_triple_gdp", opt_json(c.capital_triple_gdp)},
                     {"debt_exceeds_gdp", opt_json(c.debt_exceeds_gdp)},
                     {"debt_loans_quota", opt_json(c.debt_loans_quota)}}},
                   {"years", years}};
            ph_opts.emit(j.dump(2) + "\n", out);
        };
    });

    // inflation
    Common inf_opts;
    std::string inf_method = "core";
    double inf_tau = 1.0;
    auto* inflation = app.add_subcommand("inflation", "Model inflation estimates next to the official CPI");
    inf_opts.add_data(inflation);
    inflation->add_option("--method", inf_method, "Estimator")
        ->check(CLI::IsMember({"structural", "core", "core_simplified", "house_number", "data_cpi"}))
        ->capture_default_str();
    inflation->add_option("--tau", inf_tau, "Purchase period in years")->capture_default_str();
    inf_opts.add_output(inflation);
    inflation->callback([&] {
        action = [&] {
            const auto series = inf_opts.load();
            InflationOptions o;
            o.tau = inf_tau;
            const auto pts = inflation_series(series, parse_inflation_method(inf_method), o);
            Table t{{"year", "value", "cpi"}, {}};
            for (std::size_t i = 0; i < pts.size(); ++i) {
                t.add({static_cast<double>(pts[i].year), pts[i].value, series.records[i].cpi});
            }
            inf_opts.emit(t, out);
        };
    });

    // debt
    Common debt_opts;
    double debt_pa = 0.03;
    std::optional<double> debt_s0;
    auto* debt = app.add_subcommand("debt", "Public debt from accumulated savings versus the official series");
    debt_opts.add_data(debt);
    debt->add_option("--p-a", debt_pa, "Interest rate on the accumulated debt")->capture_default_str();
    debt->add_option("--s0", debt_s0, "Initial debt (default: first official value)");
    debt_opts.add_output(debt);
    debt->callback([&] {
        action = [&] {
            const auto series = debt_opts.load();
            const auto path = debt_path(series, debt_pa, debt_s0.value_or(series.records.front().state_debt));
            Table t{{"year", "modeled", "official"}, {}};
            for (const auto& p : path) t.add({static_cast<double>(p.year), p.modeled, p.official});
            debt_opts.emit(t, out);
        };
    });

    // scenario
    Common sc_opts;
    std::string sc_config;
    std::optional<double> sc_step;
    std::string sc_method;
    std::optional<int> sc_horizon;
    auto* scenario = app.add_subcommand("scenario", "Coupled multi-economy simulation from a world config");
    scenario->add_option("--config", sc_config, "World config JSON")->required();
    scenario->add_option("--step", sc_step, "Integration step in years, at most 1");
    scenario->add_option("--method", sc_method, "Integrator")->check(CLI::IsMember({"rk4", "euler"}));
    scenario->add_option("--horizon", sc_horizon, "Years to integrate");
    sc_opts.add_output(scenario);
    scenario->callback([&] {
        action = [&] {
            auto cfg = parse_world_config(read_text(sc_config));
            if (sc_step) cfg.step = *sc_step;
            if (!sc_method.empty()) cfg.method = parse_method(sc_method);
            if (sc_horizon) cfg.horizon = *sc_horizon;
            const auto w = integrate_world(cfg.world, cfg.horizon, cfg.step, cfg.method);
            const std::size_t n = cfg.world.economies.size();
            if (sc_opts.format == "csv") {
                Table t{{"year"}, {}};
                for (const auto& name : cfg.names) {
                    t.columns.push_back("Y_" + name);
                    t.columns.push_back("K_" + name);
                }
                for (const auto& s : w.steps) {
                    std::vector<std::optional<double>> row{static_cast<double>(s.year)};
                    for (std::size_t i = 0; i < n; ++i) {
                        if (s.active[i]) {
                            row.emplace_back(s.states[i].Y);
                            row.emplace_back(s.states[i].K);
                        } else {
                            row.emplace_back();
                            row.emplace_back();
                        }
                    }
                    t.add(std::move(row));
                }
                sc_opts.emit(t, out);
                return;
            }
            json econ = json::array();
            for (std::size_t i = 0; i < n; ++i) {
                const auto& p = cfg.world.economies[i];
                IntegrateOptions o;
                o.horizon = std::max(1, cfg.horizon - (p.t0 - w.t0));
                o.step = cfg.step;
                o.method = cfg.method;
                const auto alone = integrate(p, o);
                econ.push_back({{"name", cfg.names[i]},
                                {"t0", p.t0},
                                {"peak_year", opt_json(w.peak_year(i))},
                                {"peak_gdp", w.peak_gdp(i)},
                                {"collapse_year", opt_json(w.collapse_year[i])},
                                {"alone_peak_year", alone.peak_year()},
                                {"alone_collapse_year", opt_json(alone.collapse_year())}});
            }
            json j{{"t0", w.t0},
                   {"horizon", cfg.horizon},
                   {"step", cfg.step},
                   {"method", std::string(to_string(cfg.method))},
                   {"retarded", cfg.world.retarded},
                   {"stop_reason", std::string(to_string(w.stop_reason))},
                   {"economies", econ}};
            sc_opts.emit(j.dump(2) + "\n", out);
        };
    });

    // report
    Common rep_opts;
    std::string rep_id;
    auto* report = app.add_subcommand("report", "Plot data for a figure id");
    std::string ids_help = "Figure id:";
    for (const auto& id : figure_ids()) ids_help += " " + id;
    report->add_option("figure", rep_id, ids_help)->required();
    rep_opts.add_data(report);
    rep_opts.add_output(report);
    report->callback([&] {
        action = [&] {
            const auto known = figure_ids();
            if (std::find(known.begin(), known.end(), rep_id) == known.end()) {
                std::string msg = "unknown figure '" + rep_id + "'; known ids:";
                for (const auto& id : known) msg += " " + id;
                throw ParameterError(msg);
            }
            rep_opts.emit(figure_table(rep_id, rep_opts.load()), out);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (action) action();
        return 0;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const FitError& e) {
        err << "fit error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace macrofield::cli
