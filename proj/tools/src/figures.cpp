#include "cli.hpp"

#include "macrofield/calibrate.hpp"
#include "macrofield/diagnostics.hpp"
#include "macrofield/errors.hpp"
#include "macrofield/multiworld.hpp"

#include <algorithm>
#include <map>

namespace macrofield::cli {

namespace {

using Cell = std::optional<double>;

double yr(int y) { return static_cast<double>(y); }

ModelParams frg_basic(const EconSeries& frg) {
    ModelParams p;
    const auto& r = frg.records.front();
    p.Y0 = r.gdp;
    p.K0 = r.assets;
    p.t0 = r.year;
    return p;
}

Trajectory run(const ModelParams& p, int horizon) {
    IntegrateOptions o;
    o.horizon = horizon;
    o.allow_negative = true;
    return integrate(p, o);
}

Cell model_at(const Trajectory& t, int year, bool capital) {
    const auto* s = t.at_year(year);
    if (s == nullptr) return std::nullopt;
    return capital ? s->K : s->Y;
}

Table fig1(const EconSeries& frg) {
    Table t{{"year", "Y", "K", "L"}, {}};
    for (const auto& r : frg.records) t.add({yr(r.year), r.gdp, r.assets, r.loans});
    return t;
}

Table fig2(const EconSeries& frg) {
    Table t{{"year", "k_t", "k_c", "p_rel"}, {}};
    for (const auto& r : derive_indicators(frg).rows) t.add({yr(r.year), r.k_t, r.k_c, r.p_rel});
    return t;
}

Table fig3(const EconSeries& frg) {
    Table t{{"year", "k_i", "y_i"}, {}};
    for (const auto& r : derive_indicators(frg).rows) t.add({yr(r.year), r.k_i, r.y_i});
    return t;
}

Table fig5(const EconSeries& frg) {
    // Model in points (Y0 = 1) chained to currency between the first and last shared years.
    auto p = frg_basic(frg);
    p.K0 = p.K0 / p.Y0;
    p.Y0 = 1.0;
    const auto points = run(p, frg.last_year() - frg.first_year());
    const auto corr = chain_correction(points, frg);
    std::map<int, ChainedStep> chained;
    for (const auto& s : apply_chain(corr, points)) chained[s.year] = s;
    Table t{{"year", "Y_data", "K_data", "Y_model", "K_model"}, {}};
    for (const auto& r : frg.records) {
        const auto it = chained.find(r.year);
        if (it == chained.end()) {
            t.add({yr(r.year), r.gdp, r.assets, std::nullopt, std::nullopt});
        } else {
            t.add({yr(r.year), r.gdp, r.assets, it->second.Y, it->second.K});
        }
    }
    return t;
}

Table fig6(const EconSeries& frg) {
    auto p = frg_basic(frg);
    const int horizon = frg.last_year() - frg.first_year();
    const auto plain = run(p, horizon);
    p.p_B = population_growth_table(frg);
    const auto with_pop = run(p, horizon);
    Table t{{"year", "Y_data", "Y_model", "Y_model_population"}, {}};
    for (const auto& r : frg.records) {
        t.add({yr(r.year), r.gdp, model_at(plain, r.year, false), model_at(with_pop, r.year, false)});
    }
    return t;
}

Table fig7(const EconSeries& frg) {
    const auto model = run(frg_basic(frg), frg.last_year() - frg.first_year());
    Table t{{"year", "kt_data", "kt_model"}, {}};
    for (const auto& r : frg.records) {
        const auto* s = model.at_year(r.year);
        Cell kt_model;
        if (s != nullptr && s->Y > 0.0) kt_model = s->K / s->Y;
        t.add({yr(r.year), r.assets / r.gdp, kt_model});
    }
    return t;
}

Table fig13(const EconSeries& frg) {
    Table t{{"year", "p_rel_percent"}, {}};
    for (const auto& r : frg.records) t.add({yr(r.year), 100.0 * r.loans / r.assets});
    return t;
}

Table fig15(const EconSeries& frg) {
    Table t{{"year", "k_t", "k_c", "k_m", "a0_required"}, {}};
    const auto d = derive_indicators(frg);
    std::map<int, double> a0;
    for (const auto& b : balance_report(frg)) a0[b.year] = b.a0_required;
    for (const auto& r : d.rows) {
        const auto it = a0.find(r.year);
        t.add({yr(r.year), r.k_t, r.k_c, r.k_m, it == a0.end() ? Cell{} : Cell{it->second}});
    }
    return t;
}

Table fig23(const EconSeries& frg) {
    const auto phases = phase_classify(frg);
    Table t{{"year", "debt_gdp", "debt_loans", "debt_capital", "debt_phase"}, {}};
    for (std::size_t i = 0; i < frg.records.size(); ++i) {
        const auto& r = frg.records[i];
        t.add({yr(r.year), r.state_debt / r.gdp, r.state_debt / r.loans, r.state_debt / r.assets,
               static_cast<double>(phases.years[i].debt_phase)});
    }
    return t;
}

Table fig24(const EconSeries& frg) {
    const auto path = debt_path(frg, 0.03, frg.records.front().state_debt);
    Table t{{"year", "official", "official_times_5", "modeled"}, {}};
    for (const auto& p : path) t.add({yr(p.year), p.official, 5.0 * p.official, p.modeled});
    return t;
}

Table fig27(const EconSeries& frg) {
    const auto core = inflation_series(frg, InflationMethod::core);
    const auto simple = inflation_series(frg, InflationMethod::core_simplified);
    Table t{{"year", "core", "core_simplified", "cpi"}, {}};
    for (std::size_t i = 0; i < frg.records.size(); ++i) {
        t.add({yr(frg.records[i].year), core[i].value, simple[i].value, frg.records[i].cpi});
    }
    return t;
}

Table fig28(const EconSeries& frg) {
    const auto structural = inflation_series(frg, InflationMethod::structural);
    const auto house = inflation_series(frg, InflationMethod::house_number);
    Table t{{"year", "structural", "house_number", "cpi"}, {}};
    for (std::size_t i = 0; i < frg.records.size(); ++i) {
        t.add({yr(frg.records[i].year), structural[i].value, house[i].value, frg.records[i].cpi});
    }
    return t;
}

Table fig29(const EconSeries& frg) {
    const auto strong = frg_basic(frg);
    ModelParams weak = strong;
    weak.Y0 *= 0.5;
    weak.K0 *= 0.5;
    const auto e = capital_export_experiment(strong, weak, 0.1, 25);
    Table t{{"year", "Y1", "K1", "Y2", "K2", "Y1_alone", "Y2_alone"}, {}};
    for (const auto& s : e.coupled.steps) {
        Cell y2;
        Cell k2;
        if (s.active[1]) {
            y2 = s.states[1].Y;
            k2 = s.states[1].K;
        }
        t.add({yr(s.year), s.states[0].Y, s.states[0].K, y2, k2, model_at(e.strong_alone, s.year, false),
               model_at(e.weak_alone, s.year, false)});
    }
    return t;
}

using Builder = Table (*)(const EconSeries&);

const std::vector<std::pair<std::string, Builder>>& builders() {
    static const std::vector<std::pair<std::string, Builder>> b = {
        {"fig1", fig1},   {"fig2", fig2},   {"fig3", fig3},   {"fig5", fig5},   {"fig6", fig6},
        {"fig7", fig7},   {"fig13", fig13}, {"fig15", fig15}, {"fig23", fig23}, {"fig24", fig24},
        {"fig27", fig27}, {"fig28", fig28}, {"fig29", fig29},
    };
    return b;
}

} // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& [id, _] : builders()) v.push_back(id);
        return v;
    }();
    return ids;
}

Table figure_table(const std::string& id, const EconSeries& frg) {
    for (const auto& [name, build] : builders()) {
        if (name == id) return build(frg);
    }
    throw ParameterError("unknown figure '" + id + "'");
}

RateFn population_growth_table(const EconSeries& series) {
    const auto& rec = series.records;
    if (rec.size() < 2) throw ParameterError("population table needs at least two years");
    TableRate t{rec.front().year, {}};
    for (std::size_t i = 0; i + 1 < rec.size(); ++i) {
        t.values.push_back((rec[i + 1].population - rec[i].population) / rec[i].population);
    }
    return RateFn(std::move(t));
}

} // namespace macrofield::cli
