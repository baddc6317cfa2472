#include "macrofield/dataset.hpp"

#include "macrofield/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace macrofield {

namespace {

constexpr std::string_view kEmbeddedFrg =
#include "frg_appendix.inc"
    ;

constexpr std::array<std::string_view, 8> kColumns = {
    "year", "assets", "loans", "gdp", "state_debt", "savings_rate", "population", "cpi"};

struct Alias {
    std::string_view canonical;
    std::string_view prefix;
};

constexpr std::array<Alias, 12> kAliases = {{
    {"year", "year"},
    {"assets", "assets"},
    {"loans", "loans"},
    {"gdp", "gdp"},
    {"state_debt", "state_debt"},
    {"state_debt", "states debt"},
    {"state_debt", "state debt"},
    {"savings_rate", "savings_rate"},
    {"savings_rate", "savings"},
    {"population", "population"},
    {"cpi", "cpi"},
    {"cpi", "inflation"},
}};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(delim, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<std::string_view> canonical_name(std::string_view header) {
    const std::string h = lower(trim(header));
    for (const auto& a : kAliases) {
        if (h.rfind(a.prefix, 0) == 0) return a.canonical;
    }
    return std::nullopt;
}

bool is_percent_header(std::string_view header) {
    const std::string h = lower(trim(header));
    constexpr std::string_view suffix = "_percent";
    return h.find('%') != std::string::npos ||
           (h.size() >= suffix.size() && h.compare(h.size() - suffix.size(), suffix.size(), suffix) == 0);
}

double parse_number(std::string_view cell, bool decimal_comma, std::size_t line_no,
                    std::string_view column) {
    std::string buf(cell);
    if (decimal_comma) std::replace(buf.begin(), buf.end(), ',', '.');
    double value = 0.0;
    const char* first = buf.data();
    const char* last = buf.data() + buf.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (buf.empty() || ec != std::errc{} || ptr != last) {
        throw ValidationError("row " + std::to_string(line_no) + ", column " + std::string(column) +
                              ": cannot parse number '" + std::string(cell) + "'");
    }
    return value;
}

void check_record(const EconRecord& r, const std::string& where) {
    auto fail = [&](const std::string& msg) { throw ValidationError(where + ": " + msg); };
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(r.assets) || !finite(r.loans) || !finite(r.gdp) || !finite(r.state_debt) ||
        !finite(r.savings_rate) || !finite(r.population) || !finite(r.cpi)) {
        fail("non-finite value");
    }
    if (r.assets <= 0.0) fail("assets must be positive");
    if (r.gdp <= 0.0) fail("gdp must be positive");
    if (r.loans < 0.0) fail("loans must be non-negative");
    if (r.loans > r.assets) {
        fail("loans " + format_double(r.loans) + " exceed assets " + format_double(r.assets) +
             " (loans are part of total assets, so K - L must stay >= 0)");
    }
    if (!(r.savings_rate > 0.0 && r.savings_rate < 1.0)) fail("savings_rate must lie in (0, 1)");
}

std::optional<double> ratio(double num, double den) {
    if (std::abs(den) < kEpsDiv) return std::nullopt;
    return num / den;
}

} // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

const EconRecord* EconSeries::find(int year) const {
    if (records.empty()) return nullptr;
    const long idx = static_cast<long>(year) - records.front().year;
    if (idx < 0 || idx >= static_cast<long>(records.size())) return nullptr;
    return &records[static_cast<std::size_t>(idx)];
}

EconSeries EconSeries::slice(int from, int to) const {
    EconSeries out{country, currency_unit, {}};
    for (const auto& r : records) {
        if (r.year >= from && r.year <= to) out.records.push_back(r);
    }
    return out;
}

void validate(const EconSeries& series) {
    if (series.records.empty()) throw ValidationError("no records");
    for (std::size_t i = 0; i < series.records.size(); ++i) {
        const auto& r = series.records[i];
        check_record(r, "record " + std::to_string(i + 1) + " (year " + std::to_string(r.year) + ")");
        if (i > 0 && r.year != series.records[i - 1].year + 1) {
            throw GapError("years not contiguous: " + std::to_string(series.records[i - 1].year) +
                           " followed by " + std::to_string(r.year));
        }
    }
}

EconSeries parse_series(std::string_view text, const ParseOptions& options) {
    std::vector<std::pair<std::size_t, std::string_view>> lines;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto pos = text.find('\n', start);
        std::string_view line = text.substr(start, pos == std::string_view::npos ? pos : pos - start);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!trim(line).empty()) lines.emplace_back(line_no, line);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    if (lines.empty()) throw ValidationError("no records");

    const std::string_view header_line = lines.front().second;
    char delim = ',';
    if (header_line.find('\t') != std::string_view::npos) {
        delim = '\t';
    } else if (header_line.find(';') != std::string_view::npos) {
        delim = ';';
    }
    if (delim == ',' && options.decimal_comma) {
        throw ValidationError("decimal comma requires a tab or ';' delimiter");
    }

    const auto headers = split(header_line, delim);
    std::array<int, kColumns.size()> index{};
    std::array<bool, kColumns.size()> percent{};
    index.fill(-1);
    for (std::size_t c = 0; c < headers.size(); ++c) {
        auto name = canonical_name(headers[c]);
        if (!name) continue;
        for (std::size_t k = 0; k < kColumns.size(); ++k) {
            if (kColumns[k] == *name && index[k] < 0) {
                index[k] = static_cast<int>(c);
                percent[k] = is_percent_header(headers[c]) ||
                             options.percent_columns.count(std::string(kColumns[k])) > 0;
            }
        }
    }
    for (std::size_t k = 0; k < kColumns.size(); ++k) {
        if (index[k] < 0) throw SchemaError("missing column: " + std::string(kColumns[k]));
    }

    EconSeries series{options.country, options.currency_unit, {}};
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto [no, line] = lines[li];
        const auto cells = split(line, delim);
        if (cells.size() < headers.size()) {
            throw ValidationError("row " + std::to_string(no) + ": expected " +
                                  std::to_string(headers.size()) + " fields, got " +
                                  std::to_string(cells.size()));
        }
        std::array<double, kColumns.size()> v{};
        for (std::size_t k = 0; k < kColumns.size(); ++k) {
            v[k] = parse_number(cells[static_cast<std::size_t>(index[k])], options.decimal_comma, no,
                                kColumns[k]);
            if (percent[k]) v[k] /= 100.0;
        }
        if (v[0] != std::floor(v[0])) {
            throw ValidationError("row " + std::to_string(no) + ", column year: not an integer");
        }
        EconRecord r{static_cast<int>(v[0]), v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
        check_record(r, "row " + std::to_string(no) + " (year " + std::to_string(r.year) + ")");
        if (!series.records.empty() && r.year != series.records.back().year + 1) {
            throw GapError("years not contiguous: " + std::to_string(series.records.back().year) +
                           " followed by " + std::to_string(r.year) + " (row " + std::to_string(no) +
                           ")");
        }
        series.records.push_back(r);
    }
    if (series.records.empty()) throw ValidationError("no records");
    return series;
}

EconSeries read_series_file(const std::filesystem::path& path, const ParseOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_series(ss.str(), options);
}

std::string serialize_series(const EconSeries& series) {
    std::string out = "year,assets,loans,gdp,state_debt,savings_rate,population,cpi\n";
    for (const auto& r : series.records) {
        out += std::to_string(r.year);
        for (double v : {r.assets, r.loans, r.gdp, r.state_debt, r.savings_rate, r.population, r.cpi}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::string_view frg_appendix_text() { return kEmbeddedFrg; }

EconSeries frg_dataset() {
    static const EconSeries cached = [] {
        ParseOptions opts;
        opts.decimal_comma = true;
        opts.country = "FRG";
        opts.currency_unit = "bn EUR";
        return parse_series(kEmbeddedFrg, opts);
    }();
    return cached;
}

std::optional<std::filesystem::path> data_dir_override() {
    const char* env = std::getenv("MACROFIELD_DATA_DIR");
    if (env == nullptr || *env == '\0') return std::nullopt;
    return std::filesystem::path(env);
}

EconSeries load_frg_dataset() {
    if (auto dir = data_dir_override()) {
        ParseOptions opts;
        opts.country = "FRG";
        opts.currency_unit = "bn EUR";
        if (std::filesystem::exists(*dir / "frg.tsv")) {
            opts.decimal_comma = true;
            return read_series_file(*dir / "frg.tsv", opts);
        }
        if (std::filesystem::exists(*dir / "frg.csv")) return read_series_file(*dir / "frg.csv", opts);
    }
    return frg_dataset();
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

DebtRatio debt_ratio(const EconRecord& r) {
    if (r.assets / r.gdp < 1.0) return {r.state_debt / r.gdp, DebtBase::gdp};
    return {r.state_debt / r.assets, DebtBase::capital};
}

std::vector<int> DerivedSeries::years() const {
    std::vector<int> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.year);
    return out;
}

const std::vector<std::string>& DerivedSeries::column_names() {
    static const std::vector<std::string> names = {"k_t", "y_t", "k_c", "M_m", "k_m", "k_i",
                                                   "y_i", "p_rel", "p_v", "p_n_via_prel",
                                                   "p_n_residual", "debt_ratio"};
    return names;
}

std::vector<std::optional<double>> DerivedSeries::column(std::string_view name) const {
    std::optional<double> DerivedRow::*member = nullptr;
    if (name == "k_t") member = &DerivedRow::k_t;
    else if (name == "y_t") member = &DerivedRow::y_t;
    else if (name == "k_c") member = &DerivedRow::k_c;
    else if (name == "M_m") member = &DerivedRow::M_m;
    else if (name == "k_m") member = &DerivedRow::k_m;
    else if (name == "k_i") member = &DerivedRow::k_i;
    else if (name == "y_i") member = &DerivedRow::y_i;
    else if (name == "p_rel") member = &DerivedRow::p_rel;
    else if (name == "p_v") member = &DerivedRow::p_v;
    else if (name == "p_n_via_prel") member = &DerivedRow::p_n_via_prel;
    else if (name == "p_n_residual") member = &DerivedRow::p_n_residual;
    else if (name == "debt_ratio") member = &DerivedRow::debt_ratio;
    else throw ParameterError("unknown indicator column: " + std::string(name));
    std::vector<std::optional<double>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.*member);
    return out;
}

DerivedSeries derive_indicators(const EconSeries& series) {
    DerivedSeries out;
    const auto& rec = series.records;
    out.rows.reserve(rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) {
        const auto& r = rec[i];
        DerivedRow d;
        d.year = r.year;
        d.k_t = ratio(r.assets, r.gdp);
        d.y_t = ratio(r.gdp, r.assets);
        d.k_c = ratio(r.loans, r.gdp);
        d.M_m = r.assets - r.loans;
        d.k_m = ratio(r.assets - r.loans, r.gdp);
        d.p_rel = ratio(r.loans, r.assets);
        const auto dr = debt_ratio(r);
        d.debt_ratio = dr.ratio;
        d.debt_base = dr.base;
        if (i + 1 < rec.size()) {
            const auto& nx = rec[i + 1];
            const double dY = nx.gdp - r.gdp;
            const double dK = nx.assets - r.assets;
            d.k_i = ratio(dY, dK);
            d.k_i_unbounded = !d.k_i.has_value();
            d.y_i = ratio(dK, dY);
            d.y_i_unbounded = !d.y_i.has_value();
            d.p_v = dK / r.assets;
            d.p_n_via_prel = *d.p_v * (1.0 - 2.0 * (r.loans / r.assets));
            d.p_n_residual = (dK - r.savings_rate * r.gdp) / r.assets;
        }
        out.rows.push_back(d);
    }
    return out;
}

std::vector<std::optional<double>> derive_p_n(const EconSeries& series, PnEstimator estimator) {
    return derive_indicators(series).column(estimator == PnEstimator::via_p_rel ? "p_n_via_prel"
                                                                                 : "p_n_residual");
}

std::optional<int> find_crossing(std::span<const int> years,
                                 std::span<const std::optional<double>> values, double threshold,
                                 Direction direction) {
    const std::size_t n = std::min(years.size(), values.size());
    for (std::size_t i = 1; i < n; ++i) {
        const auto& prev = values[i - 1];
        const auto& cur = values[i];
        if (!prev || !cur) continue;
        const bool crossed = direction == Direction::up ? (*prev < threshold && *cur >= threshold)
                                                        : (*prev > threshold && *cur <= threshold);
        if (crossed) return years[i];
    }
    return std::nullopt;
}

std::string_view to_string(DebtBase base) { return base == DebtBase::gdp ? "gdp" : "capital"; }

std::string derived_to_csv(const DerivedSeries& derived) {
    std::string out = "year";
    for (const auto& n : DerivedSeries::column_names()) out += "," + n;
    out += ",debt_base\n";
    std::vector<std::vector<std::optional<double>>> cols;
    for (const auto& n : DerivedSeries::column_names()) cols.push_back(derived.column(n));
    for (std::size_t i = 0; i < derived.rows.size(); ++i) {
        out += std::to_string(derived.rows[i].year);
        for (const auto& c : cols) {
            out += ',';
            if (c[i]) out += format_double(*c[i]);
        }
        out += ',';
        out += to_string(derived.rows[i].debt_base);
        out += '\n';
    }
    return out;
}

} // namespace macrofield
