#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace macrofield {

inline constexpr double kEpsDiv = 1e-9;

/// One year of national accounts. Money in billions, rates as fractions per year.
struct EconRecord {
    int year = 0;
    double assets = 0.0;       ///< total financial capital stock K
    double loans = 0.0;        ///< lending to domestic non-banks L
    double gdp = 0.0;          ///< Y, billions per year
    double state_debt = 0.0;   ///< S_S
    double savings_rate = 0.0; ///< p_s
    double population = 0.0;   ///< thousands of persons
    double cpi = 0.0;          ///< official inflation, fraction per year

    bool operator==(const EconRecord&) const = default;
};

struct EconSeries {
    std::string country;
    std::string currency_unit;
    std::vector<EconRecord> records;

    [[nodiscard]] int first_year() const { return records.front().year; }
    [[nodiscard]] int last_year() const { return records.back().year; }
    [[nodiscard]] std::size_t size() const { return records.size(); }
    /// Record for a calendar year, or nullptr when out of range.
    [[nodiscard]] const EconRecord* find(int year) const;
    /// Contiguous sub-series covering [from, to] clipped to the available years.
    [[nodiscard]] EconSeries slice(int from, int to) const;
};

/// Throws ValidationError/GapError when a series breaks its invariants.
void validate(const EconSeries& series);

struct ParseOptions {
    bool decimal_comma = false;
    /// Canonical column names whose values are given in percent.
    /// Columns whose header contains '%' or ends in "_percent" are treated as percent too.
    std::set<std::string> percent_columns;
    std::string country;
    std::string currency_unit;
};

/// Parses delimited text (tab, ';' or ',' auto-detected from the header line).
EconSeries parse_series(std::string_view text, const ParseOptions& options = {});
EconSeries read_series_file(const std::filesystem::path& path, const ParseOptions& options = {});

/// Canonical CSV: comma delimiter, point decimals, shortest round-trip numerals.
std::string serialize_series(const EconSeries& series);

/// Raw text of the embedded FRG 1950-2012 table.
std::string_view frg_appendix_text();
EconSeries frg_dataset();
/// Alternative FRG dataset from $MACROFIELD_DATA_DIR (frg.tsv with decimal commas,
/// or frg.csv with point decimals); falls back to the embedded table.
EconSeries load_frg_dataset();
std::optional<std::filesystem::path> data_dir_override();

std::uint64_t fnv1a64(std::string_view bytes);

enum class DebtBase { gdp, capital };

struct DerivedRow {
    int year = 0;
    std::optional<double> k_t;   ///< K/Y
    std::optional<double> y_t;   ///< Y/K
    std::optional<double> k_c;   ///< L/Y
    std::optional<double> M_m;   ///< K - L
    std::optional<double> k_m;   ///< (K - L)/Y
    std::optional<double> k_i;   ///< dY/dK, forward difference
    std::optional<double> y_i;   ///< dK/dY, forward difference
    bool k_i_unbounded = false;
    bool y_i_unbounded = false;
    std::optional<double> p_rel; ///< L/K
    std::optional<double> p_v;   ///< dK/K, forward difference
    std::optional<double> p_n_via_prel;
    std::optional<double> p_n_residual;
    std::optional<double> debt_ratio;
    DebtBase debt_base = DebtBase::gdp;
};

struct DerivedSeries {
    std::vector<DerivedRow> rows;

    [[nodiscard]] std::vector<int> years() const;
    /// Column by name: k_t, y_t, k_c, M_m, k_m, k_i, y_i, p_rel, p_v,
    /// p_n_via_prel, p_n_residual, debt_ratio. Throws ParameterError otherwise.
    [[nodiscard]] std::vector<std::optional<double>> column(std::string_view name) const;
    [[nodiscard]] static const std::vector<std::string>& column_names();
};

DerivedSeries derive_indicators(const EconSeries& series);

enum class PnEstimator { via_p_rel, capital_residual };

std::vector<std::optional<double>> derive_p_n(const EconSeries& series, PnEstimator estimator);

struct DebtRatio {
    double ratio;
    DebtBase base;
};

/// S/Y while K/Y < 1, S/K from K/Y = 1 on.
DebtRatio debt_ratio(const EconRecord& record);

enum class Direction { up, down };

/// First year whose predecessor is strictly on the origin side of the threshold
/// while the year itself is on or past it. Absent cells never form a crossing.
std::optional<int> find_crossing(std::span<const int> years,
                                 std::span<const std::optional<double>> values,
                                 double threshold, Direction direction);

std::string_view to_string(DebtBase base);
/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
std::string derived_to_csv(const DerivedSeries& derived);

} // namespace macrofield
