#pragma once

#include "macrofield/dataset.hpp"
#include "macrofield/model.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace macrofield::cli {

/// Runs the command line; returns the process exit code (0, 2 input, 3 numeric, 4 fit).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Figure ids accepted by `report`.
const std::vector<std::string>& figure_ids();

/// Column table with optional cells, emitted as CSV (empty cell when absent) or JSON records.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;

    void add(std::vector<std::optional<double>> row) { rows.push_back(std::move(row)); }
    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] std::string to_json() const;
};

/// Year-on-year population growth as a per-year rate table starting at the first year.
RateFn population_growth_table(const EconSeries& series);

/// Plot data for a figure id. Throws ParameterError for unknown ids.
Table figure_table(const std::string& id, const EconSeries& frg);

} // namespace macrofield::cli
