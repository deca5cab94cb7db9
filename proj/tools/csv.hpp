#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lab {

struct ResultRow {
    double grid_value = 0.0;
    double theory_total = 0.0;
    double theory_bias = 0.0;
    double theory_var_a = 0.0;
    double theory_var_a_eps = 0.0;
    double theory_adjustment = 0.0;
    std::optional<double> empirical_mean;
    std::optional<double> empirical_stderr;
    std::optional<double> correction_term;
    std::optional<double> asymptotic_no_correction;

    bool operator==(const ResultRow&) const = default;
};

const std::vector<std::string>& result_columns();

// Shortest decimal string that parses back to the same double.
std::string format_number(double x);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& in);

}  // namespace lab
