#include "csv.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lab {

const std::vector<std::string>& result_columns() {
    static const std::vector<std::string> cols = {
        "grid_value",       "theory_total",    "theory_bias",      "theory_var_a",
        "theory_var_a_eps", "theory_adjustment", "empirical_mean", "empirical_stderr",
        "correction_term",  "asymptotic_no_correction"};
    return cols;
}

std::string format_number(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

namespace {

std::string cell(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

std::optional<double> parse_cell(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw std::runtime_error("csv: bad number '" + s + "'");
    }
    return x;
}

double required(const std::string& s) {
    const auto x = parse_cell(s);
    if (!x) throw std::runtime_error("csv: empty theory cell");
    return *x;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    const auto& cols = result_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : rows) {
        out << format_number(r.grid_value) << ',' << format_number(r.theory_total) << ','
            << format_number(r.theory_bias) << ',' << format_number(r.theory_var_a) << ','
            << format_number(r.theory_var_a_eps) << ',' << format_number(r.theory_adjustment) << ','
            << cell(r.empirical_mean) << ',' << cell(r.empirical_stderr) << ',' << cell(r.correction_term)
            << ',' << cell(r.asymptotic_no_correction) << '\n';
    }
}

std::vector<ResultRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
    std::string expected;
    for (const auto& c : result_columns()) expected += (expected.empty() ? "" : ",") + c;
    if (line != expected) throw std::runtime_error("csv: unexpected header");

    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(item);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != result_columns().size()) throw std::runtime_error("csv: wrong column count");
        ResultRow r;
        r.grid_value = required(f[0]);
        r.theory_total = required(f[1]);
        r.theory_bias = required(f[2]);
        r.theory_var_a = required(f[3]);
        r.theory_var_a_eps = required(f[4]);
        r.theory_adjustment = required(f[5]);
        r.empirical_mean = parse_cell(f[6]);
        r.empirical_stderr = parse_cell(f[7]);
        r.correction_term = parse_cell(f[8]);
        r.asymptotic_no_correction = parse_cell(f[9]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace lab
