#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "verify.hpp"

namespace lab {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kDomainError = 2, kIoError = 3 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    std::string variable;  // n_trn, c, mu, theta_trn or tau_a_trn
    std::vector<double> grid;
    ExperimentConfig base;
};

// Model configuration at one grid point, with scaling and n_tst resolved.
spiked::risk::ModelConfig sweep_point(const SweepSpec& spec, double value);

spiked::risk::RiskBreakdown theory_breakdown(const spiked::risk::ModelConfig& m, spiked::sim::Target target);

std::vector<ResultRow> run_sweep(const SweepSpec& spec);

void write_text_file(const std::string& path, const std::string& text);

int cmd_theory(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepSpec& spec, const std::string& csv_path, const std::optional<std::string>& svg_path,
              std::ostream& out);
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out);
int cmd_verify(VerifyLevel level, std::uint64_t seed, std::ostream& out);

// Full command-line entry point; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace lab
