#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spiked/risk.hpp"
#include "spiked/sim.hpp"

namespace lab {

enum class ThetaScaling {
    Fixed,      // theta_trn / theta_tst as given
    EqualNorm,  // theta = tau_a * sqrt(n), so Z and A have the same expected norm
};

struct ExperimentConfig {
    spiked::risk::ModelConfig model;
    bool n_tst_explicit = false;
    ThetaScaling scaling = ThetaScaling::Fixed;
    spiked::sim::Target target = spiked::sim::Target::SignalOnly;
    std::int64_t trials = 0;
    std::uint64_t seed = 20240601;
};

// Applies one `key = value` assignment. Throws spiked::Error(InvalidConfig).
void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Reads `key = value` lines; `#` starts a comment.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

// Model configuration with the theta scaling and the n_tst default resolved.
spiked::risk::ModelConfig resolved(const ExperimentConfig& cfg);

std::vector<std::string> field_names();

double parse_real(const std::string& text, const std::string& what);
std::int64_t parse_count(const std::string& text, const std::string& what);

struct Grid {
    double start;
    double stop;
    double step;
    std::vector<double> values() const;
};

Grid parse_grid(const std::string& text);

}  // namespace lab
