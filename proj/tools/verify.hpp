#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lab {

enum class VerifyLevel { Quick, Full };

VerifyLevel parse_level(const std::string& s);

struct VerifyPlan {
    std::int64_t d = 500;
    std::int64_t trials = 50;
    std::vector<double> cs{0.5, 2.0};
    std::vector<double> mus{0.0, 1.0};
    std::vector<double> taus{1.0, 5.0};
    double theta = 1.0;
    double tau_eps = 1.0;
    int noise_draws = 16;  // eps vectors averaged per bulk draw
    double z_limit = 3.0;
    unsigned threads = 0;
};

VerifyPlan verify_plan(VerifyLevel level);

struct ProbeRow {
    std::string name;     // helper form, e.g. "k_sq" or "zero:k_a_h"
    double c, mu, tau;
    double sampled_mean;
    double stderr_;
    double expected;
    double z;             // 0 when both the spread and the deviation vanish
    bool pass;
};

struct IdentityRow {
    std::string name;
    double error;
    double tol;
    bool pass;
};

struct VerifyReport {
    std::vector<ProbeRow> probes;
    std::vector<IdentityRow> identities;

    bool all_pass() const;
    // Name of the first failing probe or identity, empty when all pass.
    std::string first_failure() const;
};

VerifyReport run_verify(const VerifyPlan& plan, std::uint64_t seed_root);

void print_report(std::ostream& out, const VerifyReport& report);

}  // namespace lab
