#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "spiked/error.hpp"
#include "spiked/risk.hpp"
#include "spiked/sim.hpp"
#include "svg.hpp"

namespace lab {

using spiked::Error;
using spiked::ErrorCode;
namespace risk = spiked::risk;
namespace sim = spiked::sim;

namespace {

std::string g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

risk::ModelConfig sweep_point(const SweepSpec& spec, double value) {
    ExperimentConfig cfg = spec.base;
    auto& m = cfg.model;
    const std::string& v = spec.variable;
    if (v == "n_trn") {
        m.n_trn = std::llround(value);
    } else if (v == "c") {
        if (!(value > 0.0)) throw Error(ErrorCode::InvalidConfig, "c must be positive");
        m.n_trn = std::llround(static_cast<double>(m.d) / value);
    } else if (v == "mu") {
        m.mu = value;
    } else if (v == "theta_trn") {
        if (cfg.scaling == ThetaScaling::EqualNorm) {
            throw Error(ErrorCode::InvalidConfig, "cannot sweep theta_trn under theta_scaling = equal_norm");
        }
        m.theta_trn = value;
    } else if (v == "tau_a_trn") {
        m.tau_a_trn = value;
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown sweep variable '" + v + "'");
    }
    const auto out = resolved(cfg);
    risk::validate(out);
    return out;
}

risk::RiskBreakdown theory_breakdown(const risk::ModelConfig& m, sim::Target target) {
    return target == sim::Target::SignalOnly ? risk::risk_so(m) : risk::risk_spn(m);
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
    if (spec.grid.empty()) throw Error(ErrorCode::InvalidConfig, "sweep grid is empty");
    for (std::size_t i = 1; i < spec.grid.size(); ++i) {
        if (!(spec.grid[i] > spec.grid[i - 1])) {
            throw Error(ErrorCode::InvalidConfig, "sweep grid must be strictly increasing");
        }
    }
    const auto target = spec.base.target;
    const auto trials = spec.base.trials;
    if (trials == 1 || trials < 0) throw Error(ErrorCode::InvalidConfig, "trials must be 0 or at least 2");

    std::vector<ResultRow> rows;
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        const auto m = sweep_point(spec, spec.grid[i]);
        const auto b = theory_breakdown(m, target);
        ResultRow r;
        r.grid_value = spec.grid[i];
        r.theory_total = b.total;
        r.theory_bias = b.bias;
        r.theory_var_a = b.variance_a;
        r.theory_var_a_eps = b.variance_a_eps;
        r.theory_adjustment = b.adjustment;
        if (target == sim::Target::SignalPlusNoise) {
            r.correction_term = b.regime == spiked::Regime::Over
                                    ? risk::spn_spike_correction(m.theta_trn, m.tau_a_trn, m.tau_eps_trn)
                                    : 0.0;
            r.asymptotic_no_correction = risk::spn_equal_norm_risk(m, false);
        }
        if (trials > 0) {
            const auto est = sim::monte_carlo_risk(m, target, trials, sim::derive_seed(spec.base.seed, i));
            r.empirical_mean = est.mean;
            r.empirical_stderr = est.stderr_;
        }
        rows.push_back(r);
    }
    return rows;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << text;
    f.close();
    if (!f) throw IoError("failed writing " + path);
}

int cmd_theory(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto m = resolved(cfg);
    risk::validate(m);
    for (const auto& w : risk::assumption_warnings(m)) err << "warning: " << w << '\n';
    const auto b = theory_breakdown(m, cfg.target);
    out << "target=" << sim::target_name(cfg.target) << '\n'
        << "c=" << g12(m.c()) << '\n'
        << "regime=" << spiked::regime_name(b.regime) << '\n'
        << "bias=" << g12(b.bias) << '\n'
        << "variance_a=" << g12(b.variance_a) << '\n'
        << "variance_a_eps=" << g12(b.variance_a_eps) << '\n'
        << "adjustment=" << g12(b.adjustment) << '\n'
        << "total=" << g12(b.total) << '\n';
    return kOk;
}

int cmd_sweep(const SweepSpec& spec, const std::string& csv_path, const std::optional<std::string>& svg_path,
              std::ostream& out) {
    const auto rows = run_sweep(spec);
    std::ostringstream csv;
    write_csv(csv, rows);
    write_text_file(csv_path, csv.str());
    out << "wrote " << rows.size() << " rows to " << csv_path << '\n';
    if (svg_path) {
        write_text_file(*svg_path, render_svg(rows));
        out << "wrote plot to " << *svg_path << '\n';
    }
    return kOk;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
    const auto m = resolved(cfg);
    const auto est = sim::monte_carlo_risk(m, cfg.target, cfg.trials, cfg.seed);
    out << "target=" << sim::target_name(cfg.target) << '\n'
        << "c=" << g12(m.c()) << '\n'
        << "trials=" << est.trials << '\n'
        << "seed_root=" << est.seed_root << '\n'
        << "empirical_mean=" << g12(est.mean) << '\n'
        << "empirical_stderr=" << g12(est.stderr_) << '\n';
    try {
        out << "theory_total=" << g12(theory_breakdown(m, cfg.target).total) << '\n';
    } catch (const Error& e) {
        out << "theory_total=unavailable (" << e.what() << ")\n";
    }
    return kOk;
}

int cmd_verify(VerifyLevel level, std::uint64_t seed, std::ostream& out) {
    const auto report = run_verify(verify_plan(level), seed);
    print_report(out, report);
    const auto failed = report.first_failure();
    if (!failed.empty()) {
        out << "verification FAILED: " << failed << '\n';
        return kVerifyFailed;
    }
    out << "verification passed\n";
    return kOk;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"spiked-lab: risk curves and Monte Carlo checks for spiked linear regression"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> trials;
    std::string target;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--seed", seed, "root seed");
    app.add_option("--trials", trials, "Monte Carlo trials (0: theory only)");
    app.add_option("--target", target, "so or spn")->check(CLI::IsMember({"so", "spn"}));
    app.add_option("--set", sets, "override one config field, key=value (repeatable)")->allow_extra_args(false);

    auto* theory = app.add_subcommand("theory", "print the closed-form risk breakdown");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo risk at one configuration");

    auto* sweep = app.add_subcommand("sweep", "risk curve over a grid");
    std::string out_csv, out_svg, grid, var;
    sweep->add_option("--out", out_csv, "CSV output path")->required();
    sweep->add_option("--svg", out_svg, "SVG output path");
    sweep->add_option("--grid", grid, "start:stop:step")->required();
    sweep->add_option("--var", var, "n_trn, c, mu, theta_trn or tau_a_trn")->required();

    auto* verify = app.add_subcommand("verify", "helper-form probe suite");
    std::string level = "quick";
    verify->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << '\n';
        return kDomainError;
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path, cfg);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw Error(ErrorCode::InvalidConfig, "--set expects key=value");
            set_field(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        if (seed) cfg.seed = *seed;
        if (trials) cfg.trials = *trials;
        if (!target.empty()) cfg.target = sim::parse_target(target);

        if (*theory) return cmd_theory(cfg, out, err);
        if (*simulate) {
            if (!trials && cfg.trials == 0) cfg.trials = 100;
            return cmd_simulate(cfg, out);
        }
        if (*sweep) {
            SweepSpec spec{var, parse_grid(grid).values(), cfg};
            std::optional<std::string> svg;
            if (!out_svg.empty()) svg = out_svg;
            return cmd_sweep(spec, out_csv, svg, out);
        }
        return cmd_verify(parse_level(level), seed.value_or(cfg.seed), out);
    } catch (const Error& e) {
        err << "error [" << spiked::error_code_name(e.code()) << "]: " << e.what() << '\n';
        return kDomainError;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::ios_base::failure& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoError;
    }
}

}  // namespace lab
