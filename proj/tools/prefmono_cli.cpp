// prefmono: batch front-end for monotonicity audits of comparison-based
// preference learning losses.

#include <cstdint>
#include <iostream>
#include <random>
#include <string>

#include "prefmono/prefmono.hpp"

#include "CLI11.hpp"

namespace {

prefmono::ReportFormat parse_format(const std::string& s) {
    if (s == "csv") return prefmono::ReportFormat::csv;
    if (s == "json") return prefmono::ReportFormat::json;
    if (s == "both") return prefmono::ReportFormat::both;
    throw prefmono::InputError("unknown format '" + s + "' (expected csv|json|both)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prefmono: monotonicity audits for comparison-based preference learning"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    std::string format = "both";
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    app.add_option("--out-dir", out_dir, "Output directory for report files")
        ->envname("PREFMONO_OUT_DIR");
    app.add_option("--format", format, "Report format: csv, json or both");
    app.add_option("--seed", seed_override, "Override the config's random seed")
        ->each([&](const std::string&) { seed_set = true; });

    std::string config_path;
    auto* audit_cmd = app.add_subcommand("audit", "Run the audits listed in a config file");
    audit_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();

    auto* fig_cmd = app.add_subcommand("figure1",
                                       "Run the gradient-step score-trace analog experiment");
    fig_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();

    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a config file");
    validate_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();

    int lemma_dim = 8;
    int lemma_trials = 1000;
    auto* lemma_cmd = app.add_subcommand(
        "check-lemma", "Randomized check of the inverse-difference property of strictly "
                       "diagonally dominant matrices");
    lemma_cmd->add_option("--dim", lemma_dim, "Matrix dimension")->check(CLI::PositiveNumber);
    lemma_cmd->add_option("--trials", lemma_trials, "Number of random matrices")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (lemma_cmd->parsed()) {
            std::mt19937_64 rng(seed_set ? seed_override : 12345);
            double worst = std::numeric_limits<double>::infinity();
            int failures = 0;
            for (int t = 0; t < lemma_trials; ++t) {
                prefmono::Matrix m = prefmono::random_dominant_matrix(lemma_dim, rng);
                prefmono::LemmaVerdict v = prefmono::lemma_inverse_difference_check(m);
                worst = std::min(worst, v.min_margin);
                if (!v.ok) ++failures;
            }
            std::cout << "check-lemma: dim=" << lemma_dim << " trials=" << lemma_trials
                      << " failures=" << failures << " worst_margin="
                      << prefmono::format_double(worst) << "\n";
            return failures == 0 ? 0 : 1;
        }

        prefmono::ExperimentConfig cfg = prefmono::load_config(config_path);
        if (seed_set) cfg.seed = seed_override;

        if (validate_cmd->parsed()) {
            std::cout << "config ok: " << cfg.audits.size() << " audit(s)"
                      << (cfg.figure1 ? ", figure1 section present" : "") << "\n";
            return 0;
        }
        if (audit_cmd->parsed()) {
            int rc = prefmono::run_config(cfg, out_dir, parse_format(format));
            std::cout << "wrote " << out_dir << "/" << cfg.out_prefix << "_summary.*\n";
            return rc;
        }
        if (fig_cmd->parsed()) {
            prefmono::RecordTable trace = prefmono::run_figure1(cfg);
            prefmono::emit_report(trace, out_dir, cfg.out_prefix + "_figure1",
                                  parse_format(format));
            std::cout << "wrote " << out_dir << "/" << cfg.out_prefix << "_figure1.* ("
                      << trace.size() << " steps)\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
