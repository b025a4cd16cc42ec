#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "prefmono/audit.hpp"
#include "prefmono/report.hpp"
#include "prefmono/solver.hpp"

#include "json.hpp"

namespace prefmono {

constexpr int kConfigSchemaVersion = 1;

/// One audit request from an experiment config.
struct AuditSpec {
    std::string id;
    std::string flavor;  // pairwise | global_ladder | individual_score |
                         // fully_pairwise | gradient_descent
    std::string x, y, z;
    PerturbationMode mode = PerturbationMode::intensification;
    std::vector<double> epsilons{1e-2, 1e-3, 1e-4};
    std::vector<double> ladder;
    std::optional<Vector> theta;  // gradient_descent start point (default: zero)
};

struct Figure1Spec {
    std::vector<std::array<std::string, 3>> pairs;  // (x, chosen, rejected) stream
    double step_size = 1e-2;
    std::optional<Vector> theta_init;
};

struct ExperimentConfig {
    int schema_version = kConfigSchemaVersion;
    std::uint64_t seed = 0;
    Problem problem;
    SolveSettings solver;
    std::vector<AuditSpec> audits;
    std::optional<Figure1Spec> figure1;
    std::string out_prefix = "report";
};

namespace detail {

using nlohmann::json;

inline Vector parse_vector(const json& j) {
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
    return v;
}

inline RootLaw parse_root_law(const json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "two_point") return RootLaw::two_point();
    if (type == "uniform")
        return RootLaw::uniform(j.value("lo", -1.0), j.value("hi", 1.0));
    if (type == "gaussian") return RootLaw::gaussian();
    if (type == "tabulated")
        return RootLaw::tabulated(j.at("support").get<std::vector<double>>(),
                                  j.at("weights").get<std::vector<double>>());
    throw InputError("config: unknown root law type '" + type + "'");
}

inline LossFamily parse_loss(const json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "bradley_terry") return LossFamily::bradley_terry();
    if (type == "uniform_gbt") return LossFamily::uniform_gbt();
    if (type == "gaussian_gbt") return LossFamily::gaussian_gbt();
    if (type == "slic") return LossFamily::slic();
    if (type == "ipo") return LossFamily::ipo();
    if (type == "gbt") return LossFamily::gbt(parse_root_law(j.at("root")));
    throw InputError("config: unknown loss type '" + type + "'");
}

inline ScoreModel parse_model(const json& j) {
    std::string type = j.at("type").get<std::string>();
    ProblemSpace space(j.at("backgrounds").get<std::vector<std::string>>(),
                       j.at("alternatives").get<std::vector<std::string>>());
    if (type == "one_hot") return ScoreModel::one_hot(std::move(space));
    if (type == "linear") {
        ScoreModel::EmbeddingMap emb;
        for (const auto& [x, per_alt] : j.at("embeddings").items())
            for (const auto& [y, vec] : per_alt.items())
                emb.emplace(std::make_pair(x, y), parse_vector(vec));
        return ScoreModel::linear(std::move(space), std::move(emb));
    }
    if (type == "dpo_softmax")
        return ScoreModel::dpo_softmax(std::move(space),
                                       parse_vector(j.at("reference_logits")),
                                       j.value("beta", 1.0));
    throw InputError("config: unknown model type '" + type + "'");
}

inline Regularizer parse_regularizer(const json& j, int dim) {
    std::string type = j.at("type").get<std::string>();
    if (type == "none") return Regularizer::none();
    if (type == "l2") {
        double lambda = j.at("lambda").get<double>();
        if (j.contains("center")) return Regularizer::l2(lambda, parse_vector(j.at("center")));
        return Regularizer::l2(lambda, dim);
    }
    throw InputError("config: unknown regularizer type '" + type + "'");
}

inline Dataset parse_dataset(const json& j, const ComparisonDomain& domain,
                             const std::filesystem::path& base_dir) {
    if (j.contains("path")) {
        std::filesystem::path p = j.at("path").get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        return Dataset::load_csv(p.string(), domain);
    }
    std::vector<Comparison> comps;
    for (const auto& rec : j.at("inline")) {
        comps.push_back({rec.at("x").get<std::string>(), rec.at("y").get<std::string>(),
                         rec.at("z").get<std::string>(), rec.at("c").get<double>(),
                         rec.value("weight", 1.0)});
    }
    return Dataset(domain, std::move(comps));
}

inline PerturbationMode parse_mode(const std::string& s) {
    if (s == "unequivocal") return PerturbationMode::unequivocal;
    if (s == "intensification" || s == "intensify") return PerturbationMode::intensification;
    throw InputError("config: unknown perturbation mode '" + s + "'");
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j,
                                     const std::filesystem::path& base_dir = ".") {
    int version = j.value("schema_version", kConfigSchemaVersion);
    if (version != kConfigSchemaVersion)
        throw InputError("config: unsupported schema_version " + std::to_string(version));

    LossFamily family = detail::parse_loss(j.at("loss"));
    ScoreModel model = detail::parse_model(j.at("model"));
    Regularizer reg = j.contains("regularizer")
                          ? detail::parse_regularizer(j.at("regularizer"), model.dim())
                          : Regularizer::none();
    Dataset dataset = j.contains("dataset")
                          ? detail::parse_dataset(j.at("dataset"), family.domain(), base_dir)
                          : Dataset(family.domain());

    ExperimentConfig cfg{version,
                         j.value("seed", std::uint64_t{0}),
                         Problem(std::move(dataset), std::move(family), std::move(model),
                                 std::move(reg)),
                         SolveSettings{},
                         {},
                         std::nullopt,
                         j.value("out_prefix", std::string("report"))};
    if (j.contains("solver")) {
        cfg.solver.tolerance = j["solver"].value("tolerance", cfg.solver.tolerance);
        cfg.solver.max_iterations = j["solver"].value("max_iterations",
                                                      cfg.solver.max_iterations);
    }
    int index = 0;
    for (const auto& a : j.value("audits", nlohmann::json::array())) {
        AuditSpec spec;
        spec.flavor = a.at("flavor").get<std::string>();
        spec.id = a.value("id", "audit_" + std::to_string(index));
        ++index;
        spec.x = a.at("x").get<std::string>();
        spec.y = a.at("y").get<std::string>();
        spec.z = a.at("z").get<std::string>();
        if (a.contains("mode")) spec.mode = detail::parse_mode(a["mode"].get<std::string>());
        if (a.contains("epsilons")) spec.epsilons = a["epsilons"].get<std::vector<double>>();
        if (a.contains("ladder")) spec.ladder = a["ladder"].get<std::vector<double>>();
        if (a.contains("theta")) spec.theta = detail::parse_vector(a["theta"]);
        // identifiers must resolve
        cfg.problem.model.space().background_index(spec.x);
        cfg.problem.model.space().alternative_index(spec.y);
        cfg.problem.model.space().alternative_index(spec.z);
        cfg.audits.push_back(std::move(spec));
    }
    if (j.contains("figure1")) {
        Figure1Spec fig;
        for (const auto& pr : j["figure1"].at("pairs"))
            fig.pairs.push_back({pr.at(0).get<std::string>(), pr.at(1).get<std::string>(),
                                 pr.at(2).get<std::string>()});
        fig.step_size = j["figure1"].value("step_size", fig.step_size);
        if (j["figure1"].contains("theta_init"))
            fig.theta_init = detail::parse_vector(j["figure1"]["theta_init"]);
        cfg.figure1 = std::move(fig);
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("config parse error in '" + path + "': " + e.what());
    }
    try {
        return parse_config(j, std::filesystem::path(path).parent_path());
    } catch (const nlohmann::json::exception& e) {
        throw InputError("config validation error in '" + path + "': " + e.what());
    }
}

inline const std::vector<std::string>& summary_columns() {
    static const std::vector<std::string> cols = {
        "scenario",       "flavor",     "mode",         "x",
        "y",              "z",          "epsilon",      "alpha",
        "rate_beta",      "predicted_delta", "realized_delta", "relative_residual",
        "pairwise",       "fully_pairwise",  "individual_score_y", "individual_score_z",
        "individual_probability", "assumption", "basin_ok", "inconclusive"};
    return cols;
}

/// Executes every audit in the config and returns one summary record per
/// scenario x epsilon. Violations are findings, not errors.
inline RecordTable run_audits(const ExperimentConfig& cfg) {
    RecordTable table(summary_columns());
    const Problem& p = cfg.problem;
    auto vk = [](VerdictKind v) { return std::string(to_string(v)); };

    for (const AuditSpec& spec : cfg.audits) {
        auto emit = [&](double eps, const FlavorVerdicts& v, const AuditReport* pr,
                        const std::string& assumption, bool basin_ok, bool inconclusive) {
            table.add_row({spec.id, spec.flavor, to_string(spec.mode), spec.x, spec.y, spec.z,
                           format_double(eps), format_double(pr ? pr->alpha : 0.0),
                           format_double(pr ? pr->rate_beta : 0.0),
                           format_double(pr ? pr->predicted_delta : 0.0),
                           format_double(pr ? pr->realized_delta : 0.0),
                           format_double(pr ? pr->relative_residual : 0.0), vk(v.pairwise),
                           vk(v.fully_pairwise), vk(v.individual_score_y),
                           vk(v.individual_score_z), vk(v.individual_probability), assumption,
                           basin_ok ? "true" : "false", inconclusive ? "true" : "false"});
        };

        if (spec.flavor == "pairwise") {
            for (double eps : spec.epsilons) {
                AuditReport rep = audit_local_pairwise(p, spec.x, spec.y, spec.z, spec.mode,
                                                       eps, cfg.solver);
                emit(eps, rep.verdicts, &rep, to_string(rep.assumption.verdict), rep.basin_ok,
                     rep.inconclusive);
            }
        } else if (spec.flavor == "global_ladder") {
            LadderReport rep = audit_global_ladder(p, spec.x, spec.y, spec.z, spec.mode,
                                                   spec.ladder, cfg.solver);
            FlavorVerdicts v;
            v.pairwise = rep.verdict;
            emit(spec.ladder.empty() ? 0.0 : spec.ladder.back(), v, nullptr,
                 rep.reason.empty() ? "holds" : rep.reason, true, false);
        } else if (spec.flavor == "individual_score") {
            for (double eps : spec.epsilons) {
                IndividualScoreReport rep =
                    audit_individual_score(p, spec.x, spec.y, spec.z, eps, cfg.solver);
                FlavorVerdicts v;
                v.individual_score_y = rep.score_y;
                v.individual_score_z = rep.score_z;
                emit(eps, v, nullptr,
                     rep.dominance.ok ? "max_diag_dominant" : "dominance_failed", true,
                     rep.inconclusive);
            }
        } else if (spec.flavor == "fully_pairwise") {
            for (double eps : spec.epsilons) {
                FullyPairwiseReport rep = audit_fully_pairwise_and_probability(
                    p, spec.x, spec.y, spec.z, spec.mode, eps, cfg.solver);
                FlavorVerdicts v;
                v.fully_pairwise = rep.fully_pairwise;
                v.individual_probability = rep.individual_probability;
                emit(eps, v, nullptr, rep.implication_ok ? "implication_ok" : "implication_broken",
                     true, rep.inconclusive);
            }
        } else if (spec.flavor == "gradient_descent") {
            for (double eps : spec.epsilons) {
                Vector theta = spec.theta ? *spec.theta : Vector::Zero(p.model.dim());
                GradientStepReport rep =
                    audit_gradient_descent(p, theta, spec.x, spec.y, spec.z, eps);
                FlavorVerdicts v;
                v.pairwise = rep.pairwise;
                v.fully_pairwise = rep.fully_pairwise;
                v.individual_score_y = rep.individual_score_y;
                v.individual_probability = rep.individual_probability;
                std::string preds = std::string(rep.predicate_pairwise ? "P" : "-") +
                                    (rep.predicate_individual ? "I" : "-") +
                                    (rep.predicate_fully ? "F" : "-");
                emit(eps, v, nullptr, "predicates=" + preds, true, false);
            }
        } else {
            throw InputError("config: unknown audit flavor '" + spec.flavor + "'");
        }
    }
    return table;
}

inline const std::vector<std::string>& figure1_columns() {
    static const std::vector<std::string> cols = {
        "step",          "x",          "chosen",        "rejected",
        "chosen_delta",  "rejected_delta", "pairwise_delta",
        "pred_pairwise", "pred_individual", "pred_fully"};
    return cols;
}

/// Desk-scale nonmonotonicity trace experiment: a stream of
/// (x, chosen, rejected) pairs, one explicit gradient step each, with
/// before/after score deltas and the gradient-descent predicates that
/// explain every sign. Qualitative only; synthetic desk-scale models.
inline RecordTable run_figure1(const ExperimentConfig& cfg) {
    if (!cfg.figure1) throw InputError("config has no figure1 section");
    const Figure1Spec& fig = *cfg.figure1;
    const Problem& p = cfg.problem;
    if (!p.reg.is_none())
        throw PreconditionError("figure1 analog requires nil regularization");

    RecordTable table(figure1_columns());
    Vector theta = fig.theta_init ? *fig.theta_init : Vector::Zero(p.model.dim());
    int step = 0;
    for (const auto& [x, chosen, rejected] : fig.pairs) {
        GradientStepReport rep =
            audit_gradient_descent(p, theta, x, chosen, rejected, fig.step_size);
        double chosen_delta = rep.realized_individual_y;
        double rejected_delta = p.model.score(rep.theta_eps, x, rejected) -
                                p.model.score(theta, x, rejected);
        table.add_row({std::to_string(step), x, chosen, rejected, format_double(chosen_delta),
                       format_double(rejected_delta), format_double(rep.realized_pairwise),
                       rep.predicate_pairwise ? "true" : "false",
                       rep.predicate_individual ? "true" : "false",
                       rep.predicate_fully ? "true" : "false"});
        theta = rep.theta_eps;
        ++step;
    }
    return table;
}

enum class ReportFormat { csv, json, both };

inline void emit_report(const RecordTable& table, const std::string& out_dir,
                        const std::string& stem, ReportFormat format) {
    std::filesystem::create_directories(out_dir);
    std::filesystem::path base = std::filesystem::path(out_dir) / stem;
    if (format == ReportFormat::csv || format == ReportFormat::both)
        table.write_csv(base.string() + ".csv");
    if (format == ReportFormat::json || format == ReportFormat::both)
        table.write_json(base.string() + ".json");
}

/// Runs every audit in the config file and writes summary report files.
/// Returns 0 iff no audit errored (violations are findings, not errors).
inline int run_config(const ExperimentConfig& cfg, const std::string& out_dir,
                      ReportFormat format = ReportFormat::both) {
    RecordTable summary = run_audits(cfg);
    emit_report(summary, out_dir, cfg.out_prefix + "_summary", format);
    return 0;
}

}  // namespace prefmono
