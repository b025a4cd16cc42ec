#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "prefmono/errors.hpp"

namespace prefmono {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Finite sets of background (prompt) and alternative (response) identifiers,
/// mapped to dense indices at construction.
class ProblemSpace {
public:
    ProblemSpace(std::vector<std::string> backgrounds, std::vector<std::string> alternatives)
        : backgrounds_(std::move(backgrounds)), alternatives_(std::move(alternatives)) {
        if (backgrounds_.empty() || alternatives_.empty())
            throw InputError("problem space: backgrounds and alternatives must be nonempty");
        for (std::size_t i = 0; i < backgrounds_.size(); ++i)
            if (!background_index_.emplace(backgrounds_[i], static_cast<int>(i)).second)
                throw InputError("problem space: duplicate background '" + backgrounds_[i] + "'");
        for (std::size_t i = 0; i < alternatives_.size(); ++i)
            if (!alternative_index_.emplace(alternatives_[i], static_cast<int>(i)).second)
                throw InputError("problem space: duplicate alternative '" + alternatives_[i] + "'");
    }

    int background_index(const std::string& x) const {
        auto it = background_index_.find(x);
        if (it == background_index_.end()) throw LookupError("unknown background '" + x + "'");
        return it->second;
    }
    int alternative_index(const std::string& y) const {
        auto it = alternative_index_.find(y);
        if (it == alternative_index_.end()) throw LookupError("unknown alternative '" + y + "'");
        return it->second;
    }

    int num_backgrounds() const { return static_cast<int>(backgrounds_.size()); }
    int num_alternatives() const { return static_cast<int>(alternatives_.size()); }
    const std::vector<std::string>& backgrounds() const { return backgrounds_; }
    const std::vector<std::string>& alternatives() const { return alternatives_; }

private:
    std::vector<std::string> backgrounds_;
    std::vector<std::string> alternatives_;
    std::unordered_map<std::string, int> background_index_;
    std::unordered_map<std::string, int> alternative_index_;
};

/// Parameterized scoring s_{y|x}(theta): one-hot table, linear-in-embedding,
/// or softmax policy with a reference-relative (DPO-style) score.
///
/// The DPO score here is beta * (log pi_theta(y|x) - log pi_ref(y|x)), i.e.
/// the reward with the beta*log Z_x(theta) term dropped. Score differences,
/// in which log Z_x cancels, are unaffected; the per-alternative accessor
/// carries difference-only semantics.
class ScoreModel {
public:
    enum class Kind { one_hot, linear, dpo_softmax };
    using EmbeddingMap = std::map<std::pair<std::string, std::string>, Vector>;

    static ScoreModel one_hot(ProblemSpace space) {
        ScoreModel m(Kind::one_hot, std::move(space));
        m.dim_ = m.space_.num_backgrounds() * m.space_.num_alternatives();
        return m;
    }

    static ScoreModel linear(ProblemSpace space, EmbeddingMap embedding) {
        ScoreModel m(Kind::linear, std::move(space));
        if (embedding.empty()) throw InputError("linear model: empty embedding map");
        m.dim_ = static_cast<int>(embedding.begin()->second.size());
        for (const auto& [key, vec] : embedding) {
            if (vec.size() != m.dim_)
                throw InputError("linear model: inconsistent embedding dimension for (" +
                                 key.first + ", " + key.second + ")");
            if (!vec.allFinite())
                throw InputError("linear model: nonfinite embedding entries");
            m.space_.background_index(key.first);
            m.space_.alternative_index(key.second);
        }
        m.embedding_ = std::move(embedding);
        return m;
    }

    static ScoreModel dpo_softmax(ProblemSpace space, Vector reference_logits, double beta) {
        ScoreModel m(Kind::dpo_softmax, std::move(space));
        m.dim_ = m.space_.num_backgrounds() * m.space_.num_alternatives();
        if (reference_logits.size() != m.dim_)
            throw InputError("dpo model: reference logits must have length |B|*|A|");
        if (!reference_logits.allFinite())
            throw InputError("dpo model: nonfinite reference logits");
        if (!(beta > 0.0)) throw InputError("dpo model: beta must be positive");
        m.reference_logits_ = std::move(reference_logits);
        m.beta_ = beta;
        return m;
    }

    Kind kind() const { return kind_; }
    const ProblemSpace& space() const { return space_; }
    int dim() const { return dim_; }
    double beta() const { return beta_; }

    /// Index of theta coordinate (x, y) for logit-backed models.
    int logit_index(int xi, int yi) const {
        return xi * space_.num_alternatives() + yi;
    }
    int logit_index(const std::string& x, const std::string& y) const {
        return logit_index(space_.background_index(x), space_.alternative_index(y));
    }

    double score(const Vector& theta, const std::string& x, const std::string& y) const {
        check_theta(theta);
        int xi = space_.background_index(x);
        int yi = space_.alternative_index(y);
        switch (kind_) {
            case Kind::one_hot: return theta[logit_index(xi, yi)];
            case Kind::linear: return theta.dot(embedding_vector(x, y));
            case Kind::dpo_softmax: {
                int i = logit_index(xi, yi);
                double lse_theta = block_logsumexp(theta, xi);
                double lse_ref = block_logsumexp(reference_logits_, xi);
                return beta_ * ((theta[i] - lse_theta) - (reference_logits_[i] - lse_ref));
            }
        }
        return 0.0;
    }

    double score_difference(const Vector& theta, const std::string& x, const std::string& y,
                            const std::string& z) const {
        return score(theta, x, y) - score(theta, x, z);
    }

    Vector score_gradient(const Vector& theta, const std::string& x, const std::string& y) const {
        check_theta(theta);
        int xi = space_.background_index(x);
        int yi = space_.alternative_index(y);
        Vector g = Vector::Zero(dim_);
        switch (kind_) {
            case Kind::one_hot:
                g[logit_index(xi, yi)] = 1.0;
                break;
            case Kind::linear:
                g = embedding_vector(x, y);
                break;
            case Kind::dpo_softmax: {
                Vector pi = block_softmax(theta, xi);
                int base = xi * space_.num_alternatives();
                for (int w = 0; w < space_.num_alternatives(); ++w) g[base + w] = -beta_ * pi[w];
                g[logit_index(xi, yi)] += beta_;
                break;
            }
        }
        return g;
    }

    Vector score_difference_gradient(const Vector& theta, const std::string& x,
                                     const std::string& y, const std::string& z) const {
        return score_gradient(theta, x, y) - score_gradient(theta, x, z);
    }

    /// Hessian of s_{y|x} in theta. Zero for one_hot and linear; the softmax
    /// curvature -beta*(diag(pi) - pi pi^T) on the x-block for dpo_softmax
    /// (independent of y, so score-difference Hessians vanish).
    Matrix score_hessian(const Vector& theta, const std::string& x, const std::string&) const {
        check_theta(theta);
        Matrix h = Matrix::Zero(dim_, dim_);
        if (kind_ != Kind::dpo_softmax) return h;
        int xi = space_.background_index(x);
        Vector pi = block_softmax(theta, xi);
        int base = xi * space_.num_alternatives();
        int a = space_.num_alternatives();
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < a; ++j)
                h(base + i, base + j) = -beta_ * ((i == j ? pi[i] : 0.0) - pi[i] * pi[j]);
        return h;
    }

    bool zero_score_hessian() const { return kind_ != Kind::dpo_softmax; }

    /// Whether theta exposes generation probabilities (logit-backed models;
    /// one_hot parameters are interpreted directly as logits).
    bool has_probabilities() const { return kind_ != Kind::linear; }

    double probability(const Vector& theta, const std::string& x, const std::string& y) const {
        Vector pi = probabilities(theta, x);
        return pi[space_.alternative_index(y)];
    }

    /// Softmax of the x-block of theta over all alternatives, max-shifted.
    Vector probabilities(const Vector& theta, const std::string& x) const {
        check_theta(theta);
        if (!has_probabilities())
            throw UnsupportedOperationError("linear models expose no generation probabilities");
        return block_softmax(theta, space_.background_index(x));
    }

private:
    ScoreModel(Kind k, ProblemSpace s) : kind_(k), space_(std::move(s)) {}

    void check_theta(const Vector& theta) const {
        if (theta.size() != dim_)
            throw InputError("parameter vector has length " + std::to_string(theta.size()) +
                             ", expected " + std::to_string(dim_));
        if (!theta.allFinite()) throw InputError("parameter vector has nonfinite entries");
    }

    const Vector& embedding_vector(const std::string& x, const std::string& y) const {
        auto it = embedding_.find({x, y});
        if (it == embedding_.end())
            throw LookupError("no embedding for (" + x + ", " + y + ")");
        return it->second;
    }

    double block_logsumexp(const Vector& v, int xi) const {
        int base = xi * space_.num_alternatives();
        int a = space_.num_alternatives();
        double m = v.segment(base, a).maxCoeff();
        double acc = 0.0;
        for (int i = 0; i < a; ++i) acc += std::exp(v[base + i] - m);
        return m + std::log(acc);
    }

    Vector block_softmax(const Vector& v, int xi) const {
        int base = xi * space_.num_alternatives();
        int a = space_.num_alternatives();
        double m = v.segment(base, a).maxCoeff();
        Vector p(a);
        double acc = 0.0;
        for (int i = 0; i < a; ++i) {
            p[i] = std::exp(v[base + i] - m);
            acc += p[i];
        }
        return p / acc;
    }

    Kind kind_;
    ProblemSpace space_;
    int dim_ = 0;
    double beta_ = 1.0;
    EmbeddingMap embedding_;
    Vector reference_logits_;
};

}  // namespace prefmono
