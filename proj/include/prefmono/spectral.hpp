#pragma once

#include <Eigen/Dense>
#include <random>

#include "prefmono/errors.hpp"
#include "prefmono/score_model.hpp"

namespace prefmono {

/// Outcome of a matrix-structure predicate, with the violating entry when it
/// fails (row == col == -1 when it holds).
struct DominanceVerdict {
    bool ok = false;
    int row = -1;
    int col = -1;
};

/// Worst-case margin of the inverse-difference inequality over all index
/// triples (y, z, w): min of (N_yy - N_yz) - (N_wy - N_wz).
struct LemmaVerdict {
    bool ok = false;
    double min_margin = 0.0;
    int y = -1, z = -1, w = -1;  // minimizing triple
    double min_diag_gap = 0.0;   // min over y != z of N_yy - N_yz
};

namespace detail {
inline void require_symmetric(const Matrix& m, double tol = 1e-10) {
    if (m.rows() != m.cols()) throw InputError("matrix must be square");
    if ((m - m.transpose()).lpNorm<Eigen::Infinity>() > tol)
        throw InputError("matrix must be symmetric");
    if (!m.allFinite()) throw InputError("matrix must have finite entries");
}
}  // namespace detail

/// M_ii >= M_ij for every row i and every j != i.
inline DominanceVerdict is_max_diag_dominant(const Matrix& m) {
    detail::require_symmetric(m);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (i != j && m(i, i) < m(i, j)) return {false, i, j};
    return {true, -1, -1};
}

/// |M_yy| > sum_{z != y} |M_yz|, with M_yy > 0 and M_yz <= 0 off-diagonal.
inline DominanceVerdict is_strictly_diag_dominant_M(const Matrix& m) {
    detail::require_symmetric(m);
    for (int i = 0; i < m.rows(); ++i) {
        if (!(m(i, i) > 0.0)) return {false, i, i};
        double off = 0.0;
        for (int j = 0; j < m.cols(); ++j) {
            if (i == j) continue;
            if (m(i, j) > 0.0) return {false, i, j};
            off += std::abs(m(i, j));
        }
        if (!(std::abs(m(i, i)) > off)) return {false, i, i};
    }
    return {true, -1, -1};
}

/// Checks N_yy - N_yz >= N_wy - N_wz for N = M^-1 over all triples,
/// including degenerate ones (where the inequality holds with equality).
/// Requires the sign/dominance pattern above.
inline LemmaVerdict lemma_inverse_difference_check(const Matrix& m, double margin = 1e-9) {
    DominanceVerdict pre = is_strictly_diag_dominant_M(m);
    if (!pre.ok)
        throw PreconditionError("lemma check requires a strictly diagonally dominant matrix "
                                "with positive diagonal and nonpositive off-diagonal");
    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible()) throw Error("matrix is numerically singular");
    Matrix n = lu.inverse();
    const int d = static_cast<int>(m.rows());
    LemmaVerdict out;
    out.min_margin = std::numeric_limits<double>::infinity();
    out.min_diag_gap = std::numeric_limits<double>::infinity();
    for (int y = 0; y < d; ++y) {
        for (int z = 0; z < d; ++z) {
            if (y == z) continue;
            double lhs = n(y, y) - n(y, z);
            out.min_diag_gap = std::min(out.min_diag_gap, lhs);
            for (int w = 0; w < d; ++w) {
                double rhs = n(w, y) - n(w, z);
                double gap = lhs - rhs;
                if (gap < out.min_margin) {
                    out.min_margin = gap;
                    out.y = y;
                    out.z = z;
                    out.w = w;
                }
            }
        }
    }
    out.ok = out.min_margin >= -margin;
    return out;
}

/// Random matrix satisfying the lemma's hypotheses by construction:
/// off-diagonals uniform in [-1, 0], diagonal = row absolute sum + U(0.1, 1).
inline Matrix random_dominant_matrix(int dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> off(-1.0, 0.0);
    std::uniform_real_distribution<double> slack(0.1, 1.0);
    Matrix m = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) m(i, j) = m(j, i) = off(rng);
    for (int i = 0; i < dim; ++i) m(i, i) = m.row(i).cwiseAbs().sum() + slack(rng);
    return m;
}

}  // namespace prefmono
