#include "dl/definability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dl {

std::vector<double> cesaro_column(const EvalTable& t, std::span<const std::size_t> cols) {
    if (cols.empty()) throw Error(ErrorKind::EmptySelection, "no columns selected");
    check_indices(cols, t.cols(), "column");
    std::vector<double> out(t.rows(), 0.0);
    for (std::size_t p = 0; p < t.rows(); ++p) {
        for (std::size_t c : cols) out[p] += t(p, c);
        out[p] /= static_cast<double>(cols.size());
    }
    return out;
}

double sup_distance(const EvalTable& t, std::span<const std::size_t> cols, std::span<const double> weights,
                    std::span<const double> target) {
    double worst = 0.0;
    for (std::size_t p = 0; p < t.rows(); ++p) {
        double v = 0.0;
        for (std::size_t j = 0; j < cols.size(); ++j) v += weights[j] * t(p, cols[j]);
        worst = std::max(worst, std::abs(v - target[p]));
    }
    return worst;
}

namespace {

// Dense tableau for: maximize sum(u) subject to G u <= 1, u >= 0, where G
// is strictly positive. The slack basis is feasible at the origin.
class GameSimplex {
public:
    explicit GameSimplex(const std::vector<std::vector<double>>& g)
        : rows_(g.size()), vars_(g.front().size()), width_(vars_ + rows_ + 1), tab_((rows_ + 1) * width_, 0.0),
          basis_(rows_) {
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < vars_; ++j) at(i, j) = g[i][j];
            at(i, vars_ + i) = 1.0;
            at(i, width_ - 1) = 1.0;
            basis_[i] = vars_ + i;
        }
        for (std::size_t j = 0; j < vars_; ++j) at(rows_, j) = -1.0;
    }

    bool solve(std::size_t max_iterations) {
        constexpr double kPivotTol = 1e-12;
        for (std::size_t iter = 0; iter < max_iterations; ++iter) {
            // Dantzig pricing; switch to Bland's rule late to rule out cycling.
            const bool bland = iter > max_iterations / 2;
            std::size_t enter = width_;
            double best = -kPivotTol;
            for (std::size_t j = 0; j + 1 < width_; ++j) {
                const double rc = at(rows_, j);
                if (rc < best) {
                    enter = j;
                    best = rc;
                    if (bland) break;
                }
            }
            if (enter == width_) return true;
            std::size_t leave = rows_;
            double ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rows_; ++i) {
                const double a = at(i, enter);
                if (a <= kPivotTol) continue;
                const double q = at(i, width_ - 1) / a;
                if (q < ratio || (q == ratio && leave < rows_ && basis_[i] < basis_[leave])) {
                    ratio = q;
                    leave = i;
                }
            }
            if (leave == rows_) return false;  // unbounded: impossible for G > 0
            pivot(leave, enter);
        }
        return false;
    }

    std::vector<double> primal() const {
        std::vector<double> u(vars_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i)
            if (basis_[i] < vars_) u[basis_[i]] = at(i, width_ - 1);
        return u;
    }

    std::vector<double> dual() const {
        std::vector<double> y(rows_);
        for (std::size_t i = 0; i < rows_; ++i) y[i] = at(rows_, vars_ + i);
        return y;
    }

private:
    double& at(std::size_t i, std::size_t j) { return tab_[i * width_ + j]; }
    double at(std::size_t i, std::size_t j) const { return tab_[i * width_ + j]; }

    void pivot(std::size_t row, std::size_t col) {
        const double p = at(row, col);
        for (std::size_t j = 0; j < width_; ++j) at(row, j) /= p;
        for (std::size_t i = 0; i <= rows_; ++i) {
            if (i == row) continue;
            const double f = at(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(row, j);
        }
        basis_[row] = col;
    }

    std::size_t rows_;
    std::size_t vars_;
    std::size_t width_;
    std::vector<double> tab_;
    std::vector<std::size_t> basis_;
};

}  // namespace

ConvexApproximation mazur_approximate(const EvalTable& t, std::span<const std::size_t> candidate_cols,
                                      std::span<const double> target, double tol) {
    if (candidate_cols.empty()) throw Error(ErrorKind::EmptySelection, "no candidate columns");
    check_indices(candidate_cols, t.cols(), "candidate column");
    if (target.size() != t.rows()) throw Error(ErrorKind::ShapeMismatch, "target length must equal n_rows");
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
    for (double v : target)
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "target has a non-finite value");

    ConvexApproximation out;
    out.candidate_cols.assign(candidate_cols.begin(), candidate_cols.end());
    const std::size_t m = candidate_cols.size();
    const std::size_t n = t.rows();

    for (std::size_t j = 0; j < m; ++j) {
        bool equal = true;
        for (std::size_t p = 0; p < n && equal; ++p) equal = t(p, candidate_cols[j]) == target[p];
        if (equal) {
            out.weights.assign(m, 0.0);
            out.weights[j] = 1.0;
            return out;
        }
    }

    // Game rows (p, +) and (p, -): payoff +-(T[p][c_j] - target[p]).
    std::vector<std::vector<double>> game(2 * n, std::vector<double>(m));
    double largest = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t j = 0; j < m; ++j) {
            const double d = t(p, candidate_cols[j]) - target[p];
            game[2 * p][j] = d;
            game[2 * p + 1][j] = -d;
            largest = std::max(largest, std::abs(d));
        }
    }
    const double shift = 1.0 + largest;
    std::vector<std::vector<double>> positive = game;
    for (auto& row : positive)
        for (auto& v : row) v += shift;

    GameSimplex lp(positive);
    if (!lp.solve(50 * (2 * n + m) + 100))
        throw Error(ErrorKind::SolverFailure, "simplex iteration budget exhausted");

    std::vector<double> w = lp.primal();
    double total = 0.0;
    for (auto& v : w) {
        v = std::max(v, 0.0);
        total += v;
    }
    if (!(total > 0.0)) throw Error(ErrorKind::SolverFailure, "degenerate primal solution");
    for (auto& v : w) v /= total;
    out.weights = std::move(w);
    out.achieved = sup_distance(t, candidate_cols, out.weights, target);

    std::vector<double> y = lp.dual();
    double ysum = 0.0;
    for (auto& v : y) {
        v = std::max(v, 0.0);
        ysum += v;
    }
    if (ysum > 0.0) {
        // Any mixed row strategy bounds the game value from below.
        double bound = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
            double payoff = 0.0;
            for (std::size_t i = 0; i < 2 * n; ++i) payoff += (y[i] / ysum) * game[i][j];
            bound = std::min(bound, payoff);
        }
        out.lower_bound = std::max(0.0, bound);
    }
    out.certified_gap = std::max(0.0, out.achieved - out.lower_bound);
    if (out.certified_gap > tol) {
        throw Error(ErrorKind::SolverFailure,
                    "could not certify optimality within tol (gap " + std::to_string(out.certified_gap) + ")");
    }
    return out;
}

nlohmann::json to_json(const ConvexApproximation& a) {
    return {{"candidate_cols", a.candidate_cols},
            {"weights", a.weights},
            {"achieved", a.achieved},
            {"lower_bound", a.lower_bound},
            {"certified_gap", a.certified_gap}};
}

}  // namespace dl
