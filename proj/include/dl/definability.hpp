#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dl/core.hpp"

namespace dl {

/// Per-row arithmetic mean of the selected columns.
std::vector<double> cesaro_column(const EvalTable& t, std::span<const std::size_t> cols);

struct ConvexApproximation {
    std::vector<std::size_t> candidate_cols;
    std::vector<double> weights;
    /// max over rows of |sum_j w_j T[p][c_j] - target[p]|, recomputed from
    /// the final weights.
    double achieved = 0.0;
    /// Dual lower bound on the optimum; achieved - lower_bound <= tol.
    double lower_bound = 0.0;
    double certified_gap = 0.0;
};

/// Sup-norm distance of a convex combination of columns to `target`.
double sup_distance(const EvalTable& t, std::span<const std::size_t> cols, std::span<const double> weights,
                    std::span<const double> target);

/// Best convex combination of the candidate columns in the sup norm. Solved
/// as a zero-sum matrix game by the simplex method; the row player's dual
/// strategy gives the lower bound that certifies the gap.
ConvexApproximation mazur_approximate(const EvalTable& t, std::span<const std::size_t> candidate_cols,
                                      std::span<const double> target, double tol);

nlohmann::json to_json(const ConvexApproximation& a);

}  // namespace dl
