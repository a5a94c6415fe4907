#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dl/core.hpp"
#include "dl/op.hpp"
#include "dl/witness.hpp"

namespace dl {

/// psi[c1][c2] = max over rows of max(0, T[p][c1] - T[p][c2]); zero exactly
/// when column c1 is pointwise <= column c2.
class PreorderMatrix {
public:
    explicit PreorderMatrix(std::size_t n) : n_(n), psi_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t a, std::size_t b) const noexcept { return psi_[a * n_ + b]; }
    double& operator()(std::size_t a, std::size_t b) noexcept { return psi_[a * n_ + b]; }
    bool dominated(std::size_t a, std::size_t b) const noexcept { return (*this)(a, b) <= 0.0; }

private:
    std::size_t n_;
    std::vector<double> psi_;
};

PreorderMatrix preorder_psi(const EvalTable& t);

struct StrictChainResult {
    std::size_t m = 1;
    StepChainWitness witness;
};

/// Longest path in the strict-edge graph: c -> c' when c <= c' pointwise and
/// some row gains at least eps. The graph is acyclic, so this is exact.
StrictChainResult strict_chain(const EvalTable& t, const Epsilon& eps);

/// Edge relation of the strict-edge graph, exposed for diagnostics.
std::vector<std::vector<std::size_t>> strict_edges(const EvalTable& t, const Epsilon& eps);

/// Backtracking search for a literal chain witness of length target_m.
/// Returns nullopt when exhaustive search finds none; throws
/// SearchBudgetExceeded when the node budget runs out first.
std::optional<ChainWitness> sop_witness(const EvalTable& t, const Epsilon& eps, std::size_t target_m,
                                        SearchLimits limits = {});

/// Variant-ii alternation from a chain witness: pairs (rows[t], cols[t]).
/// Throws InvalidWitness when `w` does not validate against `t`.
AlternationWitness sop_to_alternation(const EvalTable& t, const ChainWitness& w);

nlohmann::json to_json(const PreorderMatrix& p);
nlohmann::json to_json(const StrictChainResult& r);

}  // namespace dl
