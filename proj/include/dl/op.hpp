#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dl/core.hpp"
#include "dl/witness.hpp"

namespace dl {

/// Caps the number of search nodes an exact search may expand. When the cap
/// is hit the best witness found so far is returned with exact = false.
struct SearchLimits {
    std::uint64_t node_budget = 1'000'000;
};

struct LadderResult {
    std::size_t length = 1;
    LadderWitness witness;
    bool exact = true;
    std::uint64_t nodes = 0;
};

struct AlternationResult {
    std::size_t rank = 1;
    AlternationWitness witness;
    bool exact = true;
    std::uint64_t nodes = 0;
};

/// Longest ladder with pairwise distinct rows and pairwise distinct columns.
/// Depth-first extension over bitset feasibility masks with an upper-bound
/// cut. `stop_at` ends the search as soon as that length is reached.
LadderResult max_ladder(const EvalTable& t, const ThresholdPair& th, SearchLimits limits = {},
                        std::optional<std::size_t> stop_at = std::nullopt);

/// Longest alternation sequence of the given variant (distinct rows,
/// distinct columns). Variant ii is symmetric in the pair order and is
/// solved as a maximum clique; variant iii extends sequences left to right.
AlternationResult alternation_rank(const EvalTable& t, const Epsilon& eps, AlternationVariant variant,
                                   SearchLimits limits = {});

struct SpectrumEntry {
    std::size_t length = 2;
    std::optional<double> best_gap;
    std::optional<double> s;
    std::optional<double> r;
};

struct SpectrumResult {
    std::vector<SpectrumEntry> entries;
    bool exact = true;
};

/// For each ladder length 2..max_len, the widest entry-valued gap r - s that
/// still admits a ladder of that length.
SpectrumResult stability_spectrum(const EvalTable& t, std::size_t max_len, SearchLimits limits = {});

struct IteratedMeans {
    double below_mean = 0.0;
    double above_mean = 0.0;
    double defect = 0.0;
};

/// Tail means of T[rows[k]][cols[l]] below (k > l) and above (k < l) the
/// diagonal, over the last ceil(tail_fraction * L) positions (at least 2).
IteratedMeans iterated_means(const EvalTable& t, std::span<const std::size_t> row_seq,
                             std::span<const std::size_t> col_seq, double tail_fraction);

nlohmann::json to_json(const LadderResult& r);
nlohmann::json to_json(const AlternationResult& r);
nlohmann::json to_json(const SpectrumResult& r);

}  // namespace dl
