#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "dl/core.hpp"
#include "dl/op.hpp"
#include "dl/witness.hpp"

namespace dl {

/// Largest column set accepted by is_shattered (2^k selector entries).
inline constexpr std::size_t kMaxShatterColumns = 24;

/// Returns a selector for every pattern of `cols` at (s, r), or nullopt if
/// some pattern has no realizing row. Columns must be distinct.
std::optional<ShatterWitness> is_shattered(const EvalTable& t, std::span<const std::size_t> cols,
                                           const ThresholdPair& th);

struct ShatterResult {
    std::size_t dim = 0;
    std::optional<ShatterWitness> witness;
    bool exact = true;
    std::uint64_t nodes = 0;
};

/// Largest shattered column set. The dual dimension is
/// shattering_dimension(transpose(t), th).
ShatterResult shattering_dimension(const EvalTable& t, const ThresholdPair& th, SearchLimits limits = {});

/// Ladder of length k from a shattering certificate: column order kept, row u
/// is the selector row of the pattern {u, ..., k}. Throws InvalidWitness when
/// `w` does not validate against `t`.
LadderWitness ip_to_ladder(const EvalTable& t, const ShatterWitness& w);

nlohmann::json to_json(const ShatterResult& r);

}  // namespace dl
