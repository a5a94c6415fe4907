#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dl/core.hpp"

namespace dl {

/// Order-property staircase: rows[k] is >= r on cols[l] for k > l and
/// <= s on cols[l] for k < l. Diagonal cells are unconstrained.
struct LadderWitness {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    ThresholdPair thresholds{0.0, 1.0};

    std::size_t length() const noexcept { return rows.size(); }
};

enum class AlternationVariant { ii, iii };

std::string_view to_string(AlternationVariant v);
AlternationVariant alternation_variant_from_string(std::string_view s);

/// Pair sequence (row_t, col_t). Variant ii: for t < u,
/// |T[row_t][col_u] - T[row_u][col_t]| >= eps. Variant iii: for t < u < v,
/// |T[row_u][col_t] - T[row_u][col_v]| >= eps.
struct AlternationWitness {
    AlternationVariant variant = AlternationVariant::ii;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    Epsilon eps{1.0};

    std::size_t length() const noexcept { return pairs.size(); }
};

/// (s,r)-shattering certificate. Selector key bit (i-1) set means position i
/// of `cols` is in the pattern I, i.e. the selected row must be <= s there,
/// and >= r at positions outside I.
struct ShatterWitness {
    std::vector<std::size_t> cols;
    ThresholdPair thresholds{0.0, 1.0};
    std::map<std::uint32_t, std::size_t> selector;

    std::size_t dimension() const noexcept { return cols.size(); }
};

/// Literal strict-order chain: columns pointwise nondecreasing along the
/// sequence, and T[rows[u]][cols[t]] + eps < T[rows[t]][cols[u]] for t < u.
struct ChainWitness {
    std::vector<std::size_t> cols;
    std::vector<std::size_t> rows;
    Epsilon eps{1.0};

    std::size_t length() const noexcept { return cols.size(); }
};

/// Relaxed per-step chain from the polynomial detector: consecutive columns
/// are pointwise ordered and step_rows[t] gains at least eps from cols[t] to
/// cols[t+1].
struct StepChainWitness {
    std::vector<std::size_t> cols;
    std::vector<std::size_t> step_rows;
    Epsilon eps{1.0};

    std::size_t length() const noexcept { return cols.size(); }
};

using AnyWitness = std::variant<LadderWitness, AlternationWitness, ShatterWitness, ChainWitness, StepChainWitness>;

/// Outcome of re-checking a witness. On failure `constraint` names the first
/// violated condition and `cell` the offending (row, col) when there is one.
struct Validation {
    bool ok = true;
    std::string constraint;
    std::optional<std::pair<std::size_t, std::size_t>> cell;

    explicit operator bool() const noexcept { return ok; }
};

Validation validate(const EvalTable& t, const LadderWitness& w);
Validation validate(const EvalTable& t, const AlternationWitness& w);
Validation validate(const EvalTable& t, const ShatterWitness& w);
Validation validate(const EvalTable& t, const ChainWitness& w);
Validation validate(const EvalTable& t, const StepChainWitness& w);

/// Re-checks any witness directly from table entries. Throws IndexOutOfRange
/// when an index lies outside the table.
Validation validate_witness(const EvalTable& t, const AnyWitness& w);

nlohmann::json to_json(const LadderWitness& w);
nlohmann::json to_json(const AlternationWitness& w);
nlohmann::json to_json(const ShatterWitness& w);
nlohmann::json to_json(const ChainWitness& w);
nlohmann::json to_json(const StepChainWitness& w);
nlohmann::json to_json(const AnyWitness& w);
nlohmann::json to_json(const Validation& v);

/// Parses any witness by its "kind" field; throws ParseError.
AnyWitness witness_from_json(const nlohmann::json& j);

}  // namespace dl
