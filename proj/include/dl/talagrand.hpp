#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dl/core.hpp"

namespace dl {

/// How tuple counts are obtained. Auto counts exactly within the budget and
/// falls back to Monte Carlo beyond it.
struct Sampling {
    enum class Mode { Exact, MonteCarlo, Auto };

    Mode mode = Mode::Exact;
    std::uint64_t seed = 0;
    std::uint64_t samples = 100'000;
    double exact_budget = 1e8;

    static Sampling exact(double budget = 1e8) { return {Mode::Exact, 0, 0, budget}; }
    static Sampling monte_carlo(std::uint64_t seed, std::uint64_t samples) { return {Mode::MonteCarlo, seed, samples, 1e8}; }
};

/// D_k count under the uniform measure on all rows of the table.
struct DkReport {
    std::size_t k = 1;
    double s = 0.0;
    double r = 1.0;
    std::vector<std::size_t> subset;
    double count = 0.0;
    std::optional<double> std_error;
    /// Number of candidate tuples: |E|^2k, or |E|(|E|-1)...(|E|-2k+1) when
    /// coordinates must be distinct.
    double denominator = 0.0;
    double density = 0.0;
    /// (|E| / n_rows)^2k, the measure of the full tuple space.
    double threshold_value = 0.0;
    /// density * threshold_value, the measure of D_k.
    double measure = 0.0;
    bool condition_holds = false;
    bool distinct_coords = true;
    bool exact = true;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
};

/// Counts tuples w in E^2k (distinct coordinates when requested) for which
/// some column is <= s at every even coordinate and >= r at every odd one.
DkReport dk_count(const EvalTable& t, std::span<const std::size_t> subset, std::size_t k, const ThresholdPair& th,
                  bool distinct_coords, const Sampling& sampling = {});

struct AlmostNipScan {
    std::optional<std::size_t> k_min;
    std::vector<DkReport> reports;
};

/// Reports for k = 1..k_max; k_min is the first k with count < denominator.
AlmostNipScan almost_nip_scan(const EvalTable& t, std::span<const std::size_t> subset, const ThresholdPair& th,
                              std::size_t k_max, bool distinct_coords, const Sampling& sampling = {});

struct TupleFraction {
    double fraction = 0.0;
    std::optional<double> std_error;
    double count = 0.0;
    double denominator = 0.0;
    bool exact = true;
};

/// Fraction of distinct-coordinate n-tuples from E on which the columns
/// realize every one of the 2^n low/high patterns. strict uses < s and > r.
TupleFraction shattered_tuple_fraction(const EvalTable& t, std::span<const std::size_t> subset, std::size_t n,
                                       const ThresholdPair& th, bool strict, const Sampling& sampling = {});

/// All row indices of t, the default E.
std::vector<std::size_t> all_rows(const EvalTable& t);

nlohmann::json to_json(const DkReport& r);
nlohmann::json to_json(const AlmostNipScan& s);

}  // namespace dl
