#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dl/core.hpp"

namespace dl {

/// n x n, T[i][j] = 1 if i < j else 0.
EvalTable half_graph(std::size_t n);

/// 2^k x k, row b column i = bit i of b. 1 <= k <= 20.
EvalTable full_pattern(std::size_t k);

struct ValueModel {
    enum class Kind { Bernoulli, Uniform };

    Kind kind = Kind::Bernoulli;
    double p = 0.5;      // Bernoulli: probability of a 1
    double bound = 1.0;  // Uniform: entries drawn from [-bound, bound)

    static ValueModel bernoulli(double p) { return {Kind::Bernoulli, p, 1.0}; }
    static ValueModel uniform(double bound) { return {Kind::Uniform, 0.5, bound}; }
};

EvalTable random_table(std::size_t n_rows, std::size_t n_cols, const ValueModel& model, std::uint64_t seed);

struct CantorExample {
    EvalTable table;
    /// Indicator of H = {0} u (C n (2/3, 1]) on the rows.
    std::vector<double> target;
    /// Row numerators: point x = numerator / 3^L.
    std::vector<std::uint64_t> numerators;
    std::size_t levels = 0;
};

/// Level-L Cantor points as rows; column n (1..m) is the indicator of
/// H_n = [0, 3^-n] u [2/3 + 3^-(n+1), 1]. Requires 1 <= m <= L - 2, L <= 30.
CantorExample cantor_example(std::size_t m, std::size_t levels);

/// f_n at a level-L Cantor point, exact for every n >= 1.
bool cantor_indicator(std::uint64_t numerator, std::size_t levels, std::size_t n);
/// chi_H at a level-L Cantor point.
bool cantor_target(std::uint64_t numerator, std::size_t levels);

struct GeneratorConfig {
    enum class Kind { HalfGraph, FullPattern, RandomTable, CantorExample };

    Kind kind = Kind::HalfGraph;
    std::size_t n = 4;       // half_graph size
    std::size_t k = 3;       // full_pattern width
    std::size_t rows = 5;    // random_table
    std::size_t cols = 5;    // random_table
    ValueModel model{};      // random_table
    std::size_t m = 3;       // cantor columns
    std::size_t levels = 5;  // cantor depth L
    std::uint64_t seed = 0;
};

std::string to_string(GeneratorConfig::Kind kind);
GeneratorConfig::Kind generator_kind_from_string(const std::string& s);

/// Builds the table for a config; random tables use config.seed.
EvalTable generate(const GeneratorConfig& config);

nlohmann::json to_json(const GeneratorConfig& c);

}  // namespace dl
