#include "dl/generators.hpp"

#include <algorithm>

#include "dl/rng.hpp"

namespace dl {

EvalTable half_graph(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidSize, "half_graph needs n >= 1");
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) e[i * n + j] = 1.0;
    return EvalTable(n, n, 1.0, std::move(e));
}

EvalTable full_pattern(std::size_t k) {
    if (k == 0 || k > 20) throw Error(ErrorKind::InvalidSize, "full_pattern needs 1 <= k <= 20");
    const std::size_t rows = std::size_t{1} << k;
    std::vector<double> e(rows * k);
    for (std::size_t b = 0; b < rows; ++b)
        for (std::size_t i = 0; i < k; ++i) e[b * k + i] = static_cast<double>((b >> i) & 1U);
    return EvalTable(rows, k, 1.0, std::move(e));
}

EvalTable random_table(std::size_t n_rows, std::size_t n_cols, const ValueModel& model, std::uint64_t seed) {
    if (n_rows == 0 || n_cols == 0) throw Error(ErrorKind::InvalidSize, "random_table needs positive sizes");
    Rng rng(seed);
    std::vector<double> e(n_rows * n_cols);
    if (model.kind == ValueModel::Kind::Bernoulli) {
        if (!(model.p >= 0.0 && model.p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "bernoulli p must lie in [0, 1]");
        for (auto& v : e) v = rng.bernoulli(model.p) ? 1.0 : 0.0;
        return EvalTable(n_rows, n_cols, 1.0, std::move(e));
    }
    if (!(model.bound > 0.0)) throw Error(ErrorKind::InvalidArgument, "uniform bound must be positive");
    for (auto& v : e) v = -model.bound + 2.0 * model.bound * rng.uniform01();
    return EvalTable(n_rows, n_cols, model.bound, std::move(e));
}

namespace {

using Wide = unsigned __int128;

Wide pow3(std::size_t e) {
    Wide out = 1;
    for (std::size_t i = 0; i < e; ++i) out *= 3;
    return out;
}

}  // namespace

bool cantor_indicator(std::uint64_t numerator, std::size_t levels, std::size_t n) {
    // Beyond n = L + 1 both comparisons are settled on level-L points.
    n = std::min(n, levels + 1);
    const Wide x = numerator;
    // x <= 3^-n  <=>  N * 3^n <= 3^L
    if (x * pow3(n) <= pow3(levels)) return true;
    // x >= 2/3 + 3^-(n+1)  <=>  N * 3^(n+1) >= 2 * 3^(L+n) + 3^L
    return x * pow3(n + 1) >= 2 * pow3(levels + n) + pow3(levels);
}

bool cantor_target(std::uint64_t numerator, std::size_t levels) {
    // x = 0 or x > 2/3  <=>  N == 0 or N > 2 * 3^(L-1)
    return numerator == 0 || Wide{numerator} > 2 * pow3(levels - 1);
}

CantorExample cantor_example(std::size_t m, std::size_t levels) {
    if (levels < 3 || levels > 30 || m < 1 || m + 2 > levels)
        throw Error(ErrorKind::InvalidSize, "cantor_example needs 1 <= m <= L - 2 and L <= 30");
    const std::size_t rows = std::size_t{1} << levels;
    CantorExample ex{EvalTable(1, 1, 1.0, {0.0}), {}, {}, levels};
    ex.numerators.resize(rows);
    for (std::size_t b = 0; b < rows; ++b) {
        // Most significant ternary digit first, so numerators increase with b.
        std::uint64_t num = 0;
        for (std::size_t i = 1; i <= levels; ++i) {
            const std::uint64_t digit = ((b >> (levels - i)) & 1U) ? 2 : 0;
            num = num * 3 + digit;
        }
        ex.numerators[b] = num;
    }
    std::vector<double> e(rows * m);
    ex.target.resize(rows);
    for (std::size_t b = 0; b < rows; ++b) {
        for (std::size_t n = 1; n <= m; ++n) e[b * m + (n - 1)] = cantor_indicator(ex.numerators[b], levels, n) ? 1.0 : 0.0;
        ex.target[b] = cantor_target(ex.numerators[b], levels) ? 1.0 : 0.0;
    }
    std::vector<std::string> col_labels;
    for (std::size_t n = 1; n <= m; ++n) col_labels.push_back("f" + std::to_string(n));
    ex.table = EvalTable(rows, m, 1.0, std::move(e), std::nullopt, std::move(col_labels));
    return ex;
}

std::string to_string(GeneratorConfig::Kind kind) {
    switch (kind) {
        case GeneratorConfig::Kind::HalfGraph: return "half_graph";
        case GeneratorConfig::Kind::FullPattern: return "full_pattern";
        case GeneratorConfig::Kind::RandomTable: return "random_table";
        case GeneratorConfig::Kind::CantorExample: return "cantor_example";
    }
    return "unknown";
}

GeneratorConfig::Kind generator_kind_from_string(const std::string& s) {
    if (s == "half_graph") return GeneratorConfig::Kind::HalfGraph;
    if (s == "full_pattern") return GeneratorConfig::Kind::FullPattern;
    if (s == "random_table") return GeneratorConfig::Kind::RandomTable;
    if (s == "cantor_example") return GeneratorConfig::Kind::CantorExample;
    throw Error(ErrorKind::InvalidArgument, "unknown generator kind \"" + s + "\"");
}

EvalTable generate(const GeneratorConfig& c) {
    switch (c.kind) {
        case GeneratorConfig::Kind::HalfGraph: return half_graph(c.n);
        case GeneratorConfig::Kind::FullPattern: return full_pattern(c.k);
        case GeneratorConfig::Kind::RandomTable: return random_table(c.rows, c.cols, c.model, c.seed);
        case GeneratorConfig::Kind::CantorExample: return cantor_example(c.m, c.levels).table;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown generator kind");
}

nlohmann::json to_json(const GeneratorConfig& c) {
    nlohmann::json j{{"kind", to_string(c.kind)}};
    switch (c.kind) {
        case GeneratorConfig::Kind::HalfGraph: j["n"] = c.n; break;
        case GeneratorConfig::Kind::FullPattern: j["k"] = c.k; break;
        case GeneratorConfig::Kind::RandomTable:
            j["rows"] = c.rows;
            j["cols"] = c.cols;
            if (c.model.kind == ValueModel::Kind::Bernoulli) {
                j["model"] = {{"kind", "bernoulli"}, {"p", c.model.p}};
            } else {
                j["model"] = {{"kind", "uniform"}, {"bound", c.model.bound}};
            }
            j["seed"] = c.seed;
            break;
        case GeneratorConfig::Kind::CantorExample:
            j["m"] = c.m;
            j["L"] = c.levels;
            break;
    }
    return j;
}

}  // namespace dl
