#include "dl/ip.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dl/bitset.hpp"

namespace dl {

namespace {

struct BudgetExhausted {};

struct ColumnSets {
    std::vector<Bitset> low;   // rows <= s
    std::vector<Bitset> high;  // rows >= r

    ColumnSets(const EvalTable& t, const ThresholdPair& th) {
        low.assign(t.cols(), Bitset(t.rows()));
        high.assign(t.cols(), Bitset(t.rows()));
        for (std::size_t i = 0; i < t.rows(); ++i) {
            for (std::size_t j = 0; j < t.cols(); ++j) {
                if (t(i, j) <= th.s()) low[j].set(i);
                if (t(i, j) >= th.r()) high[j].set(i);
            }
        }
    }
};

// Row sets realizing each pattern of a column set, indexed by pattern mask.
using PatternRows = std::vector<Bitset>;

PatternRows extend_patterns(const PatternRows& current, const ColumnSets& sets, std::size_t col, std::size_t position) {
    PatternRows next(current.size() * 2);
    const std::uint32_t bit = std::uint32_t{1} << position;
    for (std::uint32_t mask = 0; mask < current.size(); ++mask) {
        next[mask] = current[mask] & sets.high[col];
        next[mask | bit] = current[mask] & sets.low[col];
    }
    return next;
}

bool all_realized(const PatternRows& p) {
    return std::all_of(p.begin(), p.end(), [](const Bitset& b) { return b.any(); });
}

ShatterWitness make_witness(std::vector<std::size_t> cols, const ThresholdPair& th, const PatternRows& patterns) {
    ShatterWitness w{std::move(cols), th, {}};
    for (std::uint32_t mask = 0; mask < patterns.size(); ++mask) w.selector[mask] = patterns[mask].find_first();
    return w;
}

std::size_t floor_log2(std::size_t n) {
    std::size_t k = 0;
    while ((std::size_t{2} << k) <= n) ++k;
    return k;
}

class DimensionSearch {
public:
    DimensionSearch(const EvalTable& t, const ThresholdPair& th, SearchLimits limits)
        : t_(t), th_(th), limits_(limits), sets_(t, th), cap_(std::min({floor_log2(t.rows()), t.cols(), kMaxShatterColumns})) {}

    ShatterResult run() {
        greedy();
        PatternRows root{Bitset::full(t_.rows())};
        try {
            dfs(root, 0);
        } catch (const BudgetExhausted&) {
            result_.exact = false;
        }
        result_.nodes = nodes_;
        return result_;
    }

private:
    // Greedy lower bound: add the first column that keeps the set shattered.
    void greedy() {
        PatternRows patterns{Bitset::full(t_.rows())};
        std::vector<std::size_t> chosen;
        for (std::size_t c = 0; c < t_.cols() && chosen.size() < cap_; ++c) {
            PatternRows next = extend_patterns(patterns, sets_, c, chosen.size());
            if (all_realized(next)) {
                patterns = std::move(next);
                chosen.push_back(c);
            }
        }
        greedy_dim_ = chosen.size();
    }

    void record(const PatternRows& patterns) {
        if (chosen_.size() > result_.dim) {
            result_.dim = chosen_.size();
            result_.witness = make_witness(chosen_, th_, patterns);
        }
    }

    // Only shattered sets are extended: a superset of an unshattered set is
    // never shattered.
    void dfs(const PatternRows& patterns, std::size_t next_col) {
        if (++nodes_ > limits_.node_budget) throw BudgetExhausted{};
        record(patterns);
        if (chosen_.size() == cap_) return;
        for (std::size_t c = next_col; c < t_.cols(); ++c) {
            const std::size_t reachable = std::min(cap_, chosen_.size() + (t_.cols() - c));
            if (reachable <= result_.dim || reachable < greedy_dim_) return;
            PatternRows next = extend_patterns(patterns, sets_, c, chosen_.size());
            if (!all_realized(next)) continue;
            chosen_.push_back(c);
            dfs(next, c + 1);
            chosen_.pop_back();
        }
    }

    const EvalTable& t_;
    ThresholdPair th_;
    SearchLimits limits_;
    ColumnSets sets_;
    std::size_t cap_;
    std::size_t greedy_dim_ = 0;
    std::vector<std::size_t> chosen_;
    std::uint64_t nodes_ = 0;
    ShatterResult result_;
};

}  // namespace

std::optional<ShatterWitness> is_shattered(const EvalTable& t, std::span<const std::size_t> cols,
                                           const ThresholdPair& th) {
    if (cols.empty()) throw Error(ErrorKind::InvalidArgument, "column set is empty");
    if (cols.size() > kMaxShatterColumns)
        throw Error(ErrorKind::TooManyColumns, std::to_string(cols.size()) + " columns exceed the limit of 24");
    check_indices(cols, t.cols(), "column");
    if (std::set<std::size_t>(cols.begin(), cols.end()).size() != cols.size())
        throw Error(ErrorKind::InvalidArgument, "columns must be distinct");
    const ColumnSets sets(t, th);
    PatternRows patterns{Bitset::full(t.rows())};
    for (std::size_t pos = 0; pos < cols.size(); ++pos) {
        patterns = extend_patterns(patterns, sets, cols[pos], pos);
        if (!all_realized(patterns)) return std::nullopt;
    }
    return make_witness(std::vector<std::size_t>(cols.begin(), cols.end()), th, patterns);
}

ShatterResult shattering_dimension(const EvalTable& t, const ThresholdPair& th, SearchLimits limits) {
    return DimensionSearch(t, th, limits).run();
}

LadderWitness ip_to_ladder(const EvalTable& t, const ShatterWitness& w) {
    if (auto v = validate(t, w); !v) throw Error(ErrorKind::InvalidWitness, "shatter witness fails: " + v.constraint);
    const std::size_t k = w.cols.size();
    LadderWitness out{{}, w.cols, w.thresholds};
    for (std::size_t u = 0; u < k; ++u) {
        // Pattern {u, ..., k-1} (0-based): low from position u onward.
        const std::uint32_t mask = ((std::uint32_t{1} << k) - 1) & ~((std::uint32_t{1} << u) - 1);
        out.rows.push_back(w.selector.at(mask));
    }
    return out;
}

nlohmann::json to_json(const ShatterResult& r) {
    nlohmann::json j{{"dim", r.dim}, {"exact", r.exact}, {"nodes", r.nodes}};
    j["witness"] = r.witness ? to_json(*r.witness) : nlohmann::json();
    return j;
}

}  // namespace dl
