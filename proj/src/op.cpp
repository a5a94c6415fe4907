#include "dl/op.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "dl/bitset.hpp"

namespace dl {

namespace {

struct BudgetExhausted {};

struct StateHash {
    std::size_t operator()(const std::pair<Bitset, Bitset>& s) const noexcept {
        return s.first.hash() * 31 + s.second.hash();
    }
};

class LadderSearch {
public:
    LadderSearch(const EvalTable& t, const ThresholdPair& th, SearchLimits limits, std::optional<std::size_t> stop_at)
        : t_(t), th_(th), limits_(limits), stop_at_(stop_at) {
        high_rows_.assign(t.cols(), Bitset(t.rows()));
        low_cols_.assign(t.rows(), Bitset(t.cols()));
        for (std::size_t i = 0; i < t.rows(); ++i) {
            for (std::size_t j = 0; j < t.cols(); ++j) {
                if (t(i, j) >= th.r()) high_rows_[j].set(i);
                if (t(i, j) <= th.s()) low_cols_[i].set(j);
            }
        }
    }

    LadderResult run() {
        result_.witness = LadderWitness{{0}, {0}, th_};
        result_.length = 1;
        if (!stop_at_ || *stop_at_ > 1) {
            try {
                extend(Bitset::full(t_.rows()), Bitset::full(t_.cols()));
            } catch (const BudgetExhausted&) {
                result_.exact = false;
            }
        }
        result_.nodes = nodes_;
        return result_;
    }

private:
    // rows: rows usable at the next position (unused, >= r on every chosen
    // column); cols: columns usable next (unused, every chosen row <= s).
    void extend(const Bitset& rows, const Bitset& cols) {
        if (++nodes_ > limits_.node_budget) throw BudgetExhausted{};
        const std::size_t depth = row_seq_.size();
        if (depth > result_.length) {
            result_.length = depth;
            result_.witness = LadderWitness{row_seq_, col_seq_, th_};
            if (stop_at_ && depth >= *stop_at_) throw BudgetExhausted{};
        }
        if (depth + std::min(rows.count(), cols.count()) <= result_.length) return;

        // Choices leading to the same (rows, cols) state have identical subtrees.
        std::unordered_set<std::pair<Bitset, Bitset>, StateHash> seen;
        rows.for_each([&](std::size_t i) {
            const Bitset cols_after = cols & low_cols_[i];
            Bitset rows_wo_i = rows;
            rows_wo_i.reset(i);
            cols.for_each([&](std::size_t j) {
                std::pair<Bitset, Bitset> state{rows_wo_i & high_rows_[j], cols_after};
                state.second.reset(j);
                if (!seen.insert(state).second) return;
                row_seq_.push_back(i);
                col_seq_.push_back(j);
                extend(state.first, state.second);
                row_seq_.pop_back();
                col_seq_.pop_back();
            });
        });
    }

    const EvalTable& t_;
    ThresholdPair th_;
    SearchLimits limits_;
    std::optional<std::size_t> stop_at_;
    std::vector<Bitset> high_rows_;
    std::vector<Bitset> low_cols_;
    std::vector<std::size_t> row_seq_;
    std::vector<std::size_t> col_seq_;
    std::uint64_t nodes_ = 0;
    LadderResult result_;
};

// Maximum clique over (row, col) vertices for variant ii, with a greedy
// colouring bound.
class AlternationCliqueSearch {
public:
    AlternationCliqueSearch(const EvalTable& t, const Epsilon& eps, SearchLimits limits)
        : t_(t), eps_(eps), limits_(limits), n_(t.rows() * t.cols()) {
        adj_.assign(n_, Bitset(n_));
        const std::size_t m = t.cols();
        for (std::size_t a = 0; a < n_; ++a) {
            for (std::size_t b = a + 1; b < n_; ++b) {
                const std::size_t ia = a / m, ja = a % m, ib = b / m, jb = b % m;
                if (ia == ib || ja == jb) continue;
                if (std::abs(t(ia, jb) - t(ib, ja)) >= eps.value()) {
                    adj_[a].set(b);
                    adj_[b].set(a);
                }
            }
        }
        non_adj_.assign(n_, Bitset(n_));
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b)
                if (!adj_[a].test(b)) non_adj_[a].set(b);
    }

    AlternationResult run() {
        best_ = {0};
        try {
            expand(Bitset::full(n_));
        } catch (const BudgetExhausted&) {
            result_.exact = false;
        }
        std::sort(best_.begin(), best_.end());
        result_.rank = best_.size();
        result_.witness = AlternationWitness{AlternationVariant::ii, {}, eps_};
        for (std::size_t v : best_) result_.witness.pairs.emplace_back(v / t_.cols(), v % t_.cols());
        result_.nodes = nodes_;
        return result_;
    }

private:
    void expand(Bitset candidates) {
        if (++nodes_ > limits_.node_budget) throw BudgetExhausted{};
        std::vector<std::size_t> order;
        std::vector<std::size_t> colour;
        colour_sort(candidates, order, colour);
        for (std::size_t k = order.size(); k-- > 0;) {
            if (clique_.size() + colour[k] <= best_.size()) return;
            const std::size_t v = order[k];
            clique_.push_back(v);
            Bitset next = candidates & adj_[v];
            if (next.none()) {
                if (clique_.size() > best_.size()) best_ = clique_;
            } else {
                expand(next);
            }
            clique_.pop_back();
            candidates.reset(v);
        }
    }

    void colour_sort(const Bitset& candidates, std::vector<std::size_t>& order, std::vector<std::size_t>& colour) const {
        Bitset uncoloured = candidates;
        std::size_t c = 0;
        while (uncoloured.any()) {
            ++c;
            Bitset q = uncoloured;
            for (std::size_t v = q.find_first(); v != Bitset::npos; v = q.find_next(v + 1)) {
                uncoloured.reset(v);
                order.push_back(v);
                colour.push_back(c);
                q &= non_adj_[v];
            }
        }
    }

    const EvalTable& t_;
    Epsilon eps_;
    SearchLimits limits_;
    std::size_t n_;
    std::vector<Bitset> adj_;
    std::vector<Bitset> non_adj_;
    std::vector<std::size_t> clique_;
    std::vector<std::size_t> best_;
    std::uint64_t nodes_ = 0;
    AlternationResult result_;
};

// Variant iii: a row only matters at a middle position u, where it must
// separate every column before u from every column after u. The search runs
// over column sequences; each middle position keeps its set of separating
// rows, and a prefix survives while distinct rows can still be assigned to
// all positions (bipartite matching).
class AlternationChainSearch {
public:
    AlternationChainSearch(const EvalTable& t, const Epsilon& eps, SearchLimits limits)
        : t_(t), eps_(eps), limits_(limits) {}

    AlternationResult run() {
        result_.witness = AlternationWitness{AlternationVariant::iii, {{0, 0}}, eps_};
        try {
            Bitset unused = Bitset::full(t_.cols());
            extend(unused);
        } catch (const BudgetExhausted&) {
            result_.exact = false;
        }
        result_.nodes = nodes_;
        return result_;
    }

private:
    bool separates(std::size_t row, std::size_t col_a, std::size_t col_b) const {
        return std::abs(t_(row, col_a) - t_(row, col_b)) >= eps_.value();
    }

    // Assigns distinct rows to all positions; first and last accept any row.
    std::optional<std::vector<std::size_t>> assign_rows() const {
        const std::size_t n = cols_.size();
        std::vector<std::size_t> row_owner(t_.rows(), n);
        std::vector<std::size_t> pos_row(n, t_.rows());
        auto allowed = [&](std::size_t pos, std::size_t row) {
            return pos == 0 || pos + 1 == n || middle_rows_[pos].test(row);
        };
        std::vector<char> visited;
        auto augment = [&](auto&& self, std::size_t pos) -> bool {
            for (std::size_t row = 0; row < t_.rows(); ++row) {
                if (!allowed(pos, row) || visited[row]) continue;
                visited[row] = 1;
                if (row_owner[row] == n || self(self, row_owner[row])) {
                    row_owner[row] = pos;
                    pos_row[pos] = row;
                    return true;
                }
            }
            return false;
        };
        // Middle positions first: they are the constrained ones.
        std::vector<std::size_t> order;
        for (std::size_t pos = 1; pos + 1 < n; ++pos) order.push_back(pos);
        order.push_back(0);
        if (n > 1) order.push_back(n - 1);
        for (std::size_t pos : order) {
            visited.assign(t_.rows(), 0);
            if (!augment(augment, pos)) return std::nullopt;
        }
        return pos_row;
    }

    void extend(Bitset& unused) {
        if (++nodes_ > limits_.node_budget) throw BudgetExhausted{};
        const std::size_t depth = cols_.size();
        if (depth > 0) {
            auto rows = assign_rows();
            if (!rows) return;
            if (depth > result_.rank) {
                result_.rank = depth;
                result_.witness.pairs.clear();
                for (std::size_t pos = 0; pos < depth; ++pos) result_.witness.pairs.emplace_back((*rows)[pos], cols_[pos]);
            }
        }
        if (depth + std::min(unused.count(), t_.rows() - std::min(depth, t_.rows())) <= result_.rank) return;

        for (std::size_t j = unused.find_first(); j != Bitset::npos; j = unused.find_next(j + 1)) {
            // Appending j shrinks every existing middle set and turns the
            // current last position into a middle.
            std::vector<Bitset> saved = middle_rows_;
            bool dead = false;
            for (std::size_t u = 1; u < depth && !dead; ++u) {
                Bitset& rows = middle_rows_[u];
                rows.for_each([&](std::size_t p) {
                    for (std::size_t a = 0; a < u; ++a) {
                        if (!separates(p, cols_[a], j)) {
                            rows.reset(p);
                            break;
                        }
                    }
                });
                dead = rows.none();
            }
            if (!dead) {
                cols_.push_back(j);
                middle_rows_.push_back(Bitset::full(t_.rows()));
                unused.reset(j);
                extend(unused);
                unused.set(j);
                cols_.pop_back();
            }
            middle_rows_ = std::move(saved);
        }
    }

    const EvalTable& t_;
    Epsilon eps_;
    SearchLimits limits_;
    std::vector<std::size_t> cols_;
    // middle_rows_[u]: rows separating cols before u from cols after u.
    std::vector<Bitset> middle_rows_;
    std::uint64_t nodes_ = 0;
    AlternationResult result_;
};

}  // namespace

LadderResult max_ladder(const EvalTable& t, const ThresholdPair& th, SearchLimits limits,
                        std::optional<std::size_t> stop_at) {
    LadderSearch search(t, th, limits, stop_at);
    LadderResult r = search.run();
    // Reaching stop_at unwinds through the budget path; that is still exact
    // for the question "is the length at least stop_at".
    if (stop_at && r.length >= *stop_at) r.exact = true;
    return r;
}

AlternationResult alternation_rank(const EvalTable& t, const Epsilon& eps, AlternationVariant variant,
                                   SearchLimits limits) {
    if (variant == AlternationVariant::ii) return AlternationCliqueSearch(t, eps, limits).run();
    return AlternationChainSearch(t, eps, limits).run();
}

SpectrumResult stability_spectrum(const EvalTable& t, std::size_t max_len, SearchLimits limits) {
    if (max_len < 2) throw Error(ErrorKind::InvalidArgument, "max_len must be at least 2");
    const std::vector<double> values = t.distinct_values();
    SpectrumResult out;
    for (std::size_t len = 2; len <= max_len; ++len) out.entries.push_back(SpectrumEntry{len, {}, {}, {}});

    auto reaches = [&](std::size_t a, std::size_t b, std::size_t len) {
        LadderResult r = max_ladder(t, ThresholdPair(values[a], values[b]), limits, len);
        if (!r.exact) out.exact = false;
        return r.length >= len;
    };

    // Ladder length is non-increasing in r for fixed s, so the widest r per
    // (s, len) is found by binary search over the sorted values.
    for (std::size_t a = 0; a + 1 < values.size(); ++a) {
        for (auto& entry : out.entries) {
            std::size_t lo = a + 1, hi = values.size() - 1;
            if (!reaches(a, lo, entry.length)) break;
            while (lo < hi) {
                const std::size_t mid = lo + (hi - lo + 1) / 2;
                if (reaches(a, mid, entry.length))
                    lo = mid;
                else
                    hi = mid - 1;
            }
            const double gap = values[lo] - values[a];
            if (!entry.best_gap || gap > *entry.best_gap) {
                entry.best_gap = gap;
                entry.s = values[a];
                entry.r = values[lo];
            }
        }
    }
    return out;
}

IteratedMeans iterated_means(const EvalTable& t, std::span<const std::size_t> row_seq,
                             std::span<const std::size_t> col_seq, double tail_fraction) {
    if (row_seq.size() != col_seq.size() || row_seq.size() < 2)
        throw Error(ErrorKind::InvalidArgument, "row and column sequences must have equal length >= 2");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw Error(ErrorKind::InvalidArgument, "tail_fraction must lie in (0, 1]");
    check_indices(row_seq, t.rows(), "row");
    check_indices(col_seq, t.cols(), "column");

    const std::size_t len = row_seq.size();
    const auto tail = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(len))), 2, len);
    const std::size_t start = len - tail;
    double below = 0.0, above = 0.0;
    std::size_t n_below = 0, n_above = 0;
    for (std::size_t k = start; k < len; ++k) {
        for (std::size_t l = start; l < len; ++l) {
            const double v = t(row_seq[k], col_seq[l]);
            if (k > l) {
                below += v;
                ++n_below;
            } else if (k < l) {
                above += v;
                ++n_above;
            }
        }
    }
    IteratedMeans m;
    m.below_mean = below / static_cast<double>(n_below);
    m.above_mean = above / static_cast<double>(n_above);
    m.defect = std::abs(m.below_mean - m.above_mean);
    return m;
}

nlohmann::json to_json(const LadderResult& r) {
    return {{"length", r.length}, {"exact", r.exact}, {"nodes", r.nodes}, {"witness", to_json(r.witness)}};
}

nlohmann::json to_json(const AlternationResult& r) {
    return {{"rank", r.rank}, {"exact", r.exact}, {"nodes", r.nodes}, {"witness", to_json(r.witness)}};
}

nlohmann::json to_json(const SpectrumResult& r) {
    auto entries = nlohmann::json::array();
    for (const auto& e : r.entries) {
        nlohmann::json j{{"length", e.length}};
        j["best_gap"] = e.best_gap ? nlohmann::json(*e.best_gap) : nlohmann::json();
        if (e.s) j["s"] = *e.s;
        if (e.r) j["r"] = *e.r;
        entries.push_back(std::move(j));
    }
    return {{"exact", r.exact}, {"entries", entries}};
}

}  // namespace dl
