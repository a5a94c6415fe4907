#include "dl/sop.hpp"

#include <algorithm>

namespace dl {

PreorderMatrix preorder_psi(const EvalTable& t) {
    PreorderMatrix psi(t.cols());
    for (std::size_t a = 0; a < t.cols(); ++a) {
        for (std::size_t b = 0; b < t.cols(); ++b) {
            double worst = 0.0;
            for (std::size_t p = 0; p < t.rows(); ++p) worst = std::max(worst, t(p, a) - t(p, b));
            psi(a, b) = worst;
        }
    }
    return psi;
}

namespace {

std::optional<std::size_t> gap_row(const EvalTable& t, std::size_t lo, std::size_t hi, double eps) {
    for (std::size_t p = 0; p < t.rows(); ++p)
        if (t(p, hi) >= t(p, lo) + eps) return p;
    return std::nullopt;
}

}  // namespace

std::vector<std::vector<std::size_t>> strict_edges(const EvalTable& t, const Epsilon& eps) {
    const PreorderMatrix psi = preorder_psi(t);
    std::vector<std::vector<std::size_t>> out(t.cols());
    for (std::size_t a = 0; a < t.cols(); ++a)
        for (std::size_t b = 0; b < t.cols(); ++b)
            if (a != b && psi.dominated(a, b) && gap_row(t, a, b, eps.value())) out[a].push_back(b);
    return out;
}

StrictChainResult strict_chain(const EvalTable& t, const Epsilon& eps) {
    const auto edges = strict_edges(t, eps);
    const std::size_t n = t.cols();

    // Kahn order; a strict edge forces a <= b pointwise with a != b, so
    // every column is emitted.
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& out : edges)
        for (std::size_t b : out) ++indegree[b];
    std::vector<std::size_t> order;
    for (std::size_t c = 0; c < n; ++c)
        if (indegree[c] == 0) order.push_back(c);
    for (std::size_t k = 0; k < order.size(); ++k)
        for (std::size_t b : edges[order[k]])
            if (--indegree[b] == 0) order.push_back(b);

    // longest[c]: longest chain starting at c; next[c]: successor on it.
    std::vector<std::size_t> longest(n, 1), next(n, n);
    for (std::size_t k = order.size(); k-- > 0;) {
        const std::size_t a = order[k];
        for (std::size_t b : edges[a]) {
            if (longest[b] + 1 > longest[a] || (longest[b] + 1 == longest[a] && b < next[a])) {
                longest[a] = longest[b] + 1;
                next[a] = b;
            }
        }
    }
    std::size_t start = 0;
    for (std::size_t c = 1; c < n; ++c)
        if (longest[c] > longest[start]) start = c;

    StrictChainResult r;
    r.m = longest[start];
    r.witness.eps = eps;
    for (std::size_t c = start; c != n; c = next[c]) {
        if (!r.witness.cols.empty()) r.witness.step_rows.push_back(*gap_row(t, r.witness.cols.back(), c, eps.value()));
        r.witness.cols.push_back(c);
    }
    return r;
}

namespace {

class ChainSearch {
public:
    ChainSearch(const EvalTable& t, const Epsilon& eps, std::size_t target, SearchLimits limits)
        : t_(t), eps_(eps), target_(target), limits_(limits), psi_(preorder_psi(t)) {}

    std::optional<ChainWitness> run() {
        if (extend()) return ChainWitness{cols_, rows_, eps_};
        return std::nullopt;
    }

private:
    bool extend() {
        if (++nodes_ > limits_.node_budget)
            throw Error(ErrorKind::SearchBudgetExceeded,
                        "literal chain search exceeded " + std::to_string(limits_.node_budget) + " nodes");
        if (cols_.size() >= target_) return true;
        for (std::size_t c = 0; c < t_.cols(); ++c) {
            if (std::find(cols_.begin(), cols_.end(), c) != cols_.end()) continue;
            if (!cols_.empty() && !psi_.dominated(cols_.back(), c)) continue;
            for (std::size_t w = 0; w < t_.rows(); ++w) {
                if (std::find(rows_.begin(), rows_.end(), w) != rows_.end() || !compatible(c, w)) continue;
                cols_.push_back(c);
                rows_.push_back(w);
                if (extend()) return true;
                cols_.pop_back();
                rows_.pop_back();
            }
        }
        return false;
    }

    // New position u = size(): for every earlier t, T[w][c_t] + eps < T[w_t][c].
    bool compatible(std::size_t c, std::size_t w) const {
        for (std::size_t k = 0; k < cols_.size(); ++k)
            if (!(t_(w, cols_[k]) + eps_.value() < t_(rows_[k], c))) return false;
        return true;
    }

    const EvalTable& t_;
    Epsilon eps_;
    std::size_t target_;
    SearchLimits limits_;
    PreorderMatrix psi_;
    std::vector<std::size_t> cols_;
    std::vector<std::size_t> rows_;
    std::uint64_t nodes_ = 0;
};

}  // namespace

std::optional<ChainWitness> sop_witness(const EvalTable& t, const Epsilon& eps, std::size_t target_m,
                                        SearchLimits limits) {
    if (target_m < 2) throw Error(ErrorKind::InvalidArgument, "target_m must be at least 2");
    if (eps.value() > 2.0 * t.bound()) return std::nullopt;
    return ChainSearch(t, eps, target_m, limits).run();
}

AlternationWitness sop_to_alternation(const EvalTable& t, const ChainWitness& w) {
    if (auto v = validate(t, w); !v) throw Error(ErrorKind::InvalidWitness, "chain witness fails: " + v.constraint);
    AlternationWitness out{AlternationVariant::ii, {}, w.eps};
    for (std::size_t k = 0; k < w.cols.size(); ++k) out.pairs.emplace_back(w.rows[k], w.cols[k]);
    return out;
}

nlohmann::json to_json(const PreorderMatrix& p) {
    auto rows = nlohmann::json::array();
    for (std::size_t a = 0; a < p.size(); ++a) {
        auto row = nlohmann::json::array();
        for (std::size_t b = 0; b < p.size(); ++b) row.push_back(p(a, b));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json to_json(const StrictChainResult& r) {
    return {{"m", r.m}, {"exact", true}, {"witness", to_json(r.witness)}};
}

}  // namespace dl
