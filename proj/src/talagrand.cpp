#include "dl/talagrand.hpp"

#include <algorithm>
#include <cmath>

#include "dl/bitset.hpp"
#include "dl/parallel.hpp"
#include "dl/rng.hpp"

namespace dl {

namespace {

constexpr std::size_t kMonteCarloTasks = 16;

void check_subset(const EvalTable& t, std::span<const std::size_t> subset) {
    if (subset.empty()) throw Error(ErrorKind::EmptySubset, "row subset E is empty");
    check_indices(subset, t.rows(), "subset row");
    std::vector<std::size_t> sorted(subset.begin(), subset.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error(ErrorKind::InvalidArgument, "row subset E contains a repeated row");
}

double power(double base, std::size_t exp) {
    double out = 1.0;
    for (std::size_t i = 0; i < exp; ++i) out *= base;
    return out;
}

double falling(double base, std::size_t exp) {
    double out = 1.0;
    for (std::size_t i = 0; i < exp; ++i) out *= std::max(0.0, base - static_cast<double>(i));
    return out;
}

// Per-row column sets: columns where the row is low / high.
struct RowSets {
    std::vector<Bitset> low;
    std::vector<Bitset> high;

    RowSets(const EvalTable& t, const ThresholdPair& th, bool strict) {
        low.assign(t.rows(), Bitset(t.cols()));
        high.assign(t.rows(), Bitset(t.cols()));
        for (std::size_t i = 0; i < t.rows(); ++i) {
            for (std::size_t c = 0; c < t.cols(); ++c) {
                const double v = t(i, c);
                if (strict ? v < th.s() : v <= th.s()) low[i].set(c);
                if (strict ? v > th.r() : v >= th.r()) high[i].set(c);
            }
        }
    }
};

// Exact D_k count by depth-first tuple enumeration; a prefix whose
// surviving column set is empty contributes nothing.
class DkEnumerator {
public:
    DkEnumerator(const RowSets& sets, std::span<const std::size_t> subset, std::size_t length, bool distinct)
        : sets_(sets), subset_(subset), length_(length), distinct_(distinct), used_(subset.size(), 0) {}

    std::uint64_t count(const Bitset& all_cols) { return visit(all_cols, 0); }

private:
    std::uint64_t visit(const Bitset& alive, std::size_t pos) {
        if (pos == length_) return 1;
        std::uint64_t total = 0;
        for (std::size_t e = 0; e < subset_.size(); ++e) {
            if (distinct_ && used_[e]) continue;
            const std::size_t row = subset_[e];
            const Bitset& side = (pos % 2 == 0) ? sets_.low[row] : sets_.high[row];
            Bitset next = alive & side;
            if (next.none()) continue;
            used_[e] = 1;
            total += visit(next, pos + 1);
            used_[e] = 0;
        }
        return total;
    }

    const RowSets& sets_;
    std::span<const std::size_t> subset_;
    std::size_t length_;
    bool distinct_;
    std::vector<char> used_;
};

bool in_dk(const RowSets& sets, std::span<const std::size_t> tuple, std::size_t n_cols) {
    Bitset alive = Bitset::full(n_cols);
    for (std::size_t pos = 0; pos < tuple.size(); ++pos) {
        alive &= (pos % 2 == 0) ? sets.low[tuple[pos]] : sets.high[tuple[pos]];
        if (alive.none()) return false;
    }
    return true;
}

bool tuple_shattered(const RowSets& sets, std::span<const std::size_t> tuple, std::size_t n_cols) {
    const std::size_t patterns = std::size_t{1} << tuple.size();
    if (patterns > n_cols) return false;
    std::vector<char> seen(patterns, 0);
    std::size_t realized = 0;
    for (std::size_t c = 0; c < n_cols; ++c) {
        std::size_t mask = 0;
        bool classified = true;
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (sets.low[tuple[i]].test(c)) {
                mask |= std::size_t{1} << i;
            } else if (!sets.high[tuple[i]].test(c)) {
                classified = false;
                break;
            }
        }
        if (classified && !seen[mask]) {
            seen[mask] = 1;
            if (++realized == patterns) return true;
        }
    }
    return false;
}

// Draws `length` coordinates from E, redrawing the whole tuple on a repeat
// when distinct coordinates are required.
void draw_tuple(Rng& rng, std::span<const std::size_t> subset, bool distinct, std::vector<std::size_t>& out) {
    while (true) {
        for (auto& v : out) v = subset[rng.below(subset.size())];
        if (!distinct) return;
        std::vector<std::size_t> sorted = out;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) return;
    }
}

struct McEstimate {
    double p_hat = 0.0;
    double std_error_p = 0.0;
};

template <class Pred>
McEstimate monte_carlo(std::span<const std::size_t> subset, std::size_t length, bool distinct, const Sampling& sampling,
                       Pred&& hit) {
    if (sampling.samples == 0) throw Error(ErrorKind::InvalidArgument, "Monte Carlo mode needs samples > 0");
    std::vector<std::uint64_t> hits(kMonteCarloTasks, 0);
    parallel_for(kMonteCarloTasks, [&](std::size_t task) {
        const std::uint64_t share =
            sampling.samples / kMonteCarloTasks + (task < sampling.samples % kMonteCarloTasks ? 1 : 0);
        Rng rng(derive_seed(sampling.seed, task));
        std::vector<std::size_t> tuple(length);
        std::uint64_t h = 0;
        for (std::uint64_t s = 0; s < share; ++s) {
            draw_tuple(rng, subset, distinct, tuple);
            if (hit(tuple)) ++h;
        }
        hits[task] = h;
    });
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    const double n = static_cast<double>(sampling.samples);
    McEstimate est;
    est.p_hat = static_cast<double>(total) / n;
    // Smoothed proportion keeps the standard error positive at 0 or n hits.
    const double p_smooth = (static_cast<double>(total) + 1.0) / (n + 2.0);
    est.std_error_p = std::sqrt(p_smooth * (1.0 - p_smooth) / n);
    return est;
}

bool use_exact(const Sampling& sampling, double space) {
    switch (sampling.mode) {
        case Sampling::Mode::Exact:
            if (space > sampling.exact_budget) {
                throw Error(ErrorKind::BudgetExceeded, "exact enumeration of " + std::to_string(space) +
                                                           " tuples exceeds budget " +
                                                           std::to_string(sampling.exact_budget));
            }
            return true;
        case Sampling::Mode::MonteCarlo: return false;
        case Sampling::Mode::Auto: return space <= sampling.exact_budget;
    }
    return true;
}

}  // namespace

std::vector<std::size_t> all_rows(const EvalTable& t) {
    std::vector<std::size_t> out(t.rows());
    for (std::size_t i = 0; i < t.rows(); ++i) out[i] = i;
    return out;
}

DkReport dk_count(const EvalTable& t, std::span<const std::size_t> subset, std::size_t k, const ThresholdPair& th,
                  bool distinct_coords, const Sampling& sampling) {
    check_subset(t, subset);
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
    const std::size_t length = 2 * k;
    const double e = static_cast<double>(subset.size());

    DkReport rep;
    rep.k = k;
    rep.s = th.s();
    rep.r = th.r();
    rep.subset.assign(subset.begin(), subset.end());
    rep.distinct_coords = distinct_coords;
    rep.denominator = distinct_coords ? falling(e, length) : power(e, length);
    rep.threshold_value = power(e / static_cast<double>(t.rows()), length);

    const RowSets sets(t, th, false);
    if (rep.denominator == 0.0) {
        rep.count = 0.0;
        rep.exact = true;
    } else if (use_exact(sampling, power(e, length))) {
        rep.count = static_cast<double>(DkEnumerator(sets, subset, length, distinct_coords).count(Bitset::full(t.cols())));
        rep.exact = true;
    } else {
        const McEstimate est = monte_carlo(subset, length, distinct_coords, sampling,
                                           [&](std::span<const std::size_t> tuple) { return in_dk(sets, tuple, t.cols()); });
        rep.count = est.p_hat * rep.denominator;
        rep.std_error = est.std_error_p * rep.denominator;
        rep.exact = false;
        rep.seed = sampling.seed;
        rep.samples = sampling.samples;
    }
    rep.density = rep.denominator > 0.0 ? rep.count / rep.denominator : 0.0;
    rep.measure = rep.density * rep.threshold_value;
    rep.condition_holds = rep.count < rep.denominator;
    return rep;
}

AlmostNipScan almost_nip_scan(const EvalTable& t, std::span<const std::size_t> subset, const ThresholdPair& th,
                              std::size_t k_max, bool distinct_coords, const Sampling& sampling) {
    if (k_max == 0) throw Error(ErrorKind::InvalidArgument, "k_max must be at least 1");
    AlmostNipScan scan;
    for (std::size_t k = 1; k <= k_max; ++k) {
        Sampling per_k = sampling;
        per_k.seed = derive_seed(sampling.seed, k);
        scan.reports.push_back(dk_count(t, subset, k, th, distinct_coords, per_k));
        if (!scan.k_min && scan.reports.back().condition_holds) scan.k_min = k;
    }
    return scan;
}

TupleFraction shattered_tuple_fraction(const EvalTable& t, std::span<const std::size_t> subset, std::size_t n,
                                       const ThresholdPair& th, bool strict, const Sampling& sampling) {
    check_subset(t, subset);
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
    if (n > 24) throw Error(ErrorKind::TooManyColumns, "tuple length above 24");
    const RowSets sets(t, th, strict);
    TupleFraction out;
    out.denominator = falling(static_cast<double>(subset.size()), n);
    if (out.denominator == 0.0 || (std::size_t{1} << n) > t.cols()) return out;

    if (use_exact(sampling, power(static_cast<double>(subset.size()), n))) {
        std::vector<std::size_t> tuple;
        std::vector<char> used(subset.size(), 0);
        std::uint64_t hits = 0;
        auto visit = [&](auto&& self) -> void {
            if (tuple.size() == n) {
                if (tuple_shattered(sets, tuple, t.cols())) ++hits;
                return;
            }
            for (std::size_t e = 0; e < subset.size(); ++e) {
                if (used[e]) continue;
                used[e] = 1;
                tuple.push_back(subset[e]);
                self(self);
                tuple.pop_back();
                used[e] = 0;
            }
        };
        visit(visit);
        out.count = static_cast<double>(hits);
        out.fraction = out.count / out.denominator;
        return out;
    }
    const McEstimate est = monte_carlo(subset, n, true, sampling, [&](std::span<const std::size_t> tuple) {
        return tuple_shattered(sets, tuple, t.cols());
    });
    out.fraction = est.p_hat;
    out.std_error = est.std_error_p;
    out.count = est.p_hat * out.denominator;
    out.exact = false;
    return out;
}

nlohmann::json to_json(const DkReport& r) {
    nlohmann::json j{{"k", r.k},
                     {"s", r.s},
                     {"r", r.r},
                     {"subset_E", r.subset},
                     {"count", r.count},
                     {"denominator", r.denominator},
                     {"density", r.density},
                     {"threshold_value", r.threshold_value},
                     {"measure", r.measure},
                     {"condition_holds", r.condition_holds},
                     {"distinct_coords", r.distinct_coords},
                     {"mode", r.exact ? "exact" : "mc"}};
    if (r.std_error) j["std_error"] = *r.std_error;
    if (!r.exact) {
        j["seed"] = r.seed;
        j["samples"] = r.samples;
    }
    return j;
}

nlohmann::json to_json(const AlmostNipScan& s) {
    nlohmann::json j;
    j["k_min"] = s.k_min ? nlohmann::json(*s.k_min) : nlohmann::json();
    auto reports = nlohmann::json::array();
    for (const auto& r : s.reports) reports.push_back(to_json(r));
    j["reports"] = std::move(reports);
    return j;
}

}  // namespace dl
