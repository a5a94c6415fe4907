#pragma once

// Exhaustive reference implementations. They share nothing with the library
// searches beyond EvalTable access, and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "dl/core.hpp"
#include "dl/rng.hpp"

namespace oracle {

using dl::EvalTable;
using Seq = std::vector<std::size_t>;

inline bool contains(const Seq& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

// Enumerates every sequence of (row, col) pairs with pairwise distinct rows
// and pairwise distinct columns, extending only prefixes accepted by `ok`.
// `ok` sees the sequences after the new pair was appended. Every property
// used here is closed under taking prefixes, so the maximum is exact.
inline std::size_t longest_pair_sequence(const EvalTable& t,
                                         const std::function<bool(const Seq&, const Seq&)>& ok) {
    Seq rows, cols;
    std::size_t best = 0;
    std::function<void()> rec = [&] {
        best = std::max(best, rows.size());
        for (std::size_t i = 0; i < t.rows(); ++i) {
            if (contains(rows, i)) continue;
            for (std::size_t j = 0; j < t.cols(); ++j) {
                if (contains(cols, j)) continue;
                rows.push_back(i);
                cols.push_back(j);
                if (ok(rows, cols)) rec();
                rows.pop_back();
                cols.pop_back();
            }
        }
    };
    rec();
    return best;
}

inline bool is_ladder(const EvalTable& t, const Seq& rows, const Seq& cols, double s, double r) {
    const std::size_t n = rows.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            if (k > l && !(t(rows[k], cols[l]) >= r)) return false;
            if (k < l && !(t(rows[k], cols[l]) <= s)) return false;
        }
    return true;
}

inline std::size_t max_ladder(const EvalTable& t, double s, double r) {
    return longest_pair_sequence(t, [&](const Seq& rows, const Seq& cols) { return is_ladder(t, rows, cols, s, r); });
}

inline bool is_alternation_ii(const EvalTable& t, const Seq& rows, const Seq& cols, double eps) {
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = a + 1; b < rows.size(); ++b)
            if (!(std::abs(t(rows[a], cols[b]) - t(rows[b], cols[a])) >= eps)) return false;
    return true;
}

inline bool is_alternation_iii(const EvalTable& t, const Seq& rows, const Seq& cols, double eps) {
    const std::size_t n = rows.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t u = a + 1; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v)
                if (!(std::abs(t(rows[u], cols[a]) - t(rows[u], cols[v])) >= eps)) return false;
    return true;
}

inline std::size_t alternation_ii(const EvalTable& t, double eps) {
    return longest_pair_sequence(t, [&](const Seq& r, const Seq& c) { return is_alternation_ii(t, r, c, eps); });
}

inline std::size_t alternation_iii(const EvalTable& t, double eps) {
    return longest_pair_sequence(t, [&](const Seq& r, const Seq& c) { return is_alternation_iii(t, r, c, eps); });
}

// Pattern bit i set: position i must be <= s, otherwise >= r.
inline bool realizes(const EvalTable& t, std::size_t row, const Seq& cols, std::uint32_t pattern, double s,
                     double r) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const double v = t(row, cols[i]);
        if ((pattern >> i) & 1U) {
            if (!(v <= s)) return false;
        } else if (!(v >= r)) {
            return false;
        }
    }
    return true;
}

inline bool shattered(const EvalTable& t, const Seq& cols, double s, double r) {
    for (std::uint32_t pattern = 0; pattern < (1U << cols.size()); ++pattern) {
        bool found = false;
        for (std::size_t row = 0; row < t.rows() && !found; ++row) found = realizes(t, row, cols, pattern, s, r);
        if (!found) return false;
    }
    return true;
}

// Every column subset, no pruning.
inline std::size_t shattering_dimension(const EvalTable& t, double s, double r) {
    std::size_t best = 0;
    for (std::uint32_t mask = 1; mask < (1U << t.cols()); ++mask) {
        Seq cols;
        for (std::size_t c = 0; c < t.cols(); ++c)
            if ((mask >> c) & 1U) cols.push_back(c);
        if (cols.size() > best && shattered(t, cols, s, r)) best = cols.size();
    }
    return best;
}

inline bool pointwise_le(const EvalTable& t, std::size_t a, std::size_t b) {
    for (std::size_t p = 0; p < t.rows(); ++p)
        if (t(p, a) > t(p, b)) return false;
    return true;
}

inline bool strict_step(const EvalTable& t, std::size_t a, std::size_t b, double eps) {
    if (!pointwise_le(t, a, b)) return false;
    for (std::size_t p = 0; p < t.rows(); ++p)
        if (t(p, b) >= t(p, a) + eps) return true;
    return false;
}

// Longest sequence of distinct columns joined by strict steps.
inline std::size_t strict_chain(const EvalTable& t, double eps) {
    Seq cols;
    std::size_t best = 1;
    std::function<void()> rec = [&] {
        best = std::max(best, cols.size());
        for (std::size_t c = 0; c < t.cols(); ++c) {
            if (contains(cols, c)) continue;
            if (!cols.empty() && !strict_step(t, cols.back(), c, eps)) continue;
            cols.push_back(c);
            rec();
            cols.pop_back();
        }
    };
    rec();
    return best;
}

// Literal chain of length 2: c1 <= c2 pointwise and distinct rows w1, w2 with
// T[w2][c1] + eps < T[w1][c2].
inline bool literal_chain_pair(const EvalTable& t, double eps) {
    for (std::size_t c1 = 0; c1 < t.cols(); ++c1)
        for (std::size_t c2 = 0; c2 < t.cols(); ++c2) {
            if (c1 == c2 || !pointwise_le(t, c1, c2)) continue;
            for (std::size_t w1 = 0; w1 < t.rows(); ++w1)
                for (std::size_t w2 = 0; w2 < t.rows(); ++w2)
                    if (w1 != w2 && t(w2, c1) + eps < t(w1, c2)) return true;
        }
    return false;
}

// Visits every tuple in E^len (pairwise distinct positions in E when
// `distinct`).
inline void for_each_tuple(const Seq& e, std::size_t len, bool distinct, const std::function<void(const Seq&)>& fn) {
    Seq tuple;
    std::vector<bool> used(e.size(), false);
    std::function<void()> rec = [&] {
        if (tuple.size() == len) {
            fn(tuple);
            return;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (distinct && used[i]) continue;
            used[i] = true;
            tuple.push_back(e[i]);
            rec();
            tuple.pop_back();
            used[i] = false;
        }
    };
    rec();
}

inline bool in_dk(const EvalTable& t, const Seq& w, double s, double r) {
    for (std::size_t c = 0; c < t.cols(); ++c) {
        bool all = true;
        for (std::size_t i = 0; i < w.size() && all; ++i) all = (i % 2 == 0) ? t(w[i], c) <= s : t(w[i], c) >= r;
        if (all) return true;
    }
    return false;
}

inline std::uint64_t dk_count(const EvalTable& t, const Seq& e, std::size_t k, double s, double r, bool distinct) {
    std::uint64_t count = 0;
    for_each_tuple(e, 2 * k, distinct, [&](const Seq& w) { count += in_dk(t, w, s, r); });
    return count;
}

inline std::uint64_t dk_denominator(std::size_t e, std::size_t k, bool distinct) {
    std::uint64_t d = 1;
    for (std::size_t i = 0; i < 2 * k; ++i) d *= distinct ? (e >= i ? e - i : 0) : e;
    return d;
}

inline bool tuple_shattered(const EvalTable& t, const Seq& w, double s, double r, bool strict) {
    for (std::uint32_t pattern = 0; pattern < (1U << w.size()); ++pattern) {
        bool found = false;
        for (std::size_t c = 0; c < t.cols() && !found; ++c) {
            bool all = true;
            for (std::size_t i = 0; i < w.size() && all; ++i) {
                const double v = t(w[i], c);
                if ((pattern >> i) & 1U) {
                    all = strict ? v < s : v <= s;
                } else {
                    all = strict ? v > r : v >= r;
                }
            }
            found = all;
        }
        if (!found) return false;
    }
    return true;
}

inline double shattered_tuple_fraction(const EvalTable& t, const Seq& e, std::size_t n, double s, double r,
                                       bool strict) {
    std::uint64_t hit = 0, total = 0;
    for_each_tuple(e, n, true, [&](const Seq& w) {
        ++total;
        hit += tuple_shattered(t, w, s, r, strict);
    });
    return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

inline double sup_distance(const EvalTable& t, const Seq& cols, const std::vector<double>& w,
                           const std::vector<double>& target) {
    double worst = 0.0;
    for (std::size_t p = 0; p < t.rows(); ++p) {
        double v = 0.0;
        for (std::size_t j = 0; j < cols.size(); ++j) v += w[j] * t(p, cols[j]);
        worst = std::max(worst, std::abs(v - target[p]));
    }
    return worst;
}

// Minimum sup distance over the simplex grid with spacing 1/steps (at most 3
// candidates).
inline double simplex_grid_min(const EvalTable& t, const Seq& cols, const std::vector<double>& target,
                               int steps = 1000) {
    double best = 1e300;
    const double h = 1.0 / steps;
    if (cols.size() == 1) return sup_distance(t, cols, {1.0}, target);
    if (cols.size() == 2) {
        for (int a = 0; a <= steps; ++a) best = std::min(best, sup_distance(t, cols, {a * h, 1.0 - a * h}, target));
        return best;
    }
    for (int a = 0; a <= steps; ++a)
        for (int b = 0; a + b <= steps; ++b)
            best = std::min(best, sup_distance(t, cols, {a * h, b * h, (steps - a - b) * h}, target));
    return best;
}

// {0,1} table whose cell (i, j) is bit (i * cols + j) of `code`.
inline EvalTable binary_table(std::size_t rows, std::size_t cols, std::uint64_t code) {
    std::vector<double> e(rows * cols);
    for (std::size_t i = 0; i < rows * cols; ++i) e[i] = static_cast<double>((code >> i) & 1U);
    return EvalTable(rows, cols, 1.0, std::move(e));
}

// Random table from a small value grid so that ties and threshold hits occur.
inline EvalTable grid_table(std::size_t rows, std::size_t cols, std::uint64_t seed, int levels) {
    dl::Rng rng(seed);
    std::vector<double> e(rows * cols);
    for (auto& v : e) v = static_cast<double>(rng.below(levels)) / static_cast<double>(levels - 1);
    return EvalTable(rows, cols, 1.0, std::move(e));
}

}  // namespace oracle
