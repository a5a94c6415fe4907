#include "dl/witness.hpp"

#include <cmath>
#include <set>

namespace dl {

std::string_view to_string(AlternationVariant v) { return v == AlternationVariant::ii ? "ii" : "iii"; }

AlternationVariant alternation_variant_from_string(std::string_view s) {
    if (s == "ii") return AlternationVariant::ii;
    if (s == "iii") return AlternationVariant::iii;
    throw Error(ErrorKind::ParseError, "alternation variant must be \"ii\" or \"iii\"");
}

namespace {

Validation fail(std::string constraint, std::size_t row, std::size_t col) {
    return Validation{false, std::move(constraint), std::make_pair(row, col)};
}

Validation fail(std::string constraint) { return Validation{false, std::move(constraint), std::nullopt}; }

std::optional<std::size_t> first_duplicate(const std::vector<std::size_t>& v) {
    std::set<std::size_t> seen;
    for (std::size_t x : v)
        if (!seen.insert(x).second) return x;
    return std::nullopt;
}

}  // namespace

Validation validate(const EvalTable& t, const LadderWitness& w) {
    check_indices(w.rows, t.rows(), "ladder row");
    check_indices(w.cols, t.cols(), "ladder column");
    if (w.rows.size() != w.cols.size() || w.rows.empty()) return fail("LengthMismatch");
    if (auto d = first_duplicate(w.rows)) return fail("DuplicateRow " + std::to_string(*d));
    if (auto d = first_duplicate(w.cols)) return fail("DuplicateColumn " + std::to_string(*d));
    const std::size_t n = w.rows.size();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            const double v = t(w.rows[k], w.cols[l]);
            if (k > l && !(v >= w.thresholds.r())) return fail("BelowDiagonalNotAtLeastR", w.rows[k], w.cols[l]);
            if (k < l && !(v <= w.thresholds.s())) return fail("AboveDiagonalNotAtMostS", w.rows[k], w.cols[l]);
        }
    }
    return {};
}

Validation validate(const EvalTable& t, const AlternationWitness& w) {
    std::vector<std::size_t> rows, cols;
    for (auto [i, j] : w.pairs) {
        rows.push_back(i);
        cols.push_back(j);
    }
    check_indices(rows, t.rows(), "alternation row");
    check_indices(cols, t.cols(), "alternation column");
    if (w.pairs.empty()) return fail("Empty");
    if (auto d = first_duplicate(rows)) return fail("DuplicateRow " + std::to_string(*d));
    if (auto d = first_duplicate(cols)) return fail("DuplicateColumn " + std::to_string(*d));
    const double eps = w.eps.value();
    const std::size_t n = w.pairs.size();
    if (w.variant == AlternationVariant::ii) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                const double lhs = t(rows[a], cols[b]);
                const double rhs = t(rows[b], cols[a]);
                if (!(std::abs(lhs - rhs) >= eps)) return fail("PairGapBelowEps", rows[a], cols[b]);
            }
        }
    } else {
        for (std::size_t u = 1; u + 1 < n; ++u) {
            for (std::size_t a = 0; a < u; ++a) {
                for (std::size_t c = u + 1; c < n; ++c) {
                    if (!(std::abs(t(rows[u], cols[a]) - t(rows[u], cols[c])) >= eps))
                        return fail("MiddleRowGapBelowEps", rows[u], cols[a]);
                }
            }
        }
    }
    return {};
}

Validation validate(const EvalTable& t, const ShatterWitness& w) {
    check_indices(w.cols, t.cols(), "shatter column");
    for (const auto& [mask, row] : w.selector) {
        if (row >= t.rows())
            throw Error(ErrorKind::IndexOutOfRange, "selector row " + std::to_string(row) + " out of range");
    }
    const std::size_t k = w.cols.size();
    if (k == 0) return fail("Empty");
    if (k > 24) return fail("TooManyColumns");
    if (auto d = first_duplicate(w.cols)) return fail("DuplicateColumn " + std::to_string(*d));
    const std::uint32_t patterns = std::uint32_t{1} << k;
    for (const auto& [mask, row] : w.selector) {
        if (mask >= patterns) return fail("SelectorKeyOutOfRange " + std::to_string(mask));
    }
    for (std::uint32_t mask = 0; mask < patterns; ++mask) {
        auto it = w.selector.find(mask);
        if (it == w.selector.end()) return fail("IncompleteSelector " + std::to_string(mask));
        const std::size_t row = it->second;
        for (std::size_t i = 0; i < k; ++i) {
            const double v = t(row, w.cols[i]);
            if ((mask >> i) & 1U) {
                if (!(v <= w.thresholds.s())) return fail("InPatternNotAtMostS", row, w.cols[i]);
            } else if (!(v >= w.thresholds.r())) {
                return fail("OutOfPatternNotAtLeastR", row, w.cols[i]);
            }
        }
    }
    return {};
}

Validation validate(const EvalTable& t, const ChainWitness& w) {
    check_indices(w.cols, t.cols(), "chain column");
    check_indices(w.rows, t.rows(), "chain row");
    if (w.cols.empty() || w.cols.size() != w.rows.size()) return fail("LengthMismatch");
    if (auto d = first_duplicate(w.cols)) return fail("DuplicateColumn " + std::to_string(*d));
    if (auto d = first_duplicate(w.rows)) return fail("DuplicateRow " + std::to_string(*d));
    const std::size_t m = w.cols.size();
    for (std::size_t step = 0; step + 1 < m; ++step) {
        for (std::size_t p = 0; p < t.rows(); ++p) {
            if (!(t(p, w.cols[step]) <= t(p, w.cols[step + 1]))) return fail("NotPointwiseNondecreasing", p, w.cols[step]);
        }
    }
    const double eps = w.eps.value();
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            if (!(t(w.rows[b], w.cols[a]) + eps < t(w.rows[a], w.cols[b])))
                return fail("CrossGapNotExceedingEps", w.rows[b], w.cols[a]);
        }
    }
    return {};
}

Validation validate(const EvalTable& t, const StepChainWitness& w) {
    check_indices(w.cols, t.cols(), "chain column");
    check_indices(w.step_rows, t.rows(), "step row");
    if (w.cols.empty() || w.step_rows.size() + 1 != w.cols.size()) return fail("LengthMismatch");
    if (auto d = first_duplicate(w.cols)) return fail("DuplicateColumn " + std::to_string(*d));
    for (std::size_t step = 0; step + 1 < w.cols.size(); ++step) {
        const std::size_t lo = w.cols[step], hi = w.cols[step + 1];
        for (std::size_t p = 0; p < t.rows(); ++p) {
            if (!(t(p, lo) <= t(p, hi))) return fail("NotPointwiseNondecreasing", p, lo);
        }
        const std::size_t g = w.step_rows[step];
        if (!(t(g, hi) >= t(g, lo) + w.eps.value())) return fail("StepGapBelowEps", g, hi);
    }
    return {};
}

Validation validate_witness(const EvalTable& t, const AnyWitness& w) {
    return std::visit([&t](const auto& x) { return validate(t, x); }, w);
}

nlohmann::json to_json(const LadderWitness& w) {
    return {{"kind", "ladder"}, {"rows", w.rows}, {"cols", w.cols}, {"s", w.thresholds.s()}, {"r", w.thresholds.r()}};
}

nlohmann::json to_json(const AlternationWitness& w) {
    auto pairs = nlohmann::json::array();
    for (auto [i, j] : w.pairs) pairs.push_back({i, j});
    return {{"kind", "alternation"}, {"variant", to_string(w.variant)}, {"pairs", pairs}, {"eps", w.eps.value()}};
}

nlohmann::json to_json(const ShatterWitness& w) {
    nlohmann::json sel = nlohmann::json::object();
    for (const auto& [mask, row] : w.selector) sel[std::to_string(mask)] = row;
    return {{"kind", "shatter"}, {"cols", w.cols}, {"s", w.thresholds.s()}, {"r", w.thresholds.r()}, {"selector", sel}};
}

nlohmann::json to_json(const ChainWitness& w) {
    return {{"kind", "chain"}, {"cols", w.cols}, {"rows", w.rows}, {"eps", w.eps.value()}};
}

nlohmann::json to_json(const StepChainWitness& w) {
    return {{"kind", "step_chain"}, {"cols", w.cols}, {"step_rows", w.step_rows}, {"eps", w.eps.value()}};
}

nlohmann::json to_json(const AnyWitness& w) {
    return std::visit([](const auto& x) { return to_json(x); }, w);
}

nlohmann::json to_json(const Validation& v) {
    nlohmann::json j{{"valid", v.ok}};
    if (!v.ok) {
        j["constraint"] = v.constraint;
        if (v.cell) j["cell"] = {v.cell->first, v.cell->second};
    }
    return j;
}

AnyWitness witness_from_json(const nlohmann::json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "ladder") {
            return LadderWitness{j.at("rows").get<std::vector<std::size_t>>(), j.at("cols").get<std::vector<std::size_t>>(),
                                 ThresholdPair(j.at("s").get<double>(), j.at("r").get<double>())};
        }
        if (kind == "alternation") {
            AlternationWitness w{alternation_variant_from_string(j.at("variant").get<std::string>()), {},
                                 Epsilon(j.at("eps").get<double>())};
            for (const auto& p : j.at("pairs")) w.pairs.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
            return w;
        }
        if (kind == "shatter") {
            ShatterWitness w{j.at("cols").get<std::vector<std::size_t>>(),
                             ThresholdPair(j.at("s").get<double>(), j.at("r").get<double>()), {}};
            for (const auto& [key, row] : j.at("selector").items())
                w.selector[static_cast<std::uint32_t>(std::stoul(key))] = row.get<std::size_t>();
            return w;
        }
        if (kind == "chain") {
            return ChainWitness{j.at("cols").get<std::vector<std::size_t>>(), j.at("rows").get<std::vector<std::size_t>>(),
                                Epsilon(j.at("eps").get<double>())};
        }
        if (kind == "step_chain") {
            return StepChainWitness{j.at("cols").get<std::vector<std::size_t>>(),
                                    j.at("step_rows").get<std::vector<std::size_t>>(), Epsilon(j.at("eps").get<double>())};
        }
        throw Error(ErrorKind::ParseError, "unknown witness kind \"" + kind + "\"");
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("malformed witness: ") + e.what());
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::ParseError, "malformed selector key");
    }
}

}  // namespace dl
