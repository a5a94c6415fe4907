#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dl/core.hpp"
#include "dl/generators.hpp"
#include "dl/ip.hpp"
#include "dl/op.hpp"
#include "dl/sop.hpp"
#include "dl/talagrand.hpp"
#include "dl/witness.hpp"

namespace dl {

inline constexpr const char* kReportSchema = "dl-report/1";
inline constexpr const char* kScanSchema = "dl-scan/1";

struct ClassifyParams {
    ThresholdPair thresholds{0.0, 1.0};
    Epsilon eps{1.0};
    std::size_t min_ladder = 4;
    std::size_t min_ip_dim = 2;
    std::size_t min_chain = 3;
    SearchLimits limits{};
    std::size_t k_max = 3;
    bool distinct_coords = true;
    std::uint64_t seed = 0;
    std::uint64_t mc_samples = 100'000;
    double exact_budget = 1e8;
};

nlohmann::json to_json(const ClassifyParams& p);

enum class LiteralStatus { Found, None, BudgetExceeded, Skipped };

struct Verdict {
    bool detected = false;
    /// True when the flag is certain: a detection backed by a witness, or a
    /// non-detection from an exhaustive search.
    bool exact = true;
    std::string trigger;
};

struct ClassificationReport {
    ClassifyParams params;
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    double bound = 1.0;
    std::string table_digest;

    std::optional<LadderResult> ladder;
    std::optional<AlternationResult> alternation_ii;
    std::optional<AlternationResult> alternation_iii;
    std::optional<ShatterResult> shattering_primal;
    std::optional<ShatterResult> shattering_dual;
    std::optional<StrictChainResult> strict_chain;
    std::size_t sop_target = 2;
    LiteralStatus sop_status = LiteralStatus::Skipped;
    std::optional<ChainWitness> sop_literal;
    std::optional<AlmostNipScan> talagrand;

    std::optional<LadderWitness> ip_ladder;
    std::optional<AlternationWitness> sop_alternation;

    Verdict op;
    Verdict ip;
    Verdict sop;

    /// Component failures, one entry per failed component.
    std::vector<std::pair<std::string, std::string>> errors;
};

/// Runs every detector on the table, validates each witness and derives the
/// verdict flags from the numeric fields and the cutoffs in `params`.
ClassificationReport classify(const EvalTable& t, const ClassifyParams& params);

nlohmann::json to_json(const ClassificationReport& r);

struct WitnessCheck {
    std::string field;
    Validation result;
};

/// Re-validates every witness embedded in a serialized report against the
/// table it was produced from (dual witnesses against the transpose).
std::vector<WitnessCheck> validate_report(const EvalTable& t, const nlohmann::json& report);

struct TrialDigest {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::string table_digest;
    std::size_t ladder = 1;
    std::size_t ip_dim = 0;
    std::size_t chain = 1;
    bool exact = true;
    bool exception = false;
};

struct ScanException {
    std::size_t trial = 0;
    nlohmann::json table;
    nlohmann::json report;
};

struct ScanSummary {
    GeneratorConfig generator;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t long_ladder = 0;
    std::size_t with_ip = 0;
    std::size_t with_sop = 0;
    std::size_t with_ip_or_sop = 0;
    std::size_t exception_count = 0;
    std::vector<ScanException> exceptions;
    std::vector<TrialDigest> digests;
};

/// Generates `trials` tables with per-trial seeds derive_seed(seed, trial)
/// and tabulates how many long-ladder tables also show IP or a strict chain.
/// Tables with a long ladder but neither are kept (up to max_exceptions) with
/// their full reports.
ScanSummary dichotomy_scan(const GeneratorConfig& gen, std::size_t trials, std::uint64_t seed,
                           const ClassifyParams& params, std::size_t max_exceptions = 25);

nlohmann::json to_json(const ScanSummary& s);

}  // namespace dl
