#include "dl/classify.hpp"

#include <algorithm>

#include "dl/parallel.hpp"
#include "dl/rng.hpp"

namespace dl {

nlohmann::json to_json(const ClassifyParams& p) {
    return {{"s", p.thresholds.s()},
            {"r", p.thresholds.r()},
            {"eps", p.eps.value()},
            {"min_ladder", p.min_ladder},
            {"min_ip_dim", p.min_ip_dim},
            {"min_chain", p.min_chain},
            {"node_budget", p.limits.node_budget},
            {"k_max", p.k_max},
            {"distinct_coords", p.distinct_coords},
            {"seed", p.seed},
            {"mc_samples", p.mc_samples},
            {"exact_budget", p.exact_budget}};
}

namespace {

std::string_view to_string(LiteralStatus s) {
    switch (s) {
        case LiteralStatus::Found: return "found";
        case LiteralStatus::None: return "none";
        case LiteralStatus::BudgetExceeded: return "budget_exceeded";
        case LiteralStatus::Skipped: return "skipped";
    }
    return "skipped";
}

template <class F>
void guarded(ClassificationReport& r, const char* component, F&& f) {
    try {
        f();
    } catch (const std::exception& e) {
        r.errors.emplace_back(component, e.what());
    }
}

void check_witness(ClassificationReport& r, const char* field, const EvalTable& t, const AnyWitness& w) {
    if (auto v = validate_witness(t, w); !v) r.errors.emplace_back(field, "witness failed validation: " + v.constraint);
}

}  // namespace

ClassificationReport classify(const EvalTable& t, const ClassifyParams& params) {
    ClassificationReport r;
    r.params = params;
    r.n_rows = t.rows();
    r.n_cols = t.cols();
    r.bound = t.bound();
    r.table_digest = hex_digest(table_digest(t));
    const EvalTable dual = transpose(t);

    guarded(r, "ladder", [&] { r.ladder = max_ladder(t, params.thresholds, params.limits); });
    guarded(r, "alternation_ii",
            [&] { r.alternation_ii = alternation_rank(t, params.eps, AlternationVariant::ii, params.limits); });
    guarded(r, "alternation_iii",
            [&] { r.alternation_iii = alternation_rank(t, params.eps, AlternationVariant::iii, params.limits); });
    guarded(r, "shattering_primal",
            [&] { r.shattering_primal = shattering_dimension(t, params.thresholds, params.limits); });
    guarded(r, "shattering_dual",
            [&] { r.shattering_dual = shattering_dimension(dual, params.thresholds, params.limits); });
    guarded(r, "strict_chain", [&] { r.strict_chain = strict_chain(t, params.eps); });

    r.sop_target = std::max<std::size_t>(2, params.min_chain);
    try {
        r.sop_literal = sop_witness(t, params.eps, r.sop_target, params.limits);
        r.sop_status = r.sop_literal ? LiteralStatus::Found : LiteralStatus::None;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SearchBudgetExceeded) {
            r.errors.emplace_back("sop_literal", e.what());
        }
        r.sop_status = LiteralStatus::BudgetExceeded;
    }

    guarded(r, "talagrand", [&] {
        Sampling sampling{Sampling::Mode::Auto, params.seed, params.mc_samples, params.exact_budget};
        const auto rows = all_rows(t);
        r.talagrand = almost_nip_scan(t, rows, params.thresholds, params.k_max, params.distinct_coords, sampling);
    });

    // Witness re-validation and converters.
    if (r.ladder) check_witness(r, "ladder", t, r.ladder->witness);
    if (r.alternation_ii) check_witness(r, "alternation_ii", t, r.alternation_ii->witness);
    if (r.alternation_iii) check_witness(r, "alternation_iii", t, r.alternation_iii->witness);
    if (r.shattering_primal && r.shattering_primal->witness) {
        check_witness(r, "shattering_primal", t, *r.shattering_primal->witness);
        guarded(r, "ip_to_ladder", [&] {
            r.ip_ladder = ip_to_ladder(t, *r.shattering_primal->witness);
            check_witness(r, "ip_to_ladder", t, *r.ip_ladder);
        });
    }
    if (r.shattering_dual && r.shattering_dual->witness) check_witness(r, "shattering_dual", dual, *r.shattering_dual->witness);
    if (r.strict_chain) check_witness(r, "strict_chain", t, r.strict_chain->witness);
    if (r.sop_literal) {
        check_witness(r, "sop_literal", t, *r.sop_literal);
        guarded(r, "sop_to_alternation", [&] {
            r.sop_alternation = sop_to_alternation(t, *r.sop_literal);
            check_witness(r, "sop_to_alternation", t, *r.sop_alternation);
        });
    }

    if (r.ladder) {
        r.op.detected = r.ladder->length >= params.min_ladder;
        r.op.exact = r.op.detected || r.ladder->exact;
        r.op.trigger = "ladder " + std::to_string(r.ladder->length) + " vs cutoff " + std::to_string(params.min_ladder);
    } else {
        r.op.exact = false;
        r.op.trigger = "ladder unavailable";
    }
    if (r.shattering_primal) {
        r.ip.detected = r.shattering_primal->dim >= params.min_ip_dim;
        r.ip.exact = r.ip.detected || r.shattering_primal->exact;
        r.ip.trigger = "shattering dim " + std::to_string(r.shattering_primal->dim) + " vs cutoff " +
                       std::to_string(params.min_ip_dim);
    } else {
        r.ip.exact = false;
        r.ip.trigger = "shattering unavailable";
    }
    if (r.strict_chain) {
        r.sop.detected = r.strict_chain->m >= params.min_chain;
        r.sop.exact = true;
        r.sop.trigger = "strict chain " + std::to_string(r.strict_chain->m) + " vs cutoff " + std::to_string(params.min_chain);
    } else {
        r.sop.exact = false;
        r.sop.trigger = "strict chain unavailable";
    }
    return r;
}

namespace {

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
    return v ? to_json(*v) : nlohmann::json();
}

nlohmann::json to_json(const Verdict& v) { return {{"detected", v.detected}, {"exact", v.exact}, {"trigger", v.trigger}}; }

}  // namespace

nlohmann::json to_json(const ClassificationReport& r) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["parameters"] = to_json(r.params);
    j["table"] = {{"n_rows", r.n_rows}, {"n_cols", r.n_cols}, {"bound", r.bound}, {"digest", r.table_digest}};
    j["ladder"] = optional_json(r.ladder);
    j["alternation"] = {{"ii", optional_json(r.alternation_ii)}, {"iii", optional_json(r.alternation_iii)}};
    j["shattering"] = {{"primal", optional_json(r.shattering_primal)}, {"dual", optional_json(r.shattering_dual)}};
    j["strict_chain"] = optional_json(r.strict_chain);
    j["sop_literal"] = {{"target_m", r.sop_target}, {"status", to_string(r.sop_status)}, {"witness", optional_json(r.sop_literal)}};
    j["talagrand"] = optional_json(r.talagrand);
    j["converted"] = {{"ip_to_ladder", optional_json(r.ip_ladder)}, {"sop_to_alternation", optional_json(r.sop_alternation)}};
    j["verdicts"] = {{"op_detected", to_json(r.op)}, {"ip_detected", to_json(r.ip)}, {"sop_detected", to_json(r.sop)}};
    auto errors = nlohmann::json::array();
    for (const auto& [component, message] : r.errors) errors.push_back({{"component", component}, {"error", message}});
    j["errors"] = std::move(errors);
    return j;
}

std::vector<WitnessCheck> validate_report(const EvalTable& t, const nlohmann::json& report) {
    if (!report.is_object() || report.value("schema", "") != kReportSchema)
        throw Error(ErrorKind::ParseError, std::string("not a ") + kReportSchema + " report");
    const auto& table = report.at("table");
    if (table.at("n_rows").get<std::size_t>() != t.rows() || table.at("n_cols").get<std::size_t>() != t.cols())
        throw Error(ErrorKind::ShapeMismatch, "report was produced for a table of a different shape");

    const EvalTable dual = transpose(t);
    std::vector<WitnessCheck> out;
    auto check = [&](const std::string& field, const nlohmann::json& node, const EvalTable& against) {
        if (node.is_null()) return;
        out.push_back({field, validate_witness(against, witness_from_json(node))});
    };
    auto witness_at = [](const nlohmann::json& parent, const char* key) -> const nlohmann::json& {
        static const nlohmann::json null_json;
        if (!parent.is_object() || !parent.contains(key)) return null_json;
        return parent.at(key);
    };
    check("ladder", witness_at(report.at("ladder"), "witness"), t);
    check("alternation.ii", witness_at(report.at("alternation").at("ii"), "witness"), t);
    check("alternation.iii", witness_at(report.at("alternation").at("iii"), "witness"), t);
    check("shattering.primal", witness_at(report.at("shattering").at("primal"), "witness"), t);
    check("shattering.dual", witness_at(report.at("shattering").at("dual"), "witness"), dual);
    check("strict_chain", witness_at(report.at("strict_chain"), "witness"), t);
    check("sop_literal", witness_at(report.at("sop_literal"), "witness"), t);
    check("converted.ip_to_ladder", report.at("converted").at("ip_to_ladder"), t);
    check("converted.sop_to_alternation", report.at("converted").at("sop_to_alternation"), t);
    return out;
}

ScanSummary dichotomy_scan(const GeneratorConfig& gen, std::size_t trials, std::uint64_t seed,
                           const ClassifyParams& params, std::size_t max_exceptions) {
    ScanSummary s;
    s.generator = gen;
    s.trials = trials;
    s.seed = seed;
    s.digests.resize(trials);
    std::vector<std::optional<EvalTable>> tables(trials);

    parallel_for(trials, [&](std::size_t trial) {
        GeneratorConfig cfg = gen;
        cfg.seed = derive_seed(seed, trial);
        EvalTable t = generate(cfg);
        TrialDigest d;
        d.trial = trial;
        d.seed = cfg.seed;
        d.table_digest = hex_digest(table_digest(t));
        const LadderResult ladder = max_ladder(t, params.thresholds, params.limits);
        const ShatterResult shatter = shattering_dimension(t, params.thresholds, params.limits);
        d.ladder = ladder.length;
        d.ip_dim = shatter.dim;
        d.chain = strict_chain(t, params.eps).m;
        d.exact = ladder.exact && shatter.exact;
        d.exception = d.ladder >= params.min_ladder && d.ip_dim < params.min_ip_dim && d.chain < params.min_chain;
        s.digests[trial] = d;
        if (d.exception) tables[trial] = std::move(t);
    });

    for (const auto& d : s.digests) {
        if (d.ladder < params.min_ladder) continue;
        ++s.long_ladder;
        const bool ip = d.ip_dim >= params.min_ip_dim;
        const bool sop = d.chain >= params.min_chain;
        s.with_ip += ip;
        s.with_sop += sop;
        s.with_ip_or_sop += ip || sop;
        if (d.exception) {
            ++s.exception_count;
            if (s.exceptions.size() < max_exceptions) {
                const EvalTable& t = *tables[d.trial];
                s.exceptions.push_back({d.trial, to_json(t), to_json(classify(t, params))});
            }
        }
    }
    return s;
}

nlohmann::json to_json(const ScanSummary& s) {
    nlohmann::json j;
    j["schema"] = kScanSchema;
    j["generator"] = to_json(s.generator);
    j["trials"] = s.trials;
    j["seed"] = s.seed;
    j["counts"] = {{"long_ladder", s.long_ladder},
                   {"with_ip", s.with_ip},
                   {"with_sop", s.with_sop},
                   {"with_ip_or_sop", s.with_ip_or_sop},
                   {"exceptions", s.exception_count}};
    auto digests = nlohmann::json::array();
    for (const auto& d : s.digests) {
        digests.push_back({{"trial", d.trial},
                           {"seed", d.seed},
                           {"table_digest", d.table_digest},
                           {"ladder", d.ladder},
                           {"ip_dim", d.ip_dim},
                           {"chain", d.chain},
                           {"exact", d.exact},
                           {"exception", d.exception}});
    }
    j["digests"] = std::move(digests);
    auto ex = nlohmann::json::array();
    for (const auto& e : s.exceptions) ex.push_back({{"trial", e.trial}, {"table", e.table}, {"report", e.report}});
    j["exceptions"] = std::move(ex);
    return j;
}

}  // namespace dl
