#include "dl/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "dl/classify.hpp"
#include "dl/definability.hpp"
#include "dl/generators.hpp"
#include "dl/op.hpp"
#include "dl/talagrand.hpp"

namespace dl {

namespace {

constexpr const char* kToolName = "dlines";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TableArgs {
    std::string input;
    std::string format;
    std::optional<double> bound;
};

struct AnalysisArgs {
    double s = 0.0;
    double r = 1.0;
    double eps = 1.0;
    std::size_t kmax = 3;
    std::uint64_t exact_limit = 1'000'000;
    std::uint64_t seed = 0;
    std::uint64_t mc_samples = 100'000;
    double exact_budget = 1e8;
    bool distinct_coords = true;
    std::size_t min_ladder = 4;
    std::size_t min_ip = 2;
    std::size_t min_chain = 3;
};

struct GenArgs {
    std::string kind = "half_graph";
    std::size_t n = 6;
    std::size_t k = 3;
    std::size_t rows = 5;
    std::size_t cols = 5;
    std::string model = "bernoulli";
    double p = 0.5;
    double uniform_bound = 1.0;
    std::size_t m = 5;
    std::size_t levels = 8;
    std::uint64_t seed = 0;
};

struct OutputArgs {
    std::string out;
    std::string output = "json";
};

void add_table_options(CLI::App* sub, TableArgs& a, bool required = true) {
    auto* opt = sub->add_option("--input", a.input, "Table file (.csv or .json)");
    if (required) opt->required();
    sub->add_option("--format", a.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--bound", a.bound, "Override the table bound");
}

void add_threshold_options(CLI::App* sub, AnalysisArgs& a) {
    sub->add_option("--s", a.s, "Lower threshold s")->capture_default_str();
    sub->add_option("--r", a.r, "Upper threshold r")->capture_default_str();
}

void add_analysis_options(CLI::App* sub, AnalysisArgs& a) {
    add_threshold_options(sub, a);
    sub->add_option("--eps", a.eps, "Separation epsilon")->capture_default_str();
    sub->add_option("--kmax", a.kmax, "Largest k for the D_k scan")->capture_default_str();
    sub->add_option("--exact-limit", a.exact_limit, "Search node budget per detector")->capture_default_str();
    sub->add_option("--seed", a.seed, "Seed for sampled estimates")->capture_default_str();
    sub->add_option("--mc-samples", a.mc_samples, "Monte Carlo sample count")->capture_default_str();
    sub->add_option("--exact-budget", a.exact_budget, "Largest tuple space enumerated exactly")->capture_default_str();
    sub->add_option("--distinct-coords", a.distinct_coords, "Require distinct tuple coordinates")
        ->capture_default_str();
    sub->add_option("--min-ladder", a.min_ladder, "Ladder cutoff for the OP verdict")->capture_default_str();
    sub->add_option("--min-ip", a.min_ip, "Dimension cutoff for the IP verdict")->capture_default_str();
    sub->add_option("--min-chain", a.min_chain, "Chain cutoff for the SOP verdict")->capture_default_str();
}

void add_generator_options(CLI::App* sub, GenArgs& g) {
    sub->add_option("--kind", g.kind, "Generator kind")
        ->check(CLI::IsMember({"half_graph", "full_pattern", "random_table", "cantor_example"}))
        ->capture_default_str();
    sub->add_option("--n", g.n, "half_graph size")->capture_default_str();
    sub->add_option("--k", g.k, "full_pattern width")->capture_default_str();
    sub->add_option("--rows", g.rows, "random_table rows")->capture_default_str();
    sub->add_option("--cols", g.cols, "random_table columns")->capture_default_str();
    sub->add_option("--model", g.model, "random_table value model")
        ->check(CLI::IsMember({"bernoulli", "uniform"}))
        ->capture_default_str();
    sub->add_option("--p", g.p, "Bernoulli probability")->capture_default_str();
    sub->add_option("--uniform-bound", g.uniform_bound, "Uniform model bound")->capture_default_str();
    sub->add_option("--m", g.m, "cantor_example column count")->capture_default_str();
    sub->add_option("--levels", g.levels, "cantor_example Cantor level L")->capture_default_str();
}

void add_output_options(CLI::App* sub, OutputArgs& o) {
    sub->add_option("--out", o.out, "Write the result here instead of stdout");
    sub->add_option("--output", o.output, "Output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
}

EvalTable load(const TableArgs& a) {
    std::optional<TableFormat> fmt;
    if (a.format == "csv") fmt = TableFormat::Csv;
    if (a.format == "json") fmt = TableFormat::Json;
    return load_table_file(a.input, fmt, a.bound);
}

ThresholdPair thresholds(const AnalysisArgs& a) {
    if (!(a.s < a.r)) throw UsageError("--s must be strictly below --r");
    return ThresholdPair(a.s, a.r);
}

Epsilon epsilon(const AnalysisArgs& a) {
    if (!(a.eps > 0.0)) throw UsageError("--eps must be positive");
    return Epsilon(a.eps);
}

ClassifyParams classify_params(const AnalysisArgs& a) {
    ClassifyParams p;
    p.thresholds = thresholds(a);
    p.eps = epsilon(a);
    p.min_ladder = a.min_ladder;
    p.min_ip_dim = a.min_ip;
    p.min_chain = a.min_chain;
    p.limits.node_budget = a.exact_limit;
    p.k_max = a.kmax;
    p.distinct_coords = a.distinct_coords;
    p.seed = a.seed;
    p.mc_samples = a.mc_samples;
    p.exact_budget = a.exact_budget;
    return p;
}

GeneratorConfig generator_config(const GenArgs& g) {
    GeneratorConfig c;
    c.kind = generator_kind_from_string(g.kind);
    c.n = g.n;
    c.k = g.k;
    c.rows = g.rows;
    c.cols = g.cols;
    c.model = g.model == "uniform" ? ValueModel::uniform(g.uniform_bound) : ValueModel::bernoulli(g.p);
    c.m = g.m;
    c.levels = g.levels;
    c.seed = g.seed;
    return c;
}

nlohmann::json provenance(const std::string& subcommand, nlohmann::json parameters, nlohmann::json seeds) {
    return {{"tool", kToolName},
            {"version", DL_VERSION},
            {"subcommand", subcommand},
            {"parameters", std::move(parameters)},
            {"seeds", std::move(seeds)}};
}

void emit(const OutputArgs& o, const std::string& text, std::ostream& out) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error(ErrorKind::ParseError, "cannot write " + o.out);
    f << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string verdict_line(const char* name, const nlohmann::json& v) {
    std::ostringstream s;
    s << name << ": " << yes_no(v.at("detected").get<bool>()) << (v.at("exact").get<bool>() ? "" : " (inexact)")
      << "  [" << v.at("trigger").get<std::string>() << "]\n";
    return s.str();
}

std::string report_text(const nlohmann::json& j) {
    std::ostringstream s;
    const auto& t = j.at("table");
    s << "table " << t.at("n_rows") << "x" << t.at("n_cols") << " bound " << t.at("bound") << " digest "
      << t.at("digest").get<std::string>() << "\n";
    auto field = [&](const char* label, const nlohmann::json& node, const char* key) {
        s << label << ": ";
        if (node.is_null()) {
            s << "error\n";
        } else {
            s << node.at(key) << (node.at("exact").get<bool>() ? "" : " (inexact)") << "\n";
        }
    };
    field("ladder", j.at("ladder"), "length");
    field("alternation ii", j.at("alternation").at("ii"), "rank");
    field("alternation iii", j.at("alternation").at("iii"), "rank");
    field("shattering primal", j.at("shattering").at("primal"), "dim");
    field("shattering dual", j.at("shattering").at("dual"), "dim");
    s << "strict chain: " << (j.at("strict_chain").is_null() ? nlohmann::json("error") : j.at("strict_chain").at("m"))
      << "\n";
    s << "literal chain (target " << j.at("sop_literal").at("target_m") << "): "
      << j.at("sop_literal").at("status").get<std::string>() << "\n";
    if (!j.at("talagrand").is_null()) {
        for (const auto& r : j.at("talagrand").at("reports")) {
            s << "D_" << r.at("k") << ": density " << r.at("density") << " condition "
              << yes_no(r.at("condition_holds").get<bool>()) << "\n";
        }
    }
    const auto& v = j.at("verdicts");
    s << verdict_line("OP", v.at("op_detected")) << verdict_line("IP", v.at("ip_detected"))
      << verdict_line("SOP", v.at("sop_detected"));
    for (const auto& e : j.at("errors"))
        s << "error in " << e.at("component").get<std::string>() << ": " << e.at("error").get<std::string>() << "\n";
    return s.str();
}

std::vector<double> load_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    if (j.is_object() && j.contains("target")) j = j.at("target");
    if (!j.is_array()) throw Error(ErrorKind::ParseError, "target must be a JSON array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw Error(ErrorKind::ParseError, "target has a non-numeric entry");
        out.push_back(v.get<double>());
    }
    return out;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SearchBudgetExceeded:
        case ErrorKind::BudgetExceeded:
        case ErrorKind::SolverFailure: return kExitBudget;
        case ErrorKind::InvalidThreshold:
        case ErrorKind::InvalidEpsilon:
        case ErrorKind::InvalidArgument:
        case ErrorKind::InvalidSize: return kExitUsage;
        default: return kExitInvalidInput;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dividing-line detectors for finite evaluation tables", kToolName};
    app.set_version_flag("--version", DL_VERSION);
    app.require_subcommand(1);

    TableArgs table;
    AnalysisArgs analysis;
    GenArgs gen;
    OutputArgs output;
    std::string report_path;
    std::size_t spectrum = 0;
    std::string target_out;
    std::string mode = "auto";
    std::vector<std::size_t> subset;
    std::size_t trials = 100;
    std::size_t max_exceptions = 25;
    std::vector<std::size_t> mazur_cols;
    std::string target_path;
    double tol = 1e-6;

    auto* validate_cmd = app.add_subcommand("validate", "Check that a table parses and satisfies its bound");
    add_table_options(validate_cmd, table);
    add_output_options(validate_cmd, output);

    auto* analyze_cmd = app.add_subcommand("analyze", "Run every detector and emit a report");
    add_table_options(analyze_cmd, table);
    add_analysis_options(analyze_cmd, analysis);
    add_output_options(analyze_cmd, output);
    analyze_cmd->add_option("--validate-report", report_path, "Re-validate the witnesses of an existing report");
    analyze_cmd->add_option("--spectrum", spectrum, "Also compute the stability spectrum up to this length");

    auto* generate_cmd = app.add_subcommand("generate", "Write a generated table");
    add_generator_options(generate_cmd, gen);
    generate_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
    generate_cmd->add_option("--out", output.out, "Table output path");
    generate_cmd->add_option("--target-out", target_out, "cantor_example: write the limit column here");

    auto* talagrand_cmd = app.add_subcommand("talagrand", "D_k counts for k = 1..kmax");
    add_table_options(talagrand_cmd, table);
    add_threshold_options(talagrand_cmd, analysis);
    talagrand_cmd->add_option("--kmax", analysis.kmax, "Largest k")->capture_default_str();
    talagrand_cmd->add_option("--seed", analysis.seed, "Monte Carlo seed")->capture_default_str();
    talagrand_cmd->add_option("--mc-samples", analysis.mc_samples, "Monte Carlo sample count")->capture_default_str();
    talagrand_cmd->add_option("--exact-budget", analysis.exact_budget, "Largest tuple space enumerated exactly")
        ->capture_default_str();
    talagrand_cmd->add_option("--distinct-coords", analysis.distinct_coords, "Require distinct coordinates")
        ->capture_default_str();
    talagrand_cmd->add_option("--mode", mode, "Counting mode")
        ->check(CLI::IsMember({"exact", "mc", "auto"}))
        ->capture_default_str();
    talagrand_cmd->add_option("--subset", subset, "Row subset E (default: all rows)")->delimiter(',');
    add_output_options(talagrand_cmd, output);

    auto* scan_cmd = app.add_subcommand("dichotomy-scan", "Tabulate OP against IP and SOP over generated tables");
    add_generator_options(scan_cmd, gen);
    add_analysis_options(scan_cmd, analysis);
    scan_cmd->add_option("--trials", trials, "Number of generated tables")->capture_default_str();
    scan_cmd->add_option("--max-exceptions", max_exceptions, "Exception tables kept in full")->capture_default_str();
    add_output_options(scan_cmd, output);

    auto* mazur_cmd = app.add_subcommand("mazur", "Best convex sup-norm approximation of a target column");
    mazur_cmd->add_option("--table", table.input, "Table file")->required();
    mazur_cmd->add_option("--format", table.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    mazur_cmd->add_option("--cols", mazur_cols, "Candidate columns")->delimiter(',')->required();
    mazur_cmd->add_option("--target", target_path, "Target vector (JSON array)")->required();
    mazur_cmd->add_option("--tol", tol, "Certified optimality tolerance")->capture_default_str();
    add_output_options(mazur_cmd, output);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*validate_cmd) {
            const EvalTable t = load(table);
            nlohmann::json j{{"ok", true},
                             {"n_rows", t.rows()},
                             {"n_cols", t.cols()},
                             {"bound", t.bound()},
                             {"digest", hex_digest(table_digest(t))}};
            if (output.output == "text") {
                emit(output,
                     "ok: " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) + " digest " +
                         j["digest"].get<std::string>() + "\n",
                     out);
            } else {
                emit(output, dump(j), out);
            }
            return kExitOk;
        }

        if (*analyze_cmd) {
            const ClassifyParams params = classify_params(analysis);
            const EvalTable t = load(table);
            if (!report_path.empty()) {
                std::ifstream in(report_path);
                if (!in) throw Error(ErrorKind::ParseError, "cannot open " + report_path);
                nlohmann::json report;
                try {
                    report = nlohmann::json::parse(in);
                } catch (const nlohmann::json::parse_error& e) {
                    throw Error(ErrorKind::ParseError, e.what());
                }
                const auto checks = validate_report(t, report);
                bool all_ok = true;
                auto arr = nlohmann::json::array();
                for (const auto& c : checks) {
                    all_ok = all_ok && c.result.ok;
                    arr.push_back({{"field", c.field}, {"validation", to_json(c.result)}});
                }
                nlohmann::json j{{"ok", all_ok}, {"checked", checks.size()}, {"witnesses", arr}};
                if (output.output == "text") {
                    std::string s;
                    for (const auto& c : checks)
                        s += c.field + ": " + (c.result.ok ? "ok" : "FAILED " + c.result.constraint) + "\n";
                    emit(output, s, out);
                } else {
                    emit(output, dump(j), out);
                }
                return all_ok ? kExitOk : kExitInvalidInput;
            }
            nlohmann::json j = to_json(classify(t, params));
            if (spectrum >= 2) j["spectrum"] = to_json(stability_spectrum(t, spectrum, params.limits));
            j["provenance"] = provenance("analyze",
                                         {{"input", table.input}, {"classify", to_json(params)}, {"spectrum", spectrum}},
                                         {{"talagrand", params.seed}});
            emit(output, output.output == "text" ? report_text(j) : dump(j), out);
            return kExitOk;
        }

        if (*generate_cmd) {
            const GeneratorConfig cfg = generator_config(gen);
            nlohmann::json j;
            std::optional<std::vector<double>> target;
            if (cfg.kind == GeneratorConfig::Kind::CantorExample) {
                CantorExample ex = cantor_example(cfg.m, cfg.levels);
                j = to_json(ex.table);
                target = std::move(ex.target);
            } else {
                j = to_json(generate(cfg));
            }
            j["provenance"] = provenance("generate", {{"generator", to_json(cfg)}}, {{"generator", cfg.seed}});
            emit(output, dump(j), out);
            if (!target_out.empty()) {
                if (!target) throw UsageError("--target-out is only meaningful for cantor_example");
                OutputArgs t_out{target_out, "json"};
                emit(t_out, dump(nlohmann::json(*target)), out);
            }
            return kExitOk;
        }

        if (*talagrand_cmd) {
            const ThresholdPair th = thresholds(analysis);
            const EvalTable t = load(table);
            Sampling sampling{Sampling::Mode::Auto, analysis.seed, analysis.mc_samples, analysis.exact_budget};
            if (mode == "exact") sampling.mode = Sampling::Mode::Exact;
            if (mode == "mc") sampling.mode = Sampling::Mode::MonteCarlo;
            const std::vector<std::size_t> rows = subset.empty() ? all_rows(t) : subset;
            const AlmostNipScan scan = almost_nip_scan(t, rows, th, analysis.kmax, analysis.distinct_coords, sampling);
            nlohmann::json j = to_json(scan);
            j["provenance"] = provenance("talagrand",
                                         {{"input", table.input},
                                          {"s", th.s()},
                                          {"r", th.r()},
                                          {"kmax", analysis.kmax},
                                          {"mode", mode},
                                          {"mc_samples", analysis.mc_samples},
                                          {"exact_budget", analysis.exact_budget},
                                          {"distinct_coords", analysis.distinct_coords},
                                          {"subset", rows}},
                                         {{"monte_carlo", analysis.seed}});
            if (output.output == "text") {
                std::ostringstream s;
                for (const auto& r : scan.reports) {
                    s << "k=" << r.k << " count " << r.count << " / " << r.denominator << " density " << r.density
                      << (r.exact ? "" : " (mc)") << " condition " << yes_no(r.condition_holds) << "\n";
                }
                s << "k_min: " << (scan.k_min ? std::to_string(*scan.k_min) : "none") << "\n";
                emit(output, s.str(), out);
            } else {
                emit(output, dump(j), out);
            }
            return kExitOk;
        }

        if (*scan_cmd) {
            const ClassifyParams params = classify_params(analysis);
            GeneratorConfig cfg = generator_config(gen);
            const ScanSummary summary = dichotomy_scan(cfg, trials, analysis.seed, params, max_exceptions);
            nlohmann::json j = to_json(summary);
            j["provenance"] = provenance("dichotomy-scan",
                                         {{"generator", to_json(cfg)},
                                          {"trials", trials},
                                          {"classify", to_json(params)},
                                          {"max_exceptions", max_exceptions}},
                                         {{"scan", analysis.seed}});
            if (output.output == "text") {
                std::ostringstream s;
                s << "trials " << summary.trials << "\nlong ladder " << summary.long_ladder << "\n  with IP "
                  << summary.with_ip << "\n  with SOP " << summary.with_sop << "\n  with IP or SOP "
                  << summary.with_ip_or_sop << "\n  exceptions " << summary.exception_count << "\n";
                emit(output, s.str(), out);
            } else {
                emit(output, dump(j), out);
            }
            return kExitOk;
        }

        if (*mazur_cmd) {
            std::optional<TableFormat> fmt;
            if (table.format == "csv") fmt = TableFormat::Csv;
            if (table.format == "json") fmt = TableFormat::Json;
            const EvalTable t = load_table_file(table.input, fmt);
            const std::vector<double> target = load_vector(target_path);
            const ConvexApproximation a = mazur_approximate(t, mazur_cols, target, tol);
            nlohmann::json j = to_json(a);
            j["provenance"] = provenance("mazur",
                                         {{"table", table.input}, {"cols", mazur_cols}, {"target", target_path}, {"tol", tol}},
                                         nlohmann::json::object());
            if (output.output == "text") {
                std::ostringstream s;
                s << std::setprecision(12) << "achieved " << a.achieved << "\ncertified gap " << a.certified_gap
                  << "\nweights";
                for (double w : a.weights) s << " " << w;
                s << "\n";
                emit(output, s.str(), out);
            } else {
                emit(output, dump(j), out);
            }
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << dump({{"error", "UsageError"}, {"message", e.what()}});
        return kExitUsage;
    } catch (const Error& e) {
        err << dump({{"error", std::string(to_string(e.kind()))}, {"message", e.what()}});
        return exit_code_for(e.kind());
    }
    return kExitUsage;
}

}  // namespace dl
