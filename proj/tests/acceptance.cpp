// Acceptance suite: one PASS/FAIL line per criterion.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "dl/classify.hpp"
#include "dl/cli.hpp"
#include "dl/definability.hpp"
#include "dl/parallel.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dl;

namespace {

const ThresholdPair kUnit{0.0, 1.0};

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Counts failures from parallel workers.
struct Tally {
    std::atomic<std::size_t> checked{0};
    std::atomic<std::size_t> failed{0};
    void check(bool ok) {
        ++checked;
        if (!ok) ++failed;
    }
};

std::vector<EvalTable> random_binary_5x5() {
    std::vector<EvalTable> out;
    for (std::uint64_t i = 0; i < 500; ++i) out.push_back(random_table(5, 5, ValueModel::bernoulli(0.5), derive_seed(2024, i)));
    return out;
}

Outcome oracle_equivalence() {
    Tally tally;
    const auto check_table = [&](const EvalTable& t) {
        tally.check(max_ladder(t, kUnit).length == oracle::max_ladder(t, 0.0, 1.0));
        tally.check(shattering_dimension(t, kUnit).dim == oracle::shattering_dimension(t, 0.0, 1.0));
        tally.check(alternation_rank(t, Epsilon(1.0), AlternationVariant::ii).rank == oracle::alternation_ii(t, 1.0));
        tally.check(alternation_rank(t, Epsilon(1.0), AlternationVariant::iii).rank == oracle::alternation_iii(t, 1.0));
        tally.check(strict_chain(t, Epsilon(1.0)).m == oracle::strict_chain(t, 1.0));
    };
    parallel_for(std::size_t{1} << 16, [&](std::size_t code) { check_table(oracle::binary_table(4, 4, code)); });
    const auto corpus = random_binary_5x5();
    parallel_for(corpus.size(), [&](std::size_t i) { check_table(corpus[i]); });
    return {tally.failed == 0, std::to_string(tally.checked - tally.failed) + "/" + std::to_string(tally.checked) +
                                   " detector values equal the exhaustive oracle"};
}

struct SoundnessData {
    std::vector<ClassificationReport> reports;
    std::vector<EvalTable> tables;
};

SoundnessData soundness_corpus() {
    SoundnessData d;
    const std::size_t n = 1000;
    d.tables.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        Rng rng(derive_seed(99, i));
        const std::size_t rows = 2 + rng.below(11), cols = 2 + rng.below(11);
        const ValueModel model = i % 2 ? ValueModel::uniform(1.0) : ValueModel::bernoulli(0.2 + 0.6 * rng.uniform01());
        d.tables.push_back(random_table(rows, cols, model, derive_seed(7, i)));
    }
    d.reports.resize(n);
    parallel_for(n, [&](std::size_t i) {
        ClassifyParams p;
        const bool real = i % 2 == 1;
        p.thresholds = real ? ThresholdPair(-0.25, 0.25) : kUnit;
        p.eps = Epsilon(real ? 0.4 : 1.0);
        p.min_chain = 2 + i % 3;
        p.k_max = 2;
        p.mc_samples = 2000;
        p.exact_budget = 1e6;
        p.seed = i;
        d.reports[i] = classify(d.tables[i], p);
    });
    return d;
}

Outcome witness_soundness(const SoundnessData& d) {
    std::size_t checked = 0, failed = 0, errors = 0;
    const auto check = [&](const EvalTable& t, const AnyWitness& w) {
        ++checked;
        if (!validate_witness(t, w)) ++failed;
    };
    for (std::size_t i = 0; i < d.tables.size(); ++i) {
        const EvalTable& t = d.tables[i];
        const auto& r = d.reports[i];
        errors += r.errors.size();
        if (r.ladder) check(t, r.ladder->witness);
        if (r.alternation_ii) check(t, r.alternation_ii->witness);
        if (r.alternation_iii) check(t, r.alternation_iii->witness);
        if (r.shattering_primal && r.shattering_primal->witness) check(t, *r.shattering_primal->witness);
        if (r.shattering_dual && r.shattering_dual->witness) check(transpose(t), *r.shattering_dual->witness);
        if (r.strict_chain) check(t, r.strict_chain->witness);
        if (r.sop_literal) check(t, *r.sop_literal);
        // The serialized form must re-validate as well.
        for (const auto& c : validate_report(t, to_json(r))) {
            ++checked;
            if (!c.result.ok) ++failed;
        }
    }
    return {failed == 0 && errors == 0, std::to_string(checked - failed) + "/" + std::to_string(checked) +
                                            " witnesses valid over " + std::to_string(d.tables.size()) + " tables, " +
                                            std::to_string(errors) + " component errors"};
}

Outcome converter_correctness(const SoundnessData& d) {
    std::size_t shatter = 0, chain = 0, failed = 0;
    for (std::size_t i = 0; i < d.tables.size(); ++i) {
        const EvalTable& t = d.tables[i];
        const auto& r = d.reports[i];
        const auto convert = [&](const EvalTable& table, const ShatterWitness& w) {
            ++shatter;
            const LadderWitness lad = ip_to_ladder(table, w);
            if (lad.length() != w.dimension() || !validate(table, lad)) ++failed;
        };
        if (r.shattering_primal && r.shattering_primal->witness) convert(t, *r.shattering_primal->witness);
        if (r.shattering_dual && r.shattering_dual->witness) convert(transpose(t), *r.shattering_dual->witness);
        if (r.sop_literal) {
            ++chain;
            const AlternationWitness alt = sop_to_alternation(t, *r.sop_literal);
            if (alt.variant != AlternationVariant::ii || alt.length() != r.sop_literal->length() || !validate(t, alt))
                ++failed;
        }
    }
    return {failed == 0 && shatter > 0 && chain > 0,
            std::to_string(shatter) + " shatter and " + std::to_string(chain) + " chain witnesses converted, " +
                std::to_string(failed) + " failures"};
}

Outcome half_graph_profile() {
    bool ok = true;
    std::ostringstream s;
    for (std::size_t n = 3; n <= 8; ++n) {
        const EvalTable t = half_graph(n);
        const std::size_t lad = max_ladder(t, kUnit).length;
        const std::size_t chain = strict_chain(t, Epsilon(1.0)).m;
        const std::size_t dim = shattering_dimension(t, kUnit).dim;
        ok = ok && lad == n && chain == n && dim == 1;
        // Oracle agreement; the exhaustive ladder search is skipped at n = 8.
        if (n <= 7) ok = ok && oracle::max_ladder(t, 0.0, 1.0) == n;
        ok = ok && oracle::strict_chain(t, 1.0) == n && oracle::shattering_dimension(t, 0.0, 1.0) == 1;
        s << "n=" << n << ":" << lad << "/" << chain << "/" << dim << " ";
    }
    return {ok, s.str() + "(ladder/chain/dim)"};
}

Outcome talagrand_closed_form() {
    std::size_t checked = 0, failed = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        Rng rng(derive_seed(5, i));
        const std::size_t rows = 2 + rng.below(9);
        const EvalTable t = oracle::grid_table(rows, 1, derive_seed(6, i), 3);
        double low = 0, high = 0;
        for (std::size_t p = 0; p < rows; ++p) {
            low += t(p, 0) <= 0.0;
            high += t(p, 0) >= 1.0;
        }
        const auto rows_all = all_rows(t);
        for (std::size_t k = 1; k <= 3; ++k) {
            ++checked;
            if (dk_count(t, rows_all, k, kUnit, false, Sampling::exact()).count != std::pow(low * high, k)) ++failed;
        }
    }
    std::size_t mono = 0, mono_failed = 0;
    const auto monotone = [&](const EvalTable& t) {
        for (bool distinct : {false, true}) {
            const auto scan = almost_nip_scan(t, all_rows(t), kUnit, 3, distinct, Sampling::exact());
            for (std::size_t k = 1; k < scan.reports.size(); ++k) {
                ++mono;
                if (scan.reports[k].density > scan.reports[k - 1].density) ++mono_failed;
            }
        }
    };
    for (std::uint64_t i = 0; i < 100; ++i) monotone(oracle::grid_table(2 + i % 9, 1, derive_seed(6, i), 3));
    for (std::uint64_t i = 0; i < 200; ++i) monotone(oracle::grid_table(3 + i % 6, 1 + i % 5, derive_seed(8, i), 2 + i % 3));
    for (std::size_t n = 3; n <= 8; ++n) monotone(half_graph(n));
    for (std::size_t k = 1; k <= 3; ++k) monotone(full_pattern(k));
    return {failed == 0 && mono_failed == 0,
            std::to_string(checked - failed) + "/" + std::to_string(checked) + " closed-form counts, " +
                std::to_string(mono - mono_failed) + "/" + std::to_string(mono) + " monotone density steps"};
}

Outcome duality() {
    Tally tally;
    parallel_for(std::size_t{1} << 16, [&](std::size_t code) {
        const EvalTable t = oracle::binary_table(4, 4, code);
        const EvalTable tt = transpose(t);
        tally.check(transpose(tt) == t);
        const std::size_t dual = shattering_dimension(tt, kUnit).dim;
        for (std::size_t n = 1; n <= 4; ++n) {
            const auto f = shattered_tuple_fraction(t, all_rows(t), n, kUnit, false, Sampling::exact());
            tally.check((f.fraction > 0.0) == (dual >= n));
        }
    });
    std::vector<EvalTable> corpus = random_binary_5x5();
    for (std::size_t n = 1; n <= 8; ++n) corpus.push_back(half_graph(n));
    for (std::size_t k = 1; k <= 6; ++k) corpus.push_back(full_pattern(k));
    corpus.push_back(cantor_example(5, 8).table);
    for (std::uint64_t i = 0; i < 50; ++i) corpus.push_back(random_table(1 + i % 12, 1 + i % 7, ValueModel::uniform(3.0), i));
    for (const auto& t : corpus) tally.check(transpose(transpose(t)) == t);
    return {tally.failed == 0, std::to_string(tally.checked - tally.failed) + "/" + std::to_string(tally.checked) +
                                   " duality and involution checks"};
}

Outcome cantor_corpus() {
    const CantorExample ex = cantor_example(5, 8);
    const EvalTable& t = ex.table;
    bool ok = true;
    const auto psi = preorder_psi(t);
    for (std::size_t a = 0; a < t.cols(); ++a)
        for (std::size_t b = 0; b < t.cols(); ++b)
            if (a != b) ok = ok && psi(a, b) > 0.0;
    const std::size_t chain = strict_chain(t, Epsilon(1.0)).m;
    const std::size_t dim = shattering_dimension(t, kUnit).dim;
    ok = ok && chain == 1 && dim <= 2;
    // f_n(x) for n past the emitted columns is evaluated analytically; every
    // row must agree with the target from its settling index on.
    std::size_t latest = 0;
    for (std::size_t row = 0; row < t.rows(); ++row) {
        const bool target = ex.target[row] == 1.0;
        ok = ok && cantor_target(ex.numerators[row], ex.levels) == target;
        for (std::size_t n = 1; n <= t.cols(); ++n)
            ok = ok && (t(row, n - 1) == 1.0) == cantor_indicator(ex.numerators[row], ex.levels, n);
        std::size_t settle = 1;
        for (std::size_t n = 1; n <= ex.levels + 1; ++n)
            if (cantor_indicator(ex.numerators[row], ex.levels, n) != target) settle = n + 1;
        for (std::size_t n = settle; n <= 3 * ex.levels; ++n)
            ok = ok && cantor_indicator(ex.numerators[row], ex.levels, n) == target;
        latest = std::max(latest, settle);
    }
    return {ok, "pairwise incomparable, chain " + std::to_string(chain) + ", dim " + std::to_string(dim) +
                    ", all rows settle by n=" + std::to_string(latest)};
}

Outcome mazur_solver() {
    std::size_t grid_ok = 0, baseline_ok = 0, member_ok = 0;
    const std::size_t instances = 50;
    const double tol = 1e-6;
    for (std::uint64_t i = 0; i < instances; ++i) {
        Rng rng(derive_seed(31, i));
        const std::size_t m = 1 + i % 3;
        const std::size_t rows = 2 + rng.below(6);
        const EvalTable t = random_table(rows, m, ValueModel::uniform(1.0), derive_seed(32, i));
        std::vector<double> target(rows);
        for (auto& v : target) v = -1.0 + 2.0 * rng.uniform01();
        std::vector<std::size_t> cols(m);
        for (std::size_t j = 0; j < m; ++j) cols[j] = j;
        const auto a = mazur_approximate(t, cols, target, tol);
        if (std::abs(a.achieved - oracle::simplex_grid_min(t, cols, target)) <= 1e-3 + tol) ++grid_ok;
        const std::vector<double> uniform(m, 1.0 / static_cast<double>(m));
        if (a.achieved <= oracle::sup_distance(t, cols, uniform, target)) ++baseline_ok;
        const std::size_t pick = rng.below(m);
        const auto member = mazur_approximate(t, cols, t.column(pick), tol);
        if (member.achieved == 0.0) ++member_ok;
    }
    const bool ok = grid_ok == instances && baseline_ok == instances && member_ok == instances;
    return {ok, "grid " + std::to_string(grid_ok) + "/50, baseline " + std::to_string(baseline_ok) + "/50, exact member " +
                    std::to_string(member_ok) + "/50"};
}

std::string cli_output(const std::vector<std::string>& args, int& code) {
    std::ostringstream out, err;
    code = run_cli(args, out, err);
    return out.str();
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "dl_acceptance";
    std::filesystem::create_directories(dir);
    bool ok = true;
    std::vector<std::string> runs;
    for (const char* threads : {"1", "4"}) {
        ::setenv("DL_THREADS", threads, 1);
        const std::string table = (dir / "table.json").string();
        const std::string report = (dir / "report.json").string();
        std::filesystem::remove(table);
        std::filesystem::remove(report);
        int code = 0;
        std::string all = cli_output({"generate", "--kind", "random_table", "--rows", "10", "--cols", "8", "--seed", "42",
                                      "--out", table},
                                     code);
        ok = ok && code == kExitOk;
        all += testutil::read_file(table);
        cli_output({"analyze", "--input", table, "--seed", "42", "--out", report}, code);
        ok = ok && code == kExitOk;
        all += testutil::read_file(report);
        all += cli_output({"analyze", "--input", table, "--validate-report", report}, code);
        ok = ok && code == kExitOk;
        runs.push_back(all);
    }
    ::unsetenv("DL_THREADS");
    ok = ok && runs[0] == runs[1];

    GeneratorConfig g;
    g.kind = GeneratorConfig::Kind::RandomTable;
    g.rows = 5;
    g.cols = 5;
    g.model = ValueModel::bernoulli(0.5);
    const ScanSummary scan = dichotomy_scan(g, 100, 7, ClassifyParams{});
    const std::string text = to_json(scan).dump(2) + "\n";
    const bool frozen = testutil::matches_golden("scan_uniform_5x5_seed7.json", text);
    ok = ok && frozen;
    return {ok, std::string("round trip ") + (runs[0] == runs[1] ? "byte-identical" : "DIFFERS") + ", scan summary " +
                    (frozen ? "matches" : "does not match") + " the frozen file (long ladder " +
                    std::to_string(scan.long_ladder) + ", exceptions " + std::to_string(scan.exception_count) + ")"};
}

}  // namespace

int main() {
    int failures = 0;
    const auto report = [&](int id, const std::function<Outcome()>& fn) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d: %s  %s  [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    };

    report(1, oracle_equivalence);
    SoundnessData corpus;
    report(2, [&] {
        corpus = soundness_corpus();
        return witness_soundness(corpus);
    });
    report(3, [&] { return converter_correctness(corpus); });
    report(4, half_graph_profile);
    report(5, talagrand_closed_form);
    report(6, duality);
    report(7, cantor_corpus);
    report(8, mazur_solver);
    report(9, determinism);
    return failures == 0 ? 0 : 1;
}
