#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace psal::cli;

int main(int argc, char** argv) {
    CLI::App app{"Probabilistic salience scanner and de-personalisation tool for contingency tables"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "psal 0.1.0");

    TabulateOptions tab;
    auto* tabulate = app.add_subcommand("tabulate", "Count CSV records into a zero-adjusted table");
    tabulate->add_option("--schema", tab.schema, "Schema JSON")->required()->check(CLI::ExistingFile);
    tabulate->add_option("--input", tab.input, "CSV records, header row first")->required();
    tabulate->add_option("--out", tab.out, "Output table JSON (stdout if omitted)");

    ScanOptions sc;
    auto* scan = app.add_subcommand("scan", "Rank all k-attribute subsets by salience");
    scan->add_option("--table", sc.table, "Table JSON")->required();
    scan->add_option("--k", sc.k, "Subset size")->capture_default_str();
    scan->add_option("--threshold", sc.bands.red, "Red warning cutoff")->capture_default_str();
    scan->add_option("--amber", sc.bands.amber, "Amber warning cutoff")->capture_default_str();
    scan->add_option("--workers", sc.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    scan->add_option("--out", sc.out, "Report JSON (stdout if omitted)");

    AnalyzeOptions an;
    auto* analyze = app.add_subcommand("analyze", "Salience histogram of one subset over its conditioning cells");
    analyze->add_option("--table", an.table, "Table JSON")->required();
    analyze->add_option("--subset", an.subset, "Comma separated attribute indices, e.g. 3,1")->required();
    analyze->add_option("--out", an.out, "Report JSON (stdout if omitted)");

    DepersonalizeOptions dp;
    auto* depers = app.add_subcommand("depersonalize", "Release a table with interactions removed");
    depers->add_option("--table", dp.table, "Table JSON")->required();
    auto* max_order = depers->add_option("--max-order", dp.max_order, "Keep interactions up to this order");
    auto* zero = depers->add_option("--zero", dp.zero, "Subset to remove, e.g. 2,1 (repeatable)");
    max_order->excludes(zero);
    depers->add_flag("--renormalize", dp.renormalize, "Rescale the release to the original total");
    depers->add_flag("--round", dp.round_counts, "Round released counts to integers");
    depers->add_option("--workers", dp.workers, "Worker threads")->check(CLI::PositiveNumber);
    depers->add_option("--out", dp.out, "Released table JSON; the audit goes next to it")->required();

    VerifyCommandOptions vf;
    auto* verify = app.add_subcommand("verify", "Run the numerical self-check suites");
    verify->add_option("--n", vf.n, "Number of attributes")->capture_default_str();
    verify->add_option("--m", vf.m, "Levels per attribute")->capture_default_str();
    verify->add_option("--seed", vf.seed, "RNG seed")->capture_default_str();
    verify->add_option("--trials", vf.trials, "Random tables per suite")->capture_default_str();
    verify->add_option("--workers", vf.workers, "Worker threads")->check(CLI::PositiveNumber);
    verify->add_flag("--perturb", vf.perturb, "Corrupt one side of the projection identity (must fail)");
    verify->add_option("--out", vf.out, "Optional JSON summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*tabulate) return cmd_tabulate(tab, std::cout);
        if (*scan) return cmd_scan(sc, std::cout);
        if (*analyze) return cmd_analyze(an, std::cout);
        if (*depers) return cmd_depersonalize(dp, std::cout, std::cerr);
        if (*verify) return cmd_verify(vf, std::cout);
    } catch (const psal::Error& e) {
        std::cerr << "error (" << psal::to_string(e.code()) << "): " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kUsageError;
}
