#pragma once

// Subcommand implementations behind the `psal` binary. Each returns the
// process exit code; library errors propagate as psal::Error and are mapped
// by exit_code_for().

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psal/basis.hpp"
#include "psal/error.hpp"
#include "psal/io.hpp"
#include "psal/salience.hpp"

namespace psal::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailure = 1, kUsageError = 2, kDataError = 3 };

int exit_code_for(ErrorCode code) noexcept;

/// "3,1" -> (3,1). Order in the string does not matter.
SubsetKey parse_subset(const std::string& text);

struct WarningBands {
    double amber = 0.5;
    double red = 0.8;

    std::string classify(double value) const;
};

struct TabulateOptions {
    std::filesystem::path schema;
    std::filesystem::path input;
    std::optional<std::filesystem::path> out;
};

struct ScanOptions {
    std::filesystem::path table;
    int k = 2;
    std::optional<std::filesystem::path> out;
    WarningBands bands;
    int workers = 1;
};

struct AnalyzeOptions {
    std::filesystem::path table;
    std::string subset;
    std::optional<std::filesystem::path> out;
};

struct DepersonalizeOptions {
    std::filesystem::path table;
    std::optional<int> max_order;
    std::vector<std::string> zero;
    bool renormalize = false;
    bool round_counts = false;
    std::filesystem::path out;
    int workers = 1;
};

struct VerifyCommandOptions {
    int n = 4;
    int m = 2;
    std::uint64_t seed = 1;
    int trials = 20;
    int workers = 1;
    bool perturb = false;
    std::optional<std::filesystem::path> out;
};

io::Json scan_report_json(const ContingencyTable& table, const SalienceReport& report, const WarningBands& bands);
io::Json analyze_report_json(const ContingencyTable& table, const SubsetKey& subset);

/// Audit file written next to a released table: "x.json" -> "x.audit.json".
std::filesystem::path audit_path_for(const std::filesystem::path& released);

int cmd_tabulate(const TabulateOptions& options, std::ostream& out);
int cmd_scan(const ScanOptions& options, std::ostream& out);
int cmd_analyze(const AnalyzeOptions& options, std::ostream& out);
int cmd_depersonalize(const DepersonalizeOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyCommandOptions& options, std::ostream& out);

}  // namespace psal::cli
