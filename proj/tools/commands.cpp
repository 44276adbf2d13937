#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "psal/depersonalize.hpp"
#include "psal/marginal.hpp"
#include "psal/verify.hpp"

namespace psal::cli {

namespace fs = std::filesystem;
using io::Json;

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument:
        case ErrorCode::size_guard:
            return kUsageError;
        default:
            return kDataError;
    }
}

SubsetKey parse_subset(const std::string& text) {
    std::vector<int> members;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            members.push_back(v);
        } catch (const std::exception&) {
            fail(ErrorCode::invalid_argument, "cannot parse subset '" + text + "'");
        }
    }
    if (members.empty()) fail(ErrorCode::invalid_argument, "empty subset '" + text + "'");
    return SubsetKey::from_unordered(std::move(members));
}

std::string WarningBands::classify(double value) const {
    if (value >= red) return "red";
    if (value >= amber) return "amber";
    return "green";
}

namespace {

void emit(const Json& j, const std::optional<fs::path>& path, std::ostream& out) {
    if (path) {
        io::write_json_atomic(*path, j);
    } else {
        out << j.dump(2) << '\n';
    }
}

Json names_of(const SubsetKey& subset, const AttributeSchema& schema) {
    Json names = Json::array();
    for (int m : subset.members()) names.push_back(schema.attribute(m).name);
    return names;
}

Json level_labels(const SubsetKey& attrs, std::span<const int> levels, const AttributeSchema& schema) {
    Json labels = Json::array();
    for (std::size_t p = 0; p < levels.size(); ++p) {
        labels.push_back(schema.attribute(attrs.members()[p]).levels[static_cast<std::size_t>(levels[p])]);
    }
    return labels;
}

std::string subset_label(const SubsetKey& subset, const AttributeSchema& schema) {
    std::string s;
    for (int m : subset.members()) {
        if (!s.empty()) s += " x ";
        s += schema.attribute(m).name;
    }
    return s;
}

void check_k(int k, int n) {
    if (k < 1 || k >= n) {
        fail(ErrorCode::invalid_argument, "--k must lie in [1, " + std::to_string(n - 1) + "], got " + std::to_string(k));
    }
}

}  // namespace

Json scan_report_json(const ContingencyTable& table, const SalienceReport& report, const WarningBands& bands) {
    const auto& schema = table.schema();
    Json entries = Json::array();
    for (const auto& e : report.ranked()) {
        entries.push_back({{"rank", e.rank},
                           {"subset", e.subset.members()},
                           {"names", names_of(e.subset, schema)},
                           {"salience", e.value.psi},
                           {"chi_magnitude", e.value.chi_magnitude},
                           {"log_norm", e.value.log_norm},
                           {"warning", bands.classify(e.value.psi)}});
    }
    Json labels = Json::array();
    Json values = Json::array();
    for (const auto& e : report.entries) {
        labels.push_back(subset_label(e.subset, schema));
        values.push_back(e.value.psi);
    }
    return {{"command", "scan"},
            {"k", report.k},
            {"attributes", io::to_json(schema).at("attributes")},
            {"n_total", table.n_total()},
            {"bands",
             {{"amber", bands.amber}, {"red", bands.red}, {"note", "configurable defaults, not derived from the method"}}},
            {"entries", entries},
            {"plot", {{"kind", "bar"}, {"order", "enumeration"}, {"labels", labels}, {"values", values}}}};
}

Json analyze_report_json(const ContingencyTable& table, const SubsetKey& subset) {
    const auto& schema = table.schema();
    const TableShape shape = table.shape();
    subset.check_within(shape.attributes);
    if (subset.order() >= shape.attributes) {
        fail(ErrorCode::invalid_argument, "--subset must leave at least one conditioning attribute");
    }
    const SubsetKey rest = complement(subset, shape.attributes);
    const GeoMeanTable gm = geometric_mean_subtable(table, subset);
    const double overall = salience_function(table, subset).psi;
    const auto histogram = salience_histogram(table, subset);

    std::size_t closest = 0;
    std::size_t peak = 0;
    for (std::size_t i = 1; i < histogram.size(); ++i) {
        if (std::abs(histogram[i].psi - overall) < std::abs(histogram[closest].psi - overall)) closest = i;
        if (histogram[i].psi > histogram[peak].psi) peak = i;
    }

    Json hist = Json::array();
    Json values = Json::array();
    for (const auto& h : histogram) {
        hist.push_back({{"conditioning", h.conditioning},
                        {"labels", level_labels(rest, h.conditioning, schema)},
                        {"psi", h.psi}});
        values.push_back(h.psi);
    }
    auto describe = [&](std::size_t i) {
        const auto& h = histogram[i];
        const auto sub = conditional_subtable(table, subset, h.conditioning);
        return Json{{"index", i},
                    {"conditioning", h.conditioning},
                    {"labels", level_labels(rest, h.conditioning, schema)},
                    {"psi", h.psi},
                    {"counts", sub.counts}};
    };
    return {{"command", "analyze"},
            {"subset", subset.members()},
            {"names", names_of(subset, schema)},
            {"salience", overall},
            {"geo_mean", {{"counts", gm.counts}, {"log_values", gm.log_values}}},
            {"conditioning_attributes", rest.members()},
            {"conditioning_names", names_of(rest, schema)},
            {"histogram", hist},
            {"closest_to_geo_mean", describe(closest)},
            {"max_psi", describe(peak)},
            {"plot", {{"kind", "histogram"}, {"values", values}}}};
}

fs::path audit_path_for(const fs::path& released) {
    fs::path p = released;
    p.replace_extension();
    p += ".audit.json";
    return p;
}

int cmd_tabulate(const TabulateOptions& options, std::ostream& out) {
    const AttributeSchema schema = io::read_schema(options.schema);
    const ContingencyTable raw = io::tabulate_csv(options.input, schema);
    emit(io::to_json(zero_adjust(raw)), options.out, out);
    return kSuccess;
}

int cmd_scan(const ScanOptions& options, std::ostream& out) {
    const ContingencyTable table = io::read_table(options.table);
    check_k(options.k, table.shape().attributes);
    if (options.bands.amber > options.bands.red) fail(ErrorCode::invalid_argument, "amber band exceeds red threshold");
    const SalienceReport report = scan(table, options.k, options.workers);
    emit(scan_report_json(table, report, options.bands), options.out, out);
    return kSuccess;
}

int cmd_analyze(const AnalyzeOptions& options, std::ostream& out) {
    const ContingencyTable table = io::read_table(options.table);
    emit(analyze_report_json(table, parse_subset(options.subset)), options.out, out);
    return kSuccess;
}

int cmd_depersonalize(const DepersonalizeOptions& options, std::ostream& out, std::ostream& err) {
    if (options.max_order.has_value() == !options.zero.empty()) {
        fail(ErrorCode::invalid_argument, "give exactly one of --max-order or --zero");
    }
    const ContingencyTable table = io::read_table(options.table);
    LimitSpec spec;
    if (options.max_order) {
        spec = LimitSpec::order_limit(*options.max_order);
    } else {
        std::vector<SubsetKey> zero;
        for (const auto& z : options.zero) zero.push_back(parse_subset(z));
        spec = LimitSpec::selective(std::move(zero));
    }
    spec.renormalize = options.renormalize;
    spec.round_counts = options.round_counts;
    const Release release = depersonalize(table, spec, options.workers);
    const auto& a = release.audit;
    const auto& schema = table.schema();

    Json requested = Json::array();
    for (const auto& s : a.requested) requested.push_back(s.members());
    Json zeroed = Json::array();
    Json added = Json::array();
    for (const auto& s : a.zeroed) {
        zeroed.push_back(s.members());
        const bool asked = std::find(a.requested.begin(), a.requested.end(), s) != a.requested.end();
        if (spec.mode == LimitMode::selective && !asked) added.push_back(s.members());
    }
    Json entries = Json::array();
    for (const auto& e : a.entries) {
        entries.push_back({{"subset", e.subset.members()},
                           {"names", names_of(e.subset, schema)},
                           {"before", e.before},
                           {"after", e.after},
                           {"delta", e.delta()},
                           {"contains_zeroed", e.contains_zeroed},
                           {"contract", e.contract == AuditContract::unchanged ? "unchanged" : "non_increasing"},
                           {"violation", e.violation}});
    }
    Json audit_json{{"command", "depersonalize"},
                    {"mode", spec.mode == LimitMode::order_limit ? "order_limit" : "selective"},
                    {"max_order", spec.mode == LimitMode::order_limit ? Json(spec.max_order) : Json(nullptr)},
                    {"requested", requested},
                    {"zeroed", zeroed},
                    {"closure_added", added},
                    {"renormalized", a.renormalized},
                    {"rounded", a.rounded},
                    {"salience_measured_before_rounding", a.rounded},
                    {"total_before", a.total_before},
                    {"total_after", a.total_after},
                    {"drift", a.drift()},
                    {"max_refit_norm", a.max_refit_norm},
                    {"violations", a.violations()},
                    {"entries", entries}};

    io::write_table(options.out, release.table);
    const fs::path audit_path = audit_path_for(options.out);
    io::write_json_atomic(audit_path, audit_json);
    out << "released table: " << options.out.string() << "\naudit: " << audit_path.string() << '\n';
    if (a.violations() > 0) {
        err << "audit found " << a.violations() << " subset(s) breaking their salience contract\n";
        return kVerificationFailure;
    }
    return kSuccess;
}

int cmd_verify(const VerifyCommandOptions& options, std::ostream& out) {
    VerifyOptions v;
    v.attributes = options.n;
    v.levels = options.m;
    v.seed = options.seed;
    v.trials = options.trials;
    v.workers = options.workers;
    v.perturb = options.perturb;
    const VerifyResult result = run_verification(v);

    out << "verify n=" << options.n << " m=" << options.m << " seed=" << options.seed << " trials=" << options.trials
        << " basis_columns=" << result.basis_columns << '\n';
    Json suites = Json::array();
    for (const auto& s : result.suites) {
        out << std::left << std::setw(22) << s.name << std::right << std::setw(8) << s.checks << " checks  "
            << std::setw(6) << s.failures << " failed  max_err " << std::scientific << std::setprecision(2)
            << s.max_error << std::defaultfloat << "  " << (s.passed() ? "PASS" : "FAIL");
        if (!s.detail.empty()) out << "  (" << s.detail << ")";
        out << '\n';
        suites.push_back({{"name", s.name},
                          {"checks", s.checks},
                          {"failures", s.failures},
                          {"max_error", s.max_error},
                          {"detail", s.detail},
                          {"passed", s.passed()}});
    }
    out << (result.passed() ? "all suites passed" : "verification FAILED") << '\n';
    if (options.out) {
        io::write_json_atomic(*options.out, Json{{"command", "verify"},
                                                  {"n", options.n},
                                                  {"m", options.m},
                                                  {"seed", options.seed},
                                                  {"trials", options.trials},
                                                  {"basis_columns", result.basis_columns},
                                                  {"suites", suites},
                                                  {"passed", result.passed()}});
    }
    return result.passed() ? kSuccess : kVerificationFailure;
}

}  // namespace psal::cli
