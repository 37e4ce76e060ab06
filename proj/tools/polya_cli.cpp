// polya: command-line front end for the Polya urn equalization library.
//
// Data goes to stdout (or --output), diagnostics and notes to stderr.
// Exit codes: 0 success, 1 failed check or internal error, 2 usage error,
// 3 resource limit exceeded.

#include "polya/output.hpp"
#include "polya/polya.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace polya;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

/// Direct-simulation reference values come from the DP only up to this
/// horizon; beyond it the DP is too slow for an interactive tool.
constexpr std::int64_t kReferenceHorizonLimit = 1000;

constexpr const char* kBudgetVariable = "POLYA_DP_MEMORY_BUDGET";

class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::int64_t b = 0;
    std::int64_t w = 0;
    std::int64_t target = 0;
    std::int64_t horizon = 200;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    std::uint64_t streams = 4;
    unsigned threads = 0;
    std::string form = "theorem";
    std::string method = "direct";
    std::string format = "csv";
    bool emit_pmf = false;
    std::string output;
    std::string b_range;
    std::string w_range;
    std::string methods = "exact";
    std::int64_t max_total = 120;
};

struct Report {
    std::string command;
    std::vector<OutputRecord> records;
    std::vector<std::string> notes;
    std::optional<std::vector<PmfRow>> pmf;
};

DpOptions dp_options_from_environment()
{
    DpOptions options;
    if (const char* text = std::getenv(kBudgetVariable); text != nullptr && *text != '\0') {
        std::size_t bytes = 0;
        const std::string_view view(text);
        const auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), bytes);
        if (ec != std::errc{} || ptr != view.data() + view.size() || bytes == 0)
            throw usage_error(std::string(kBudgetVariable) + " must be a positive byte count, got '" + text + "'");
        options.memory_budget_bytes = bytes;
    }
    return options;
}

void write_report(const Report& report, const Options& opt)
{
    std::ofstream file;
    if (!opt.output.empty()) {
        file.open(opt.output, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file '" + opt.output + "'");
    }
    std::ostream& out = opt.output.empty() ? std::cout : file;

    if (opt.format == "json") {
        auto doc = document_json(report.command, report.records, report.notes);
        if (report.pmf) doc["pmf"] = pmf_to_json(*report.pmf);
        out << doc.dump(2) << '\n';
        return;
    }
    for (const auto& note : report.notes) std::cerr << "note: " << note << '\n';
    if (report.pmf) {
        write_pmf_csv(out, *report.pmf);
        for (const auto& r : report.records)
            std::cerr << "note: cumulative P(tau <= " << r.horizon.value_or(0) << ") = " << r.rational.value_or("")
                      << " = " << r.value << '\n';
        return;
    }
    write_csv(out, report.records);
}

std::string fmt(double x) { return format_decimal(x); }

// ---------------------------------------------------------------------------
// Record builders shared by the single-config commands and sweep.

OutputRecord dp_record(std::int64_t b, std::int64_t w, const DPTable& table)
{
    OutputRecord r = exact_record(b, w, Method::dp, table.cumulative);
    r.target = table.target_diff;
    r.horizon = table.horizon;
    if (table.target_diff == 0) {
        const ExactProbability exact = equalization_probability(table.config);
        r.reference = exact.decimal();
        r.abs_error = format_decimal(Rational(table.cumulative.value() - exact.value()));
    }
    return r;
}

OutputRecord estimate_record(std::int64_t b, std::int64_t w, Method method, const EstimateWithCI& e,
                             const Options& opt)
{
    OutputRecord r;
    r.b = b;
    r.w = w;
    r.method = method;
    r.kind = "estimate";
    r.value = fmt(e.p_hat);
    r.samples = e.n_samples;
    r.seed = opt.seed;
    r.streams = opt.streams;
    r.std_err = fmt(e.std_err);
    r.ci95_lo = fmt(e.ci_lo);
    r.ci95_hi = fmt(e.ci_hi);
    return r;
}

void attach_reference(OutputRecord& r, const EstimateWithCI& e, const ExactProbability& reference)
{
    r.reference = reference.decimal();
    r.abs_error = fmt(e.p_hat - reference.to_double());
    if (e.std_err > 0.0) r.z_score = fmt((e.p_hat - reference.to_double()) / e.std_err);
}

OutputRecord approx_record(std::int64_t b, std::int64_t w, Method method, const ApproxResult& a)
{
    OutputRecord r;
    r.b = b;
    r.w = w;
    r.method = method;
    r.kind = std::string(to_string(a.kind));
    r.value = fmt(a.value);
    if (a.exact_ref) r.reference = a.exact_ref->decimal();
    if (a.abs_error) r.abs_error = fmt(*a.abs_error);
    if (a.rel_error) r.rel_error = fmt(*a.rel_error);
    return r;
}

std::optional<ExactProbability> feasible_dp_reference(const UrnConfig& config, const Options& opt,
                                                      const DpOptions& dp)
{
    if (opt.horizon > kReferenceHorizonLimit) return std::nullopt;
    if (estimate_dp_memory(config, opt.horizon) > static_cast<double>(dp.memory_budget_bytes)) return std::nullopt;
    return first_passage_dp(config, opt.target, opt.horizon, dp).cumulative;
}

OutputRecord direct_mc_record(const UrnConfig& config, const Options& opt, const DpOptions& dp,
                              std::vector<std::string>& notes)
{
    const EstimateWithCI e = estimate_equalization(config, opt.target, opt.horizon, opt.samples,
                                                   RngSeed{opt.seed, 0}, opt.streams, SimulationOptions{opt.threads});
    OutputRecord r = estimate_record(config.black(), config.white(), Method::mc, e, opt);
    r.target = opt.target;
    r.horizon = opt.horizon;
    if (const auto reference = feasible_dp_reference(config, opt, dp))
        attach_reference(r, e, *reference);
    else
        notes.push_back("no DP reference: horizon above " + std::to_string(kReferenceHorizonLimit) +
                        " or over the memory budget");
    if (e.degenerate) notes.push_back("degenerate interval: every sample agreed");
    return r;
}

OutputRecord definetti_record(const UrnConfig& config, const Options& opt, std::vector<std::string>& notes)
{
    const EstimateWithCI e =
        definetti_estimator(config, opt.samples, RngSeed{opt.seed, 0}, opt.streams, SimulationOptions{opt.threads});
    OutputRecord r = estimate_record(config.black(), config.white(), Method::definetti, e, opt);
    attach_reference(r, e, equalization_probability(config));
    if (e.degenerate) notes.push_back("degenerate interval: every sample agreed");
    return r;
}

// ---------------------------------------------------------------------------

Report cmd_exact(const Options& opt)
{
    Report report{"exact", {}, {}, {}};
    const UrnConfig config(opt.b, opt.w);
    if (config.black() == config.white()) {
        report.notes.push_back("b == w: the urn starts equal, so the probability is 1 by convention");
        report.records.push_back(exact_record(opt.b, opt.w, Method::exact, equalization_probability(config)));
        return report;
    }
    const UrnConfig oriented = config.black() > config.white() ? config : config.swapped();
    if (oriented != config)
        report.notes.push_back("b < w: colors swapped, value computed for (b, w) = (" +
                               std::to_string(oriented.black()) + ", " + std::to_string(oriented.white()) + ")");

    const bool all = opt.form == "all";
    if (all || opt.form == "theorem")
        report.records.push_back(exact_record(opt.b, opt.w, Method::exact, equalization_probability(oriented)));
    if (all || opt.form == "binomial")
        report.records.push_back(
            exact_record(opt.b, opt.w, Method::binomial, equalization_probability_binomial(oriented)));
    if (all || opt.form == "complement")
        report.records.push_back(
            exact_record(opt.b, opt.w, Method::complement, equalization_probability_complement(oriented)));
    if (all) {
        const auto& rs = report.records;
        if (rs[0].rational != rs[1].rational || rs[0].rational != rs[2].rational)
            throw std::runtime_error("triple identity violated for (" + std::to_string(opt.b) + ", " +
                                     std::to_string(opt.w) + ")");
        report.notes.push_back("triple identity holds: " + *rs[0].rational);
    }
    return report;
}

Report cmd_dp(const Options& opt)
{
    Report report{"dp", {}, {}, {}};
    const UrnConfig config(opt.b, opt.w);
    const DPTable table = first_passage_dp(config, opt.target, opt.horizon, dp_options_from_environment());
    report.records.push_back(dp_record(opt.b, opt.w, table));
    if (opt.target == 0 && config.black() != config.white())
        report.notes.push_back("truncation gap P(tau < inf) - P(tau <= " + std::to_string(opt.horizon) +
                               ") = " + format_decimal(Rational(equalization_probability(config).value() -
                                                                table.cumulative.value())));
    if (opt.emit_pmf) {
        std::vector<PmfRow> rows;
        rows.reserve(table.hit_pmf.size());
        for (std::size_t n = 0; n < table.hit_pmf.size(); ++n)
            rows.push_back({static_cast<std::int64_t>(n), table.hit_pmf[n]});
        report.pmf = std::move(rows);
    }
    return report;
}

Report cmd_simulate(const Options& opt)
{
    Report report{"simulate", {}, {}, {}};
    const UrnConfig config(opt.b, opt.w);
    if (opt.method == "definetti") {
        if (config.black() <= config.white()) throw usage_error("--method definetti requires b > w");
        report.records.push_back(definetti_record(config, opt, report.notes));
        return report;
    }
    report.records.push_back(direct_mc_record(config, opt, dp_options_from_environment(), report.notes));
    if (opt.target == 0 && config.black() != config.white())
        report.notes.push_back("direct simulation estimates P(tau <= horizon); the untruncated value is " +
                               equalization_probability(config).decimal() +
                               " (see --method definetti)");
    return report;
}

Report cmd_approx(const Options& opt)
{
    Report report{"approx", {}, {}, {}};
    const UrnConfig config(opt.b, opt.w);
    if (config.black() <= config.white()) throw usage_error("approx requires b > w");
    const ExactProbability exact = equalization_probability(config);
    report.records.push_back(
        approx_record(opt.b, opt.w, Method::normal, with_reference(normal_approximation(config), exact)));
    report.records.push_back(
        approx_record(opt.b, opt.w, Method::chernoff, with_reference(chernoff_bound(config), exact)));
    return report;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text, const char* flag)
{
    auto parse_int = [&](std::string_view s) {
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw usage_error(std::string(flag) + ": malformed range '" + text + "' (expected lo..hi)");
        return v;
    };
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const std::int64_t v = parse_int(text);
        return {v, v};
    }
    return {parse_int(std::string_view(text).substr(0, dots)), parse_int(std::string_view(text).substr(dots + 2))};
}

std::vector<Method> parse_methods(const std::string& text)
{
    std::vector<Method> methods;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto m = parse_method(item);
        if (!m) throw usage_error("--methods: unknown method '" + item + "'");
        methods.push_back(*m);
    }
    if (methods.empty()) throw usage_error("--methods: empty list");
    return methods;
}

Report cmd_sweep(const Options& opt)
{
    Report report{"sweep", {}, {}, {}};
    if (opt.b_range.empty() || opt.w_range.empty()) throw usage_error("sweep requires --b-range and --w-range");
    const auto [b_lo, b_hi] = parse_range(opt.b_range, "--b-range");
    const auto [w_lo, w_hi] = parse_range(opt.w_range, "--w-range");
    if (b_lo < 1 || w_lo < 1) throw usage_error("sweep: ranges must start at 1 or above");
    const std::vector<Method> methods = parse_methods(opt.methods);
    const DpOptions dp = dp_options_from_environment();

    std::int64_t skipped = 0;
    for (std::int64_t b = b_lo; b <= b_hi; ++b) {
        for (std::int64_t w = w_lo; w <= w_hi; ++w) {
            if (w >= b) {
                ++skipped;
                continue;
            }
            const UrnConfig config(b, w);
            for (Method m : methods) {
                switch (m) {
                case Method::exact:
                    report.records.push_back(exact_record(b, w, m, equalization_probability(config)));
                    break;
                case Method::binomial:
                    report.records.push_back(exact_record(b, w, m, equalization_probability_binomial(config)));
                    break;
                case Method::complement:
                    report.records.push_back(exact_record(b, w, m, equalization_probability_complement(config)));
                    break;
                case Method::dp:
                    report.records.push_back(dp_record(b, w, first_passage_dp(config, opt.target, opt.horizon, dp)));
                    break;
                case Method::mc:
                    report.records.push_back(direct_mc_record(config, opt, dp, report.notes));
                    break;
                case Method::definetti:
                    report.records.push_back(definetti_record(config, opt, report.notes));
                    break;
                case Method::normal:
                    report.records.push_back(approx_record(
                        b, w, m, with_reference(normal_approximation(config), equalization_probability(config))));
                    break;
                case Method::chernoff:
                    report.records.push_back(approx_record(
                        b, w, m, with_reference(chernoff_bound(config), equalization_probability(config))));
                    break;
                }
            }
        }
    }
    if (report.records.empty()) throw usage_error("sweep: no (b, w) pair in range satisfies w < b");
    if (skipped > 0) report.notes.push_back("skipped " + std::to_string(skipped) + " (b, w) pairs with w >= b");
    return report;
}

Report cmd_identity_check(const Options& opt, bool& failed)
{
    Report report{"identity-check", {}, {}, {}};
    std::int64_t pairs = 0;
    std::int64_t failures = 0;
    for (std::int64_t b = 2; b < opt.max_total; ++b) {
        for (std::int64_t w = 1; w < b && b + w <= opt.max_total; ++w) {
            const UrnConfig config(b, w);
            const auto theorem = equalization_probability(config);
            const auto binomial = equalization_probability_binomial(config);
            const auto complement = equalization_probability_complement(config);
            ++pairs;
            if (theorem == binomial && theorem == complement) continue;
            ++failures;
            report.records.push_back(exact_record(b, w, Method::exact, theorem));
            report.records.push_back(exact_record(b, w, Method::binomial, binomial));
            report.records.push_back(exact_record(b, w, Method::complement, complement));
        }
    }
    report.notes.push_back("checked " + std::to_string(pairs) + " pairs with 1 <= w < b, b + w <= " +
                           std::to_string(opt.max_total) + "; " + std::to_string(failures) + " failures");
    failed = failures > 0;
    return report;
}

void add_config_flags(CLI::App* cmd, Options& opt)
{
    cmd->add_option("--b", opt.b, "Initial black balls")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--w", opt.w, "Initial white balls")->required()->check(CLI::PositiveNumber);
}

void add_output_flags(CLI::App* cmd, Options& opt)
{
    cmd->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--output", opt.output, "Write data to this file instead of stdout");
}

void add_walk_flags(CLI::App* cmd, Options& opt)
{
    cmd->add_option("--target", opt.target, "Target level m for S_n = B_n - W_n")->capture_default_str();
    cmd->add_option("--horizon", opt.horizon, "Step horizon N")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

void add_sampling_flags(CLI::App* cmd, Options& opt)
{
    cmd->add_option("--samples", opt.samples, "Monte Carlo samples")
        ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()))
        ->capture_default_str();
    cmd->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--streams", opt.streams, "Number of RNG streams (sample blocks)")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 20))
        ->capture_default_str();
    cmd->add_option("--threads", opt.threads, "Worker threads, 0 = all cores; does not change results")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Equalization probability of the Polya urn: exact, DP, Monte Carlo and asymptotic methods"};
    app.require_subcommand(1);
    Options opt;

    auto* exact = app.add_subcommand("exact", "Exact closed-form probability");
    add_config_flags(exact, opt);
    exact->add_option("--form", opt.form, "Closed form to evaluate")
        ->check(CLI::IsMember({"theorem", "binomial", "complement", "all"}))
        ->capture_default_str();
    add_output_flags(exact, opt);

    auto* dp = app.add_subcommand("dp", "Exact first-passage probabilities up to a horizon");
    add_config_flags(dp, opt);
    add_walk_flags(dp, opt);
    dp->add_flag("--emit-pmf", opt.emit_pmf, "Emit the table of P(tau = n)");
    add_output_flags(dp, opt);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate");
    add_config_flags(simulate, opt);
    add_walk_flags(simulate, opt);
    add_sampling_flags(simulate, opt);
    simulate->add_option("--method", opt.method, "Estimator")
        ->check(CLI::IsMember({"direct", "definetti"}))
        ->capture_default_str();
    add_output_flags(simulate, opt);

    auto* approx = app.add_subcommand("approx", "Normal approximation and Chernoff bound");
    add_config_flags(approx, opt);
    add_output_flags(approx, opt);

    auto* sweep = app.add_subcommand("sweep", "Evaluate methods over a (b, w) grid");
    sweep->add_option("--b-range", opt.b_range, "Black counts, lo..hi")->required();
    sweep->add_option("--w-range", opt.w_range, "White counts, lo..hi")->required();
    sweep->add_option("--methods", opt.methods,
                      "Comma-separated: exact,binomial,complement,dp,mc,definetti,normal,chernoff")
        ->capture_default_str();
    add_walk_flags(sweep, opt);
    add_sampling_flags(sweep, opt);
    add_output_flags(sweep, opt);

    auto* identity = app.add_subcommand("identity-check", "Check the three closed forms agree over a grid");
    identity->add_option("--max-total", opt.max_total, "Largest b + w checked")
        ->check(CLI::Range(std::int64_t{3}, std::int64_t{10000}))
        ->capture_default_str();
    add_output_flags(identity, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        Report report;
        bool failed = false;
        if (exact->parsed())
            report = cmd_exact(opt);
        else if (dp->parsed())
            report = cmd_dp(opt);
        else if (simulate->parsed())
            report = cmd_simulate(opt);
        else if (approx->parsed())
            report = cmd_approx(opt);
        else if (sweep->parsed())
            report = cmd_sweep(opt);
        else
            report = cmd_identity_check(opt, failed);
        write_report(report, opt);
        return failed ? kExitFailure : 0;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
