// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Usage: polya_acceptance <path-to-polya-cli>

#include "cli_runner.hpp"
#include "oracles.hpp"
#include "polya/polya.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace polya;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (passed) detail = why;
        passed = false;
    }
};

struct Criterion {
    int id;
    std::string name;
    double time_limit_seconds; ///< 0 = no limit
    std::function<Outcome()> run;
};

std::string pair_name(std::int64_t b, std::int64_t w)
{
    return "(" + std::to_string(b) + "," + std::to_string(w) + ")";
}

std::vector<UrnConfig> configs_up_to(std::int64_t max_total)
{
    std::vector<UrnConfig> out;
    for (std::int64_t b = 1; b < max_total; ++b)
        for (std::int64_t w = 1; b + w <= max_total; ++w) out.emplace_back(b, w);
    return out;
}

Outcome triple_identity()
{
    Outcome o;
    int pairs = 0;
    for (std::int64_t b = 2; b < 120; ++b) {
        for (std::int64_t w = 1; w < b && b + w <= 120; ++w) {
            const UrnConfig c(b, w);
            const auto theorem = equalization_probability(c);
            if (theorem != equalization_probability_binomial(c) || theorem != equalization_probability_complement(c))
                o.fail("forms disagree at " + pair_name(b, w));
            ++pairs;
        }
    }
    if (pairs != 3540) o.fail("expected 3540 pairs, visited " + std::to_string(pairs));
    o.detail = o.passed ? std::to_string(pairs) + " pairs agree" : o.detail;
    return o;
}

Outcome small_exact_values()
{
    Outcome o;
    const std::vector<std::tuple<std::int64_t, std::int64_t, Rational>> cases{
        {2, 1, Rational(1, 2)}, {3, 1, Rational(1, 4)}, {3, 2, Rational(5, 8)},
        {4, 2, Rational(3, 8)}, {5, 3, Rational(29, 64)}};
    for (const auto& [b, w, expected] : cases) {
        const UrnConfig c(b, w);
        const Rational value = equalization_probability(c).value();
        if (value != expected) o.fail("library value at " + pair_name(b, w) + " is " + fraction_string(value));
        // Oracle 1: twice the symbolic integral of the density up to 1/2.
        if (2 * oracle::integrated_beta_density(b, w, Rational(1, 2)) != expected)
            o.fail("symbolic integration disagrees at " + pair_name(b, w));
        // Oracle 2: enumeration pins the DP, and the DP climbs toward the value from below.
        if (first_passage_dp(c, 0, 14).cumulative.value() != first_passage_by_enumeration(c, 0, 14))
            o.fail("DP and enumeration disagree at " + pair_name(b, w));
        Rational previous_gap = expected;
        for (std::int64_t n : {50, 100, 200, 400}) {
            const Rational gap = expected - first_passage_dp(c, 0, n).cumulative.value();
            if (gap <= 0 || gap >= previous_gap) o.fail("DP does not approach from below at " + pair_name(b, w));
            previous_gap = gap;
        }
    }
    if (o.passed) o.detail = "5 values match both oracles";
    return o;
}

Outcome dp_vs_enumeration()
{
    Outcome o;
    int checks = 0;
    for (const UrnConfig& c : configs_up_to(6)) {
        const DPTable table = first_passage_dp(c, 0, 14);
        for (std::int64_t n = 0; n <= 14; ++n) {
            if (table.cumulative_at(n).value() != first_passage_by_enumeration(c, 0, n))
                o.fail("mismatch at " + pair_name(c.black(), c.white()) + " n=" + std::to_string(n));
            ++checks;
        }
    }
    if (o.passed) o.detail = std::to_string(checks) + " (config, horizon) pairs agree exactly";
    return o;
}

Outcome exchangeability()
{
    Outcome o;
    int sequences = 0;
    for (const UrnConfig& c : configs_up_to(6)) {
        for (std::int64_t n = 0; n <= 14; ++n) {
            std::map<std::int64_t, Rational> by_count;
            Rational total = 0;
            for (const auto& s : enumerate_sequences(c, n)) {
                const auto [it, inserted] = by_count.emplace(s.draws.black_count(), s.probability);
                if (!inserted && it->second != s.probability)
                    o.fail("order dependence at " + pair_name(c.black(), c.white()) + " n=" + std::to_string(n));
                total += s.probability;
                ++sequences;
            }
            if (total != 1) o.fail("mass != 1 at " + pair_name(c.black(), c.white()) + " n=" + std::to_string(n));
        }
    }
    if (o.passed) o.detail = std::to_string(sequences) + " sequences checked";
    return o;
}

Outcome martingale()
{
    Outcome o;
    for (const UrnConfig& c : configs_up_to(8)) {
        for (std::int64_t n = 0; n <= 50; ++n) {
            const auto pmf = marginal_black_distribution(c, n);
            Rational mean = 0;
            for (std::int64_t k = 0; k <= n; ++k)
                mean += pmf[static_cast<std::size_t>(k)].value() * Rational(c.black() + k, c.total() + n);
            if (mean != Rational(c.black(), c.total()))
                o.fail("E[B_n/N_n] drifts at " + pair_name(c.black(), c.white()) + " n=" + std::to_string(n));
        }
    }
    if (o.passed) o.detail = "exact for all n <= 50, b + w <= 8";
    return o;
}

Outcome convergence_from_below()
{
    Outcome o;
    for (auto [b, w] : {std::pair{2, 1}, {3, 2}, {5, 3}}) {
        const UrnConfig c(b, w);
        const Rational exact = equalization_probability(c).value();
        const DPTable table = first_passage_dp(c, 0, 200);
        Rational cumulative = 0;
        Rational previous = 0;
        for (std::int64_t n = 0; n <= 200; ++n) {
            cumulative += table.hit_pmf[static_cast<std::size_t>(n)].value();
            if (cumulative > exact) o.fail("DP exceeds exact at " + pair_name(b, w));
            if (cumulative < previous) o.fail("DP not monotone at " + pair_name(b, w));
            previous = cumulative;
        }
        for (std::int64_t n : {25, 50, 100}) {
            // Separate recomputation at both horizons.
            const Rational at_n = first_passage_dp(c, 0, n).cumulative.value();
            const Rational at_2n = first_passage_dp(c, 0, 2 * n).cumulative.value();
            if (at_n != table.cumulative_at(n).value()) o.fail("recomputation mismatch at " + pair_name(b, w));
            if (!(exact - at_2n < exact - at_n))
                o.fail("gap does not shrink from " + std::to_string(n) + " at " + pair_name(b, w));
        }
    }
    if (o.passed) o.detail = "bounded, monotone, gap shrinking at N = 25, 50, 100";
    return o;
}

Outcome mc_agreement()
{
    Outcome o;
    std::string detail;
    for (auto [b, w] : {std::pair{2, 1}, {3, 2}, {4, 1}, {5, 3}}) {
        const UrnConfig c(b, w);
        const double reference = first_passage_dp(c, 0, 200).cumulative.to_double();
        const auto e = estimate_equalization(c, 0, 200, 1000000, RngSeed{20101, 0}, 8);
        const double z = (e.p_hat - reference) / e.std_err;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s z=%+.2f ", pair_name(b, w).c_str(), z);
        detail += buf;
        if (!(std::fabs(z) <= 4.0)) o.fail("|z| > 4 at " + pair_name(b, w));
    }
    if (o.passed) o.detail = detail;
    return o;
}

Outcome definetti_agreement()
{
    Outcome o;
    std::string detail;
    for (auto [b, w] : {std::pair{2, 1}, {3, 2}, {4, 1}, {5, 3}}) {
        const UrnConfig c(b, w);
        const double exact = equalization_probability(c).to_double();
        const auto e = definetti_estimator(c, 1000000, RngSeed{20102, 0}, 8);
        const double z = (e.p_hat - exact) / e.std_err;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s z=%+.2f ", pair_name(b, w).c_str(), z);
        detail += buf;
        if (!(std::fabs(z) <= 4.0)) o.fail("|z| > 4 at " + pair_name(b, w));
    }
    if (o.passed) o.detail = detail;
    return o;
}

Outcome chernoff_validity()
{
    Outcome o;
    for (std::int64_t b = 2; b <= 40; ++b) {
        for (std::int64_t w = 1; w < b; ++w) {
            const UrnConfig c(b, w);
            if (to_rational(chernoff_bound(c).value) < equalization_probability(c).value())
                o.fail("bound below exact at " + pair_name(b, w));
        }
    }
    for (auto [b, w] : {std::pair{2, 1}, {3, 1}}) {
        const UrnConfig c(b, w);
        if (to_rational(chernoff_bound(c).value) != equalization_probability(c).value())
            o.fail("expected equality at " + pair_name(b, w));
    }
    if (o.passed) o.detail = "780 pairs bounded; equality at (2,1) and (3,1)";
    return o;
}

Outcome pearson_identity()
{
    Outcome o;
    for (const Rational& x : {Rational(1, 10), Rational(1, 3), Rational(1, 2), Rational(9, 10)})
        for (std::int64_t b = 1; b <= 20; ++b)
            for (std::int64_t w = 1; w <= 20; ++w)
                if (beta_cdf_rational(BetaParams(b, w), x).value() != oracle::integrated_beta_density(b, w, x))
                    o.fail("mismatch at " + pair_name(b, w) + " x=" + fraction_string(x));
    if (o.passed) o.detail = "1600 evaluations match";
    return o;
}

Outcome reproducibility(const std::string& cli)
{
    Outcome o;
    const std::string args =
        "simulate --b 3 --w 2 --horizon 200 --samples 200000 --seed 424242 --streams 8";
    const auto first = testing::run_cli(cli, args);
    const auto second = testing::run_cli(cli, args);
    if (first.exit_code != 0 || second.exit_code != 0) o.fail("simulate exited nonzero: " + first.err);
    if (first.out.empty()) o.fail("no output");
    if (first.out != second.out) o.fail("outputs differ");
    const auto definetti = testing::run_cli(cli, args + " --method definetti");
    const auto definetti_again = testing::run_cli(cli, args + " --method definetti");
    if (definetti.exit_code != 0 || definetti.out != definetti_again.out) o.fail("definetti outputs differ");
    if (o.passed) o.detail = "byte-identical stdout for direct and definetti runs";
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-polya-cli>\n", argv[0]);
        return 2;
    }
    const std::string cli = argv[1];

    const std::vector<Criterion> criteria{
        {1, "triple identity, b + w <= 120", 10.0, triple_identity},
        {2, "small exact values via two oracles", 0.0, small_exact_values},
        {3, "DP equals enumeration, b + w <= 6, n <= 14", 60.0, dp_vs_enumeration},
        {4, "exchangeability and completeness", 60.0, exchangeability},
        {5, "black-fraction martingale", 0.0, martingale},
        {6, "DP converges from below", 120.0, convergence_from_below},
        {7, "direct MC within 4 SE of DP", 120.0, mc_agreement},
        {8, "de Finetti MC within 4 SE of exact", 60.0, definetti_agreement},
        {9, "Chernoff bound validity", 0.0, chernoff_validity},
        {10, "beta CDF equals integrated density", 0.0, pearson_identity},
        {11, "simulate output reproducible", 0.0, [&cli] { return reproducibility(cli); }},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome.fail(std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_seconds > 0 && seconds > c.time_limit_seconds) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "took %.1fs, limit %.0fs", seconds, c.time_limit_seconds);
            outcome.fail(buf);
        }
        std::printf("[%s] AC%-2d %-45s %7.2fs  %s\n", outcome.passed ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds,
                    outcome.detail.c_str());
        std::fflush(stdout);
        if (!outcome.passed) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
