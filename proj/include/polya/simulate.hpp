#pragma once

// Seeded Monte Carlo for the Polya urn.
//
// Estimators split their samples into n_streams blocks of fixed size; block i
// draws from Philox stream (seed.stream_id + i) and block results are combined
// in block order. The output is therefore a pure function of the parameters,
// the seed and the stream layout, whatever the number of worker threads.

#include "polya/core_exact.hpp"
#include "polya/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace polya {

struct UrnState {
    std::uint64_t black;
    std::uint64_t white;

    [[nodiscard]] std::uint64_t total() const noexcept { return black + white; }
    friend bool operator==(const UrnState&, const UrnState&) = default;
};

/// One draw: black with probability B/N, and the drawn color gains a ball.
template <class Engine>
UrnState step_urn(UrnState state, Engine& rng)
{
    if (uniform_below(rng, state.total()) < state.black)
        ++state.black;
    else
        ++state.white;
    return state;
}

struct FirstPassageSample {
    bool hit = false;
    std::optional<std::int64_t> tau; ///< set iff hit
    std::int64_t final_S = 0;        ///< S when the run stopped
};

/// Runs the urn until S_n equals target_diff or n reaches the horizon.
template <class Engine>
FirstPassageSample run_first_passage(const UrnConfig& config, std::int64_t target_diff, std::int64_t horizon,
                                     Engine& rng)
{
    if (horizon < 0) throw std::domain_error("run_first_passage: horizon must be >= 0");
    std::int64_t s = config.excess();
    if (s == target_diff) return {true, 0, s};
    UrnState state{static_cast<std::uint64_t>(config.black()), static_cast<std::uint64_t>(config.white())};
    for (std::int64_t n = 1; n <= horizon; ++n) {
        const std::uint64_t before = state.black;
        state = step_urn(state, rng);
        s += state.black != before ? 1 : -1;
        if (s == target_diff) return {true, n, s};
    }
    return {false, std::nullopt, s};
}

/// Black fraction B_n / N_n after n_steps draws.
template <class Engine>
double limit_fraction_sample(const UrnConfig& config, std::int64_t n_steps, Engine& rng)
{
    if (n_steps < 0) throw std::domain_error("limit_fraction_sample: n_steps must be >= 0");
    UrnState state{static_cast<std::uint64_t>(config.black()), static_cast<std::uint64_t>(config.white())};
    for (std::int64_t n = 0; n < n_steps; ++n) state = step_urn(state, rng);
    return static_cast<double>(state.black) / static_cast<double>(state.total());
}

/// b-th smallest of b+w-1 independent uniforms, which is Beta(b, w).
/// `scratch` is reused between calls to avoid reallocating.
template <class Engine>
double sample_beta_order_statistic(const BetaParams& params, Engine& rng, std::vector<double>& scratch)
{
    scratch.resize(static_cast<std::size_t>(params.trials()));
    for (double& u : scratch) u = uniform_open01(rng);
    const auto rank = scratch.begin() + (params.b() - 1);
    std::nth_element(scratch.begin(), rank, scratch.end());
    return *rank;
}

template <class Engine>
double sample_beta_order_statistic(const BetaParams& params, Engine& rng)
{
    std::vector<double> scratch;
    return sample_beta_order_statistic(params, rng, scratch);
}

/// Probability that a walk stepping up with probability p ever falls
/// `start_height` levels: ((1-p)/p)^start_height for p > 1/2, else 1.
inline double gambler_ruin_probability(double p, std::int64_t start_height)
{
    if (p <= 0.5) return 1.0;
    return std::min(1.0, std::pow((1.0 - p) / p, static_cast<double>(start_height)));
}

struct EstimateWithCI {
    static constexpr double kZ95 = 1.959963984540054;

    double p_hat = 0.0;
    double std_err = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::uint64_t n_samples = 0;
    /// Zero standard error (all samples equal); the interval collapses to p_hat.
    bool degenerate = false;

    /// Mean and Wald interval from the first two sample moments. Population
    /// variance is used, so for [0, 1]-valued samples std_err^2 <= p(1-p)/n.
    static EstimateWithCI from_moments(double sum, double sum_squares, std::uint64_t n)
    {
        if (n == 0) throw std::domain_error("EstimateWithCI: no samples");
        const auto count = static_cast<double>(n);
        const double mean = std::clamp(sum / count, 0.0, 1.0);
        const double variance = std::max(0.0, sum_squares / count - mean * mean);
        return with_interval(mean, std::sqrt(variance / count), n);
    }

    static EstimateWithCI from_bernoulli(std::uint64_t hits, std::uint64_t n)
    {
        if (n == 0) throw std::domain_error("EstimateWithCI: no samples");
        if (hits > n) throw std::domain_error("EstimateWithCI: hits > samples");
        const auto count = static_cast<double>(n);
        const double proportion = static_cast<double>(hits) / count;
        return with_interval(proportion, std::sqrt(proportion * (1.0 - proportion) / count), n);
    }

private:
    static EstimateWithCI with_interval(double mean, double std_err, std::uint64_t n)
    {
        EstimateWithCI e;
        e.p_hat = mean;
        e.std_err = std_err;
        e.n_samples = n;
        e.degenerate = std_err == 0.0;
        e.ci_lo = std::max(0.0, mean - kZ95 * std_err);
        e.ci_hi = std::min(1.0, mean + kZ95 * std_err);
        return e;
    }
};

struct SimulationOptions {
    /// Worker threads; 0 means std::thread::hardware_concurrency(). Has no
    /// effect on results.
    unsigned threads = 0;
};

namespace detail {

inline std::uint64_t block_size(std::uint64_t n_samples, std::uint64_t n_streams, std::uint64_t block)
{
    return n_samples / n_streams + (block < n_samples % n_streams ? 1 : 0);
}

/// Calls body(i) for i in [0, n_blocks) on a small thread pool.
template <class Body>
void for_each_block(std::uint64_t n_blocks, unsigned threads, Body&& body)
{
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_blocks));
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < n_blocks; ++i) body(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            try {
                for (std::uint64_t i = next++; i < n_blocks; i = next++) body(i);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

inline void require_sampling_layout(std::uint64_t n_samples, std::uint64_t n_streams, const char* who)
{
    if (n_samples < 1) throw std::domain_error(std::string(who) + ": n_samples must be >= 1");
    if (n_streams < 1) throw std::domain_error(std::string(who) + ": n_streams must be >= 1");
}

} // namespace detail

/// Direct simulation estimate of P(tau_m <= horizon).
inline EstimateWithCI estimate_equalization(const UrnConfig& config, std::int64_t target_diff,
                                            std::int64_t horizon, std::uint64_t n_samples, RngSeed seed,
                                            std::uint64_t n_streams, SimulationOptions options = {})
{
    detail::require_sampling_layout(n_samples, n_streams, "estimate_equalization");
    if (horizon < 0) throw std::domain_error("estimate_equalization: horizon must be >= 0");
    std::vector<std::uint64_t> hits(n_streams, 0);
    detail::for_each_block(n_streams, options.threads, [&](std::uint64_t block) {
        Philox4x32 rng(RngSeed{seed.seed, seed.stream_id + block});
        std::uint64_t count = 0;
        const std::uint64_t samples = detail::block_size(n_samples, n_streams, block);
        for (std::uint64_t i = 0; i < samples; ++i)
            if (run_first_passage(config, target_diff, horizon, rng).hit) ++count;
        hits[block] = count;
    });
    std::uint64_t total = 0;
    for (std::uint64_t h : hits) total += h;
    return EstimateWithCI::from_bernoulli(total, n_samples);
}

/// Untruncated estimate of P(tau < infinity) through the exchangeable-mixture
/// representation: draw p ~ Beta(b, w), then average the ruin probability of
/// the p-biased walk started at height b - w.
inline EstimateWithCI definetti_estimator(const UrnConfig& config, std::uint64_t n_samples, RngSeed seed,
                                          std::uint64_t n_streams = 1, SimulationOptions options = {})
{
    detail::require_black_majority(config, "definetti_estimator");
    detail::require_sampling_layout(n_samples, n_streams, "definetti_estimator");
    const BetaParams params(config);
    struct Moments {
        double sum = 0.0;
        double sum_squares = 0.0;
    };
    std::vector<Moments> moments(n_streams);
    detail::for_each_block(n_streams, options.threads, [&](std::uint64_t block) {
        Philox4x32 rng(RngSeed{seed.seed, seed.stream_id + block});
        std::vector<double> scratch;
        Moments m;
        const std::uint64_t samples = detail::block_size(n_samples, n_streams, block);
        for (std::uint64_t i = 0; i < samples; ++i) {
            const double p = sample_beta_order_statistic(params, rng, scratch);
            const double ruin = gambler_ruin_probability(p, config.excess());
            m.sum += ruin;
            m.sum_squares += ruin * ruin;
        }
        moments[block] = m;
    });
    Moments total;
    for (const Moments& m : moments) {
        total.sum += m.sum;
        total.sum_squares += m.sum_squares;
    }
    return EstimateWithCI::from_moments(total.sum, total.sum_squares, n_samples);
}

} // namespace polya
