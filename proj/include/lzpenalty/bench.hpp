#pragma once

// Per-step latency of the LZ penalty on synthetic contexts, compared with a
// no-penalty sampling step (top-k, softmax, top-p, draw) over the same vocab.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "lzpenalty/lz_penalty.hpp"
#include "lzpenalty/sampler.hpp"

namespace lzpenalty {

struct BenchOptions {
    std::vector<std::size_t> vocab_sizes{131072};
    std::vector<std::size_t> windows{512};
    std::size_t buffer = 32;
    std::size_t iterations = 200;
    double alpha = 0.15;
    MatcherKind matcher = MatcherKind::naive;
    std::uint64_t seed = 0;
};

struct BenchRow {
    std::size_t vocab_size = 0;
    std::size_t window = 0;
    std::size_t buffer = 0;
    double median_us = 0.0;
    double p99_us = 0.0;
    double overhead_pct = 0.0;
    double baseline_median_us = 0.0;
    bool matchers_identical = true;
};

/// Text-like synthetic context: runs copied from earlier positions mixed
/// with fresh tokens from a small active alphabet, so matches actually occur.
inline TokenVec synthetic_context(RandomSource& rng, std::size_t length, std::size_t vocab_size) {
    const std::size_t alphabet = std::min<std::size_t>(vocab_size, 1024);
    TokenVec t;
    t.reserve(length);
    while (t.size() < length) {
        if (t.size() > 8 && rng.uniform() < 0.3) {
            const std::size_t from = rng.next_u64() % (t.size() - 4);
            const std::size_t len = 2 + rng.next_u64() % 12;
            for (std::size_t k = 0; k < len && t.size() < length; ++k) t.push_back(t[from + k]);
        } else {
            t.push_back(static_cast<Token>(rng.next_u64() % alphabet));
        }
    }
    return t;
}

namespace detail {

inline double percentile(std::vector<double> v, double q) {
    require(!v.empty(), "percentile of empty sample");
    std::sort(v.begin(), v.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
    return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

template <class F>
double time_us(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::micro>(t1 - t0).count();
}

} // namespace detail

inline BenchRow bench_one(std::size_t vocab, std::size_t window, const BenchOptions& opt) {
    require(opt.iterations >= 1, "bench needs at least one iteration");
    SamplerConfig cfg;
    cfg.penalty = PenaltyKind::lz;
    cfg.lz.alpha = opt.alpha;
    cfg.lz.window_capacity = window;
    cfg.lz.buffer_capacity = opt.buffer;
    cfg.lz.matcher = opt.matcher;
    cfg.validate();

    RandomSource rng(opt.seed ^ (vocab * 1315423911ULL) ^ window);
    std::vector<TokenVec> contexts;
    for (std::size_t i = 0; i < opt.iterations; ++i)
        contexts.push_back(synthetic_context(rng, 2 * (window + opt.buffer), vocab));
    std::vector<double> base_logits(vocab);
    for (double& v : base_logits) v = 4.0 * rng.uniform();

    BenchRow row{vocab, window, opt.buffer};
    std::vector<double> penalty_us;
    std::vector<double> step_us;
    std::vector<double> logits(vocab);
    SamplerConfig plain = cfg;
    plain.penalty = PenaltyKind::none;
    RandomSource draw(opt.seed);
    volatile Token sink = 0;
    for (const TokenVec& ctx : contexts) {
        logits = base_logits;
        penalty_us.push_back(detail::time_us([&] { apply_configured_penalty(logits, ctx, cfg); }));
        step_us.push_back(detail::time_us([&] { sink = sample_step(base_logits, ctx, plain, draw); }));
    }
    (void)sink;

    // Output equivalence of the two matchers on the same contexts.
    for (const TokenVec& ctx : contexts) {
        LzPenaltyConfig a = cfg.lz;
        LzPenaltyConfig b = cfg.lz;
        a.matcher = MatcherKind::naive;
        b.matcher = MatcherKind::indexed;
        if (penalty_vector(ctx, vocab, a).bits != penalty_vector(ctx, vocab, b).bits) {
            row.matchers_identical = false;
            break;
        }
    }

    row.median_us = detail::percentile(penalty_us, 0.5);
    row.p99_us = detail::percentile(penalty_us, 0.99);
    row.baseline_median_us = detail::percentile(step_us, 0.5);
    row.overhead_pct = row.baseline_median_us > 0.0 ? 100.0 * row.median_us / row.baseline_median_us : 0.0;
    return row;
}

inline std::vector<BenchRow> run_bench(const BenchOptions& opt) {
    std::vector<BenchRow> rows;
    for (std::size_t v : opt.vocab_sizes)
        for (std::size_t w : opt.windows) rows.push_back(bench_one(v, w, opt));
    return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "V,W,B,median_us,p99_us,overhead_pct\n";
    for (const BenchRow& r : rows)
        out += fmt::format("{},{},{},{:.3f},{:.3f},{:.3f}\n", r.vocab_size, r.window, r.buffer, r.median_us, r.p99_us,
                           r.overhead_pct);
    return out;
}

} // namespace lzpenalty
