#pragma once

// Logit -> token pipeline and the autoregressive generation loop.
//
// Default stage order: penalty (on raw logits) -> temperature -> top-k ->
// softmax -> top-p -> sample. Temperature 0 is greedy argmax with the
// smallest token id winning ties.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lzpenalty/baseline_penalties.hpp"
#include "lzpenalty/lz_penalty.hpp"
#include "lzpenalty/toy_lm.hpp"

namespace lzpenalty {

enum class PenaltyKind { none, lz, frequency, repetition };

inline std::string_view penalty_name(PenaltyKind k) {
    switch (k) {
    case PenaltyKind::none: return "none";
    case PenaltyKind::lz: return "lz";
    case PenaltyKind::frequency: return "frequency";
    case PenaltyKind::repetition: return "repetition";
    }
    return "?";
}

inline std::optional<PenaltyKind> parse_penalty_kind(std::string_view s) {
    if (s == "none") return PenaltyKind::none;
    if (s == "lz") return PenaltyKind::lz;
    if (s == "frequency") return PenaltyKind::frequency;
    if (s == "repetition") return PenaltyKind::repetition;
    return std::nullopt;
}

enum class PenaltyOrder { before_temperature, after_temperature };

struct SamplerConfig {
    double temperature = 1.0;
    std::size_t top_k = 40; // 0 = unlimited
    double top_p = 0.95;
    PenaltyKind penalty = PenaltyKind::none;
    double strength = 0.0; // frequency s or repetition theta
    LzPenaltyConfig lz;
    std::uint64_t seed = 0;
    std::size_t max_tokens = 256;
    std::optional<Token> end_token;
    PenaltyOrder order = PenaltyOrder::before_temperature;

    void validate() const {
        require(std::isfinite(temperature) && temperature >= 0.0, "temperature must be >= 0");
        require(top_p > 0.0 && top_p <= 1.0, "top-p must be in (0, 1]");
        require(max_tokens >= 1, "max tokens must be positive");
        switch (penalty) {
        case PenaltyKind::lz: lz.validate(); break;
        case PenaltyKind::frequency: BaselineConfig{BaselineKind::frequency, strength}.validate(); break;
        case PenaltyKind::repetition: BaselineConfig{BaselineKind::repetition, strength}.validate(); break;
        case PenaltyKind::none: break;
        }
    }
};

/// Seeded 64-bit stream; uniform doubles are built from the top 53 bits so
/// draws do not depend on the standard library's distribution code.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// T > 0 divides every logit by T. T == 0 is left to the caller as greedy.
inline std::vector<double> temperature_scale(std::span<const double> logits, double temperature) {
    require(temperature >= 0.0, "temperature must be >= 0");
    std::vector<double> out(logits.begin(), logits.end());
    if (temperature > 0.0 && temperature != 1.0)
        for (double& v : out) v /= temperature;
    return out;
}

namespace detail {

// Descending by value, ascending by index on ties.
inline auto descending_then_index(std::span<const double> v) {
    return [v](std::size_t a, std::size_t b) { return v[a] > v[b] || (v[a] == v[b] && a < b); };
}

} // namespace detail

inline std::vector<double> top_k_filter(std::span<const double> logits, std::size_t k) {
    require(k >= 1, "top-k must be >= 1");
    std::vector<double> out(logits.begin(), logits.end());
    if (k >= logits.size()) return out;
    std::vector<std::size_t> idx(logits.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k - 1), idx.end(),
                     detail::descending_then_index(logits));
    for (auto it = idx.begin() + static_cast<std::ptrdiff_t>(k); it != idx.end(); ++it) out[*it] = neg_inf;
    return out;
}

inline std::vector<double> softmax(std::span<const double> logits) {
    require(!logits.empty(), "softmax of an empty vector");
    const double top = *std::max_element(logits.begin(), logits.end());
    require(std::isfinite(top), "softmax needs at least one finite logit");
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp(logits[i] - top);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

/// Keeps the smallest probability-sorted prefix with mass >= p and renormalizes.
inline std::vector<double> top_p_filter(std::span<const double> probs, double p) {
    require(p > 0.0 && p <= 1.0, "top-p must be in (0, 1]");
    std::vector<double> out(probs.begin(), probs.end());
    if (p >= 1.0) return out;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < probs.size(); ++i)
        if (probs[i] > 0.0) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), detail::descending_then_index(probs));
    // Relative slack so that e.g. 0.6 + 0.3 counts as reaching 0.9.
    const double target = p * (1.0 - 1e-12);
    double cum = 0.0;
    std::size_t keep = 0;
    while (keep < idx.size()) {
        cum += probs[idx[keep++]];
        if (cum >= target) break;
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t j = 0; j < keep; ++j) out[idx[j]] = probs[idx[j]] / cum;
    return out;
}

inline Token argmax(std::span<const double> logits) {
    require(!logits.empty(), "argmax of an empty vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < logits.size(); ++i)
        if (logits[i] > logits[best]) best = i;
    return static_cast<Token>(best);
}

inline Token sample_from(std::span<const double> probs, RandomSource& rng) {
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    require(total > 0.0, "cannot sample from an all-zero pmf");
    const double u = rng.uniform() * total;
    double cum = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        cum += probs[i];
        last = i;
        if (u < cum) return static_cast<Token>(i);
    }
    return static_cast<Token>(last);
}

/// Applies the configured penalty to `logits` given the full context so far.
inline void apply_configured_penalty(std::span<double> logits, TokenSpan context, const SamplerConfig& cfg) {
    switch (cfg.penalty) {
    case PenaltyKind::none: return;
    case PenaltyKind::lz:
        if (cfg.lz.alpha == 0.0) return;
        apply_penalty_inplace(logits, penalty_vector(context, logits.size(), cfg.lz), cfg.lz.alpha);
        return;
    case PenaltyKind::frequency: frequency_penalty_inplace(logits, context, cfg.strength); return;
    case PenaltyKind::repetition: repetition_penalty_inplace(logits, context, cfg.strength); return;
    }
}

/// One pipeline step from raw logits to a token.
inline Token sample_step(std::vector<double> logits, TokenSpan context, const SamplerConfig& cfg,
                         RandomSource& rng) {
    if (cfg.order == PenaltyOrder::before_temperature) apply_configured_penalty(logits, context, cfg);
    if (cfg.temperature == 0.0) {
        if (cfg.order == PenaltyOrder::after_temperature) apply_configured_penalty(logits, context, cfg);
        return argmax(logits);
    }
    logits = temperature_scale(logits, cfg.temperature);
    if (cfg.order == PenaltyOrder::after_temperature) apply_configured_penalty(logits, context, cfg);
    if (cfg.top_k != 0) logits = top_k_filter(logits, cfg.top_k);
    const std::vector<double> probs = top_p_filter(softmax(logits), cfg.top_p);
    return sample_from(probs, rng);
}

inline std::vector<double> log_probs(std::span<const double> pmf) {
    std::vector<double> out(pmf.size());
    for (std::size_t i = 0; i < pmf.size(); ++i) out[i] = pmf[i] > 0.0 ? std::log(pmf[i]) : neg_inf;
    return out;
}

struct GenerationResult {
    TokenVec tokens; // continuation only, prompt excluded
    bool stopped_at_end_token = false;
};

template <LanguageModel M>
GenerationResult generate(const M& model, const SamplerConfig& cfg, TokenSpan prompt) {
    cfg.validate();
    const std::size_t vocab = model.vocab_size();
    check_vocab(prompt, vocab);
    if (cfg.end_token) require(*cfg.end_token < vocab, "end token outside vocabulary");

    RandomSource rng(cfg.seed);
    TokenVec context(prompt.begin(), prompt.end());
    GenerationResult result;
    result.tokens.reserve(cfg.max_tokens);
    for (std::size_t step = 0; step < cfg.max_tokens; ++step) {
        const std::vector<double> pmf = model.next_pmf(context);
        require(pmf.size() == vocab, "model returned a pmf of the wrong size");
        const Token next = sample_step(log_probs(pmf), context, cfg, rng);
        context.push_back(next);
        result.tokens.push_back(next);
        if (cfg.end_token && next == *cfg.end_token) {
            result.stopped_at_end_token = true;
            break;
        }
    }
    return result;
}

} // namespace lzpenalty
