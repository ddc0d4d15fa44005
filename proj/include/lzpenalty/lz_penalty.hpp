#pragma once

// LZ penalty: per-token marginal LZSS codelength of the next token under a
// simulated full window/buffer, applied additively to logits.
//
//   extends the match (lambda = l+1):  log2((l+1) * delta) - log2(l * d) - 1
//   occurs in window  (lambda = 1):    log2(delta)
//   absent            (lambda = 0):    log2(V)
//
// All values are in bits and are only defined up to a per-step constant.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lzpenalty/lz_match.hpp"

namespace lzpenalty {

struct LzPenaltyConfig {
    double alpha = 0.15;
    std::size_t window_capacity = 512;
    std::size_t buffer_capacity = 32;
    ExtensionSemantics extension = ExtensionSemantics::any_occurrence;
    MatcherKind matcher = MatcherKind::naive;

    void validate() const {
        require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be a nonnegative finite number");
        require(window_capacity > 0 && buffer_capacity > 0, "capacities must be positive");
        require(buffer_capacity < window_capacity, "buffer capacity must be below window capacity");
    }
};

struct PenaltyVector {
    std::vector<double> bits;

    std::size_t size() const { return bits.size(); }
    double operator[](std::size_t i) const { return bits[i]; }
};

enum class LambdaClass { literal, singleton, extension };

struct LambdaCounts {
    std::size_t literal = 0;
    std::size_t singleton = 0;
    std::size_t extension = 0;
};

/// Writes the penalty for every vocabulary entry into `out` (size V).
/// Returns the (l, d) of the current match.
inline MatchResult penalty_vector_into(Views views, ExtensionSemantics semantics, MatcherKind matcher,
                                       std::span<double> out) {
    const std::size_t vocab = out.size();
    require(vocab > 0, "empty vocabulary");
    std::fill(out.begin(), out.end(), std::log2(static_cast<double>(vocab)));

    const TokenSpan window = views.window;
    const std::size_t n = window.size();
    // Oldest to newest so the most recent occurrence wins.
    for (std::size_t i = 0; i < n; ++i) {
        require(window[i] < vocab, "window token outside vocabulary");
        out[window[i]] = std::log2(static_cast<double>(n - i));
    }

    const ExtensionMap ext = extension_map(window, views.buffer, semantics, matcher);
    const auto [l, d] = ext.match;
    for (const Extension& e : ext.entries) {
        out[e.token] = std::log2(static_cast<double>((l + 1) * e.distance)) -
                       std::log2(static_cast<double>(l * d)) - 1.0;
    }
    return ext.match;
}

inline PenaltyVector penalty_vector(Views views, std::size_t vocab_size,
                                    ExtensionSemantics semantics = ExtensionSemantics::any_occurrence,
                                    MatcherKind matcher = MatcherKind::naive) {
    PenaltyVector pv{std::vector<double>(vocab_size)};
    penalty_vector_into(views, semantics, matcher, pv.bits);
    return pv;
}

inline PenaltyVector penalty_vector(const Context& ctx,
                                    ExtensionSemantics semantics = ExtensionSemantics::any_occurrence,
                                    MatcherKind matcher = MatcherKind::naive) {
    return penalty_vector(ctx.views(), ctx.vocab_size(), semantics, matcher);
}

inline PenaltyVector penalty_vector(TokenSpan tokens, std::size_t vocab_size, const LzPenaltyConfig& cfg) {
    cfg.validate();
    return penalty_vector(simulate_views(tokens, cfg.window_capacity, cfg.buffer_capacity), vocab_size,
                          cfg.extension, cfg.matcher);
}

/// Classification of every vocabulary token into the three branches.
inline LambdaCounts lambda_counts(Views views, std::size_t vocab_size,
                                  ExtensionSemantics semantics = ExtensionSemantics::any_occurrence) {
    const ExtensionMap ext = extension_map(views.window, views.buffer, semantics);
    const auto present = occurrence_distances(views.window);
    LambdaCounts c;
    c.extension = ext.entries.size();
    for (const auto& [tok, dist] : present) {
        if (!ext.find(tok)) ++c.singleton;
    }
    c.literal = vocab_size - c.extension - c.singleton;
    return c;
}

inline void apply_penalty_inplace(std::span<double> logits, const PenaltyVector& pv, double alpha) {
    require(logits.size() == pv.size(), "logits and penalty vector lengths differ");
    if (alpha == 0.0) return;
    for (std::size_t i = 0; i < logits.size(); ++i) logits[i] += alpha * pv.bits[i];
}

inline std::vector<double> apply_penalty(std::span<const double> logits, const PenaltyVector& pv,
                                         double alpha) {
    std::vector<double> out(logits.begin(), logits.end());
    apply_penalty_inplace(out, pv, alpha);
    return out;
}

namespace detail {

// Exhaustive search: longest k first, then the smallest distance.
inline MatchResult brute_force_suffix_match(TokenSpan window, TokenSpan seq) {
    const std::size_t n = window.size();
    for (std::size_t k = std::min(seq.size(), n); k >= 1; --k) {
        const TokenSpan suffix = seq.last(k);
        for (std::size_t d = 1; d + k - 1 <= n; ++d) {
            const std::size_t start = n - d - k + 1;
            if (std::equal(suffix.begin(), suffix.end(), window.begin() + static_cast<std::ptrdiff_t>(start)))
                return {k, d};
        }
    }
    return {};
}

inline double match_bits(std::size_t length, std::size_t distance) {
    return std::log2(static_cast<double>(length)) + std::log2(static_cast<double>(distance)) + 1.0;
}

} // namespace detail

/// Marginal codelength of the virtual first code block given candidate `a`,
/// with every constant kept. Found by exhaustive search rather than through
/// the extension map, so it can check `penalty_vector` independently.
inline double case_codelength_oracle(Views views, std::size_t vocab_size, Token a,
                                     ExtensionSemantics semantics = ExtensionSemantics::any_occurrence) {
    require(a < vocab_size, "candidate token outside vocabulary");
    const TokenSpan window = views.window;
    const TokenSpan buffer = views.buffer;
    const MatchResult base = detail::brute_force_suffix_match(window, buffer);

    if (base.length >= 1) {
        TokenVec extended(buffer.end() - static_cast<std::ptrdiff_t>(base.length), buffer.end());
        extended.push_back(a);
        std::optional<std::size_t> delta;
        if (semantics == ExtensionSemantics::any_occurrence) {
            const MatchResult m = detail::brute_force_suffix_match(window, extended);
            if (m.length == base.length + 1) delta = m.distance;
        } else if (base.distance >= 2) {
            const std::size_t start = window.size() - (base.distance - 1) - base.length;
            if (std::equal(extended.begin(), extended.end(), window.begin() + static_cast<std::ptrdiff_t>(start)))
                delta = base.distance - 1;
        }
        if (delta) {
            return detail::match_bits(base.length + 1, *delta) - detail::match_bits(base.length, base.distance);
        }
    }

    const TokenVec single{a};
    const MatchResult m = detail::brute_force_suffix_match(window, single);
    if (m.length == 1) return detail::match_bits(1, m.distance);
    return std::log2(static_cast<double>(vocab_size)) + 1.0;
}

inline double case_codelength_oracle(const Context& ctx, Token a,
                                     ExtensionSemantics semantics = ExtensionSemantics::any_occurrence) {
    return case_codelength_oracle(ctx.views(), ctx.vocab_size(), a, semantics);
}

} // namespace lzpenalty
