#pragma once

#include <cmath>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "lzpenalty/toy_lm.hpp"
#include "lzpenalty/types.hpp"

namespace lzpenalty {

struct RepetitionVerdict {
    bool degenerate = false;
    TokenVec pattern;
    std::size_t repeat_count = 0;
    std::size_t start_index = 0;

    std::size_t period() const { return pattern.size(); }
};

/// Flags a block of any length >= 1 repeated at least `threshold` times
/// back to back. Reports the shortest such period; among runs of that
/// period, the earliest start, with the run's full copy count.
///
/// For each period p, one linear pass tracks runs of t[j] == t[j + p]; a run
/// of length r starting at s spans floor((r + p) / p) copies. Periods above
/// n / threshold cannot qualify, so the total work is O(n^2 / threshold).
inline RepetitionVerdict detect_degenerate(TokenSpan tokens, std::size_t threshold = 20) {
    require(threshold >= 2, "repetition threshold must be >= 2");
    const std::size_t n = tokens.size();
    RepetitionVerdict v;
    for (std::size_t p = 1; p * threshold <= n; ++p) {
        const std::size_t need = p * (threshold - 1);
        std::size_t j = 0;
        while (j + p < n) {
            if (tokens[j] != tokens[j + p]) {
                ++j;
                continue;
            }
            const std::size_t start = j;
            while (j + p < n && tokens[j] == tokens[j + p]) ++j;
            const std::size_t run = j - start;
            if (run >= need) {
                v.degenerate = true;
                v.start_index = start;
                v.repeat_count = (run + p) / p;
                v.pattern.assign(tokens.begin() + static_cast<std::ptrdiff_t>(start),
                                 tokens.begin() + static_cast<std::ptrdiff_t>(start + p));
                return v;
            }
        }
    }
    return v;
}

/// Mean -log2 p(x_i | prompt, x_<i) over `tokens`, in bits per token.
template <LanguageModel M>
double xent_under_model(const M& model, TokenSpan tokens, TokenSpan prompt = {}) {
    require(!tokens.empty(), "cross-entropy of an empty sequence");
    TokenVec ctx(prompt.begin(), prompt.end());
    ctx.reserve(prompt.size() + tokens.size());
    double bits = 0.0;
    for (Token t : tokens) {
        const std::vector<double> pmf = model.next_pmf(ctx);
        require(t < pmf.size(), "token outside model vocabulary");
        require(pmf[t] > 0.0, "zero-probability token under model");
        bits -= std::log2(pmf[t]);
        ctx.push_back(t);
    }
    return bits / static_cast<double>(tokens.size());
}

/// Distinct n-grams divided by total n-grams; 0 for sequences shorter than n.
inline double distinct_n(TokenSpan tokens, std::size_t n = 2) {
    require(n >= 1, "n must be >= 1");
    if (tokens.size() < n) return 0.0;
    std::set<TokenVec> seen;
    const std::size_t total = tokens.size() - n + 1;
    for (std::size_t i = 0; i < total; ++i) seen.emplace(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                                         tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
    return static_cast<double>(seen.size()) / static_cast<double>(total);
}

} // namespace lzpenalty
