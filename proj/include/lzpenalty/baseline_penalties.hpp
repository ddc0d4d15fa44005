#pragma once

// Frequency and repetition (CTRL-style) penalties, for comparison against
// the LZ penalty. Both look only at token counts/membership over the full
// context; neither depends on order.

#include <cstddef>
#include <span>
#include <vector>

#include "lzpenalty/types.hpp"

namespace lzpenalty {

enum class BaselineKind { frequency, repetition };

struct BaselineConfig {
    BaselineKind kind = BaselineKind::frequency;
    double strength = 0.0;

    void validate() const {
        if (kind == BaselineKind::frequency) require(strength >= 0.0, "frequency strength must be >= 0");
        else require(strength >= 1.0, "repetition strength must be >= 1");
    }
};

inline const std::vector<double>& frequency_sweep_strengths() {
    static const std::vector<double> v{0.0, 0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 0.9, 1.0};
    return v;
}

inline const std::vector<double>& repetition_sweep_strengths() {
    static const std::vector<double> v{1.0, 1.1, 1.2, 1.25, 1.3, 1.5};
    return v;
}

/// logit(a) -= s * count(a in context)
inline void frequency_penalty_inplace(std::span<double> logits, TokenSpan context, double strength) {
    require(strength >= 0.0, "frequency strength must be >= 0");
    if (strength == 0.0) return;
    std::vector<std::size_t> counts(logits.size(), 0);
    for (Token t : context) {
        require(t < logits.size(), "context token outside vocabulary");
        ++counts[t];
    }
    for (std::size_t i = 0; i < logits.size(); ++i)
        if (counts[i] != 0) logits[i] -= strength * static_cast<double>(counts[i]);
}

/// Positive logits of seen tokens are divided by theta, non-positive ones multiplied.
inline void repetition_penalty_inplace(std::span<double> logits, TokenSpan context, double theta) {
    require(theta >= 1.0, "repetition strength must be >= 1");
    if (theta == 1.0) return;
    std::vector<bool> seen(logits.size(), false);
    for (Token t : context) {
        require(t < logits.size(), "context token outside vocabulary");
        seen[t] = true;
    }
    for (std::size_t i = 0; i < logits.size(); ++i) {
        if (!seen[i]) continue;
        logits[i] = logits[i] > 0.0 ? logits[i] / theta : logits[i] * theta;
    }
}

inline std::vector<double> frequency_penalty(std::span<const double> logits, TokenSpan context,
                                             double strength) {
    std::vector<double> out(logits.begin(), logits.end());
    frequency_penalty_inplace(out, context, strength);
    return out;
}

inline std::vector<double> repetition_penalty(std::span<const double> logits, TokenSpan context,
                                              double theta) {
    std::vector<double> out(logits.begin(), logits.end());
    repetition_penalty_inplace(out, context, theta);
    return out;
}

inline std::vector<double> apply_baseline(std::span<const double> logits, TokenSpan context,
                                          const BaselineConfig& cfg) {
    cfg.validate();
    return cfg.kind == BaselineKind::frequency ? frequency_penalty(logits, context, cfg.strength)
                                               : repetition_penalty(logits, context, cfg.strength);
}

} // namespace lzpenalty
