#pragma once

// Compressor -> language model direction: turn per-token codelengths into a
// pmf via the Kraft assignment p(a) ~ 2^-|C(a)|.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "lzpenalty/lz_penalty.hpp"

namespace lzpenalty {

/// Normalized 2^-codelength. Invariant under adding a constant to every entry.
inline std::vector<double> kraft_pmf(std::span<const double> codelength_bits) {
    require(!codelength_bits.empty(), "empty codelength vector");
    const double shortest = *std::min_element(codelength_bits.begin(), codelength_bits.end());
    std::vector<double> p(codelength_bits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp2(shortest - codelength_bits[i]);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

/// Dual pmf of the simulated LZSS compressor for the next token. The penalty
/// vector differs from the un-simplified codelengths by a per-context
/// constant, which the normalization removes.
inline std::vector<double> dual_pmf(const Context& ctx,
                                    ExtensionSemantics semantics = ExtensionSemantics::any_occurrence) {
    return kraft_pmf(penalty_vector(ctx, semantics).bits);
}

} // namespace lzpenalty
