// The V=16 example context through each piece of the library: match state,
// penalty vector, dual pmf, and the LZSS encoding of the whole sequence.

#include <cstdio>

#include "lzpenalty/lzpenalty.hpp"

int main() {
    using namespace lzpenalty;
    const TokenVec tokens{3, 1, 4, 1, 5, 9, 2, 6, 4, 1, 5};
    const Context ctx(tokens, 16, /*window=*/8, /*buffer=*/3);

    const Views v = ctx.views();
    const ExtensionMap ext = extension_map(v.window, v.buffer);
    std::printf("match l=%zu d=%zu, %zu extension(s)\n", ext.match.length, ext.match.distance, ext.entries.size());

    const PenaltyVector pv = penalty_vector(ctx);
    const auto pmf = dual_pmf(ctx);
    std::printf("token  penalty_bits  oracle_bits  dual_pmf\n");
    for (Token a = 0; a < 16; ++a)
        std::printf("%5u  %12.4f  %11.4f  %8.5f\n", a, pv[a], case_codelength_oracle(ctx, a), pmf[a]);

    // Logits nudged by alpha * penalty: extensions of a repeat get pushed down.
    std::vector<double> logits(16, 0.0);
    apply_penalty_inplace(logits, pv, 0.15);
    std::printf("penalized logit of the repeat continuation (9): %.4f, of an unseen token: %.4f\n", logits[9],
                logits[0]);

    const CodeStream s = lzss_encode(tokens, 16, 8, 3);
    std::printf("LZSS:");
    for (const CodeBlock& b : s.blocks) {
        if (b.is_match()) std::printf(" L=%zu,D=%zu", b.length, b.distance);
        else std::printf(" LIT=%u", b.literal);
    }
    std::printf("\n%zu blocks, %.4f bits, %.4f bits/token\n", s.blocks.size(), s.total_bits, compression_rate(s));
}
