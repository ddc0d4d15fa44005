// Greedy decoding of the loop model under increasing LZ penalty strength.
// Prints, per alpha, whether the 500-token rollout is degenerate and the
// longest single-token run it contains.

#include <algorithm>
#include <cstdio>
#include <cstdlib>

#include "lzpenalty/lzpenalty.hpp"

int main(int argc, char** argv) {
    using namespace lzpenalty;
    const double mass = argc > 1 ? std::atof(argv[1]) : 0.95;
    const LoopModel model(mass);

    std::printf("loop model p=%.3f V=%zu, greedy, W=512 B=32, 500 tokens\n", mass, model.vocab_size());
    for (double alpha : {0.0, 0.15, 0.3, 0.6, 0.9, 1.0, 1.5, 2.0}) {
        SamplerConfig cfg;
        cfg.temperature = 0.0;
        cfg.penalty = PenaltyKind::lz;
        cfg.lz.alpha = alpha;
        cfg.max_tokens = 500;
        const TokenVec out = generate(model, cfg, {}).tokens;

        std::size_t longest = 1, run = 1;
        for (std::size_t i = 1; i < out.size(); ++i) {
            run = out[i] == out[i - 1] ? run + 1 : 1;
            longest = std::max(longest, run);
        }
        const RepetitionVerdict v = detect_degenerate(out);
        std::printf("alpha=%-5.2f degenerate=%-3s period=%zu repeats=%zu longest_run=%zu distinct2=%.3f\n", alpha,
                    v.degenerate ? "yes" : "no", v.period(), v.repeat_count, longest, distinct_n(out, 2));
    }
}
