#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lzpenalty/arithmetic_coder.hpp"
#include "lzpenalty/eval.hpp"
#include "lzpenalty/sampler.hpp"
#include "oracles.hpp"

using namespace lzpenalty;

namespace {

TokenVec repeat(const TokenVec& block, std::size_t times) {
    TokenVec out;
    for (std::size_t i = 0; i < times; ++i) out.insert(out.end(), block.begin(), block.end());
    return out;
}

class UniformModel {
public:
    explicit UniformModel(std::size_t v) : v_(v) {}
    std::size_t vocab_size() const { return v_; }
    std::vector<double> next_pmf(TokenSpan) const { return std::vector<double>(v_, 1.0 / static_cast<double>(v_)); }

private:
    std::size_t v_;
};

} // namespace

TEST(DetectDegenerate, ab25Fires) {
    const RepetitionVerdict v = detect_degenerate(repeat({'a', 'b'}, 25));
    EXPECT_TRUE(v.degenerate);
    EXPECT_EQ(v.pattern, (TokenVec{'a', 'b'}));
    EXPECT_EQ(v.repeat_count, 25u);
    EXPECT_EQ(v.start_index, 0u);
}

TEST(DetectDegenerate, ab19DoesNot) {
    EXPECT_FALSE(detect_degenerate(repeat({'a', 'b'}, 19)).degenerate);
    EXPECT_TRUE(detect_degenerate(repeat({'a', 'b'}, 20)).degenerate);
}

TEST(DetectDegenerate, AllDistinct) {
    TokenVec t(5000);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<Token>(i);
    EXPECT_FALSE(detect_degenerate(t).degenerate);
    EXPECT_FALSE(detect_degenerate({}).degenerate);
}

TEST(DetectDegenerate, ShortestPeriodThenEarliest) {
    // "abab..." is also a period-4 repetition; period 2 must be reported.
    TokenVec t{9, 8};
    const TokenVec tail = repeat({1, 2}, 60);
    t.insert(t.end(), tail.begin(), tail.end());
    const RepetitionVerdict v = detect_degenerate(t);
    EXPECT_EQ(v.period(), 2u);
    EXPECT_EQ(v.start_index, 2u);
    EXPECT_EQ(v.repeat_count, 60u);

    // A later constant run beats an earlier period-3 run.
    TokenVec u = repeat({4, 5, 6}, 25);
    const TokenVec run(30, 7);
    u.insert(u.end(), run.begin(), run.end());
    EXPECT_EQ(detect_degenerate(u).pattern, (TokenVec{7}));
}

TEST(DetectDegenerate, ThresholdValidated) {
    EXPECT_THROW(detect_degenerate(TokenVec{1}, 1), UsageError);
    EXPECT_TRUE(detect_degenerate(TokenVec{3, 3}, 2).degenerate);
}

TEST(DetectDegenerate, InsertionAndTruncationFlipVerdict) {
    std::mt19937_64 rng(17);
    int tried = 0;
    while (tried < 200) {
        // Base tokens (>= 10) never collide with block tokens (< 3).
        TokenVec base(200 + rng() % 300);
        for (std::size_t i = 0; i < base.size(); ++i) base[i] = static_cast<Token>(10 + i);
        const TokenVec block = oracle::random_tokens(rng, 1 + rng() % 6, 3);
        // Skip blocks that are themselves powers of a shorter block.
        const TokenVec twice = repeat(block, 2);
        if (std::search(twice.begin() + 1, twice.end(), block.begin(), block.end()) - twice.begin() !=
            static_cast<std::ptrdiff_t>(block.size()))
            continue;
        ++tried;
        const std::size_t at = rng() % (base.size() + 1);
        for (auto [times, want] : {std::pair{20u, true}, std::pair{19u, false}}) {
            TokenVec t = base;
            const TokenVec ins = repeat(block, times);
            t.insert(t.begin() + static_cast<std::ptrdiff_t>(at), ins.begin(), ins.end());
            const RepetitionVerdict v = detect_degenerate(t);
            ASSERT_EQ(v.degenerate, want) << "block size " << block.size() << " times " << times;
            if (want) {
                ASSERT_EQ(v.pattern, block);
                ASSERT_EQ(v.start_index, at);
            }
        }
    }
}

TEST(DetectDegenerate, MatchesQuadraticOracle) {
    std::mt19937_64 rng(2718);
    for (int iter = 0; iter < 400; ++iter) {
        const std::size_t n = iter < 20 ? 10000 : rng() % 800;
        TokenVec t = oracle::random_tokens(rng, n, 2 + rng() % 4);
        // Plant a repeated block in most instances.
        if (rng() % 4 != 0 && n > 0) {
            const TokenVec block = oracle::random_tokens(rng, 1 + rng() % 8, 3);
            const TokenVec ins = repeat(block, 15 + rng() % 10);
            t.insert(t.begin() + static_cast<std::ptrdiff_t>(rng() % n), ins.begin(), ins.end());
        }
        const std::size_t threshold = iter % 5 == 0 ? 2 + rng() % 10 : 20;
        const oracle::Run want = oracle::naive_degenerate(t, threshold);
        const RepetitionVerdict got = detect_degenerate(t, threshold);
        ASSERT_EQ(got.degenerate, want.found) << "iter " << iter;
        if (!want.found) continue;
        ASSERT_EQ(got.period(), want.period) << "iter " << iter;
        ASSERT_EQ(got.start_index, want.start) << "iter " << iter;
        ASSERT_EQ(got.repeat_count, want.count) << "iter " << iter;
    }
}

TEST(Xent, DeterministicRolloutCostsAlmostNothing) {
    // The loop model is the closest thing to deterministic here: every
    // greedy step has probability p.
    const LoopModel m(0.999999);
    SamplerConfig cfg;
    cfg.temperature = 0.0;
    cfg.max_tokens = 100;
    const TokenVec prompt{5};
    const TokenVec out = generate(m, cfg, prompt).tokens;
    EXPECT_NEAR(xent_under_model(m, out, prompt), -std::log2(0.999999), 1e-12);
}

TEST(Xent, UniformModelIsLog2V) {
    std::mt19937_64 rng(1);
    const TokenVec t = oracle::random_tokens(rng, 50, 64);
    EXPECT_NEAR(xent_under_model(UniformModel(64), t), 6.0, 1e-12);
    EXPECT_THROW(xent_under_model(UniformModel(64), TokenVec{}), UsageError);
}

TEST(Xent, ArithmeticCoderRateWithinTwoOverN) {
    const std::string text = "a rose is a rose is a rose, and a rose by any other name would smell as sweet";
    const TokenVec corpus(text.begin(), text.end());
    const NgramModel m = train_ngram(corpus, 2);
    auto provider = [&m](TokenSpan prefix) { return m.next_pmf(prefix); };
    const double n = static_cast<double>(corpus.size());
    const double xent = xent_under_model(m, corpus);
    const double rate = static_cast<double>(ac_encode(corpus, provider).size()) / n;
    EXPECT_LE(rate, xent + 2.0 / n + 1e-9);
    EXPECT_GE(rate, xent - 1e-9);
}

TEST(DistinctN, Values) {
    EXPECT_DOUBLE_EQ(distinct_n(TokenVec{1, 1, 1, 1}, 2), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(distinct_n(TokenVec{1, 2, 3, 4}, 2), 1.0);
    EXPECT_DOUBLE_EQ(distinct_n(TokenVec{1}, 2), 0.0);
    EXPECT_DOUBLE_EQ(distinct_n(TokenVec{1, 2, 1, 2, 1}, 2), 0.5);
}
