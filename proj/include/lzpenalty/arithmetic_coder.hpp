#pragma once

// Binary arithmetic coder driven by an arbitrary causal pmf.
//
// Classic low/high/pending-bits construction with 62-bit code registers and
// 128-bit intermediate products. Probabilities are quantized to a 2^50 total,
// so the emitted length stays within -sum(log2 p) + 2 bits up to ~1e-9 bits
// per symbol.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lzpenalty/lzss.hpp"
#include "lzpenalty/types.hpp"

namespace lzpenalty {

using BitString = std::vector<bool>;

namespace detail {

struct FrequencyTable {
    std::vector<std::uint64_t> cumulative; // size V + 1
    std::uint64_t total() const { return cumulative.back(); }
};

inline FrequencyTable quantize_pmf(const std::vector<double>& pmf) {
    constexpr double scale = 0x1.0p50;
    require(!pmf.empty(), "pmf must be non-empty");
    FrequencyTable t;
    t.cumulative.resize(pmf.size() + 1, 0);
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        const double p = pmf[i];
        require(std::isfinite(p) && p >= 0.0, "pmf entries must be finite and nonnegative");
        std::uint64_t q = 0;
        if (p > 0.0) q = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(p * scale)));
        t.cumulative[i + 1] = t.cumulative[i] + q;
    }
    require(t.total() > 0, "pmf has no mass");
    require(t.total() < (std::uint64_t{1} << 59), "pmf mass too large; expected a normalized pmf");
    return t;
}

struct CoderRange {
    static constexpr int code_bits = 62;
    static constexpr std::uint64_t top = (std::uint64_t{1} << code_bits) - 1;
    static constexpr std::uint64_t half = std::uint64_t{1} << (code_bits - 1);
    static constexpr std::uint64_t quarter = std::uint64_t{1} << (code_bits - 2);

    std::uint64_t low = 0;
    std::uint64_t high = top;

    void narrow(const FrequencyTable& t, std::size_t symbol) {
        using u128 = unsigned __int128;
        const u128 range = static_cast<u128>(high - low) + 1;
        const u128 total = t.total();
        high = low + static_cast<std::uint64_t>(range * t.cumulative[symbol + 1] / total) - 1;
        low = low + static_cast<std::uint64_t>(range * t.cumulative[symbol] / total);
    }
};

} // namespace detail

/// Encodes `tokens`; `pmf_for(prefix)` returns the next-token pmf given the
/// tokens before the current position.
template <class PmfProvider>
BitString ac_encode(TokenSpan tokens, PmfProvider&& pmf_for) {
    using R = detail::CoderRange;
    BitString bits;
    R r;
    std::size_t pending = 0;
    auto emit = [&](bool bit) {
        bits.push_back(bit);
        for (; pending > 0; --pending) bits.push_back(!bit);
    };

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::vector<double> pmf = pmf_for(tokens.first(i));
        const detail::FrequencyTable t = detail::quantize_pmf(pmf);
        const Token s = tokens[i];
        if (s >= pmf.size()) throw CodecError("token " + std::to_string(s) + " outside pmf support");
        if (t.cumulative[s + 1] == t.cumulative[s])
            throw CodecError("zero-probability symbol at position " + std::to_string(i));
        r.narrow(t, s);
        for (;;) {
            if (r.high < R::half) {
                emit(false);
            } else if (r.low >= R::half) {
                emit(true);
                r.low -= R::half;
                r.high -= R::half;
            } else if (r.low >= R::quarter && r.high < R::half + R::quarter) {
                ++pending;
                r.low -= R::quarter;
                r.high -= R::quarter;
            } else {
                break;
            }
            r.low <<= 1;
            r.high = (r.high << 1) | 1;
        }
    }
    ++pending;
    emit(r.low >= R::quarter);
    return bits;
}

template <class PmfProvider>
TokenVec ac_decode(const BitString& bits, PmfProvider&& pmf_for, std::size_t count) {
    using R = detail::CoderRange;
    std::size_t next = 0;
    auto read = [&]() -> std::uint64_t { return next < bits.size() && bits[next++] ? 1 : 0; };

    R r;
    std::uint64_t value = 0;
    for (int i = 0; i < R::code_bits; ++i) value = (value << 1) | read();

    TokenVec out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::vector<double> pmf = pmf_for(TokenSpan(out));
        const detail::FrequencyTable t = detail::quantize_pmf(pmf);
        using u128 = unsigned __int128;
        const u128 range = static_cast<u128>(r.high - r.low) + 1;
        const u128 target = ((static_cast<u128>(value - r.low) + 1) * t.total() - 1) / range;
        const auto it = std::upper_bound(t.cumulative.begin(), t.cumulative.end(),
                                         static_cast<std::uint64_t>(target));
        if (it == t.cumulative.begin() || it == t.cumulative.end())
            throw CodecError("corrupt arithmetic-coded stream at symbol " + std::to_string(i));
        const auto s = static_cast<Token>(std::distance(t.cumulative.begin(), it) - 1);
        out.push_back(s);
        r.narrow(t, s);
        for (;;) {
            if (r.high < R::half) {
                // nothing to subtract
            } else if (r.low >= R::half) {
                r.low -= R::half;
                r.high -= R::half;
                value -= R::half;
            } else if (r.low >= R::quarter && r.high < R::half + R::quarter) {
                r.low -= R::quarter;
                r.high -= R::quarter;
                value -= R::quarter;
            } else {
                break;
            }
            r.low <<= 1;
            r.high = (r.high << 1) | 1;
            value = (value << 1) | read();
        }
    }
    return out;
}

/// Ideal codelength -sum(log2 p(x_i | x_<i)) in bits.
template <class PmfProvider>
double information_content_bits(TokenSpan tokens, PmfProvider&& pmf_for) {
    double bits = 0.0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::vector<double> pmf = pmf_for(tokens.first(i));
        bits -= std::log2(pmf.at(tokens[i]));
    }
    return bits;
}

} // namespace lzpenalty
