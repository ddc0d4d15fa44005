#pragma once

// Reference greedy LZSS codec with idealized (real-valued) bit accounting.
// A match block costs log2 L + log2 D + 1 bits, a literal log2 V + 1 bits.
// The stream is a structured record; no physical bit packing is done.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "lzpenalty/types.hpp"

namespace lzpenalty {

class CodecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CodeBlock {
    enum class Kind { literal, match };

    Kind kind = Kind::literal;
    Token literal = 0;
    std::size_t length = 0;   // match only
    std::size_t distance = 0; // match only, back from the encode position to the source start
    double cost_bits = 0.0;

    static CodeBlock make_literal(Token t, std::size_t vocab_size) {
        return {Kind::literal, t, 0, 0, literal_bits(vocab_size)};
    }

    static CodeBlock make_match(std::size_t length, std::size_t distance) {
        return {Kind::match, 0, length, distance, match_bits(length, distance)};
    }

    static double literal_bits(std::size_t vocab_size) {
        return std::log2(static_cast<double>(vocab_size)) + 1.0;
    }

    static double match_bits(std::size_t length, std::size_t distance) {
        return std::log2(static_cast<double>(length)) + std::log2(static_cast<double>(distance)) + 1.0;
    }

    bool is_match() const { return kind == Kind::match; }
};

struct CodeStream {
    std::vector<CodeBlock> blocks;
    double total_bits = 0.0;
    std::size_t original_length = 0;
    std::size_t vocab_size = 0;
};

/// Greedy left-to-right parse. At each position the longest prefix of the
/// remaining input (at most `buffer_capacity` tokens) that occurs entirely
/// inside the preceding `window_capacity` tokens is emitted as a match;
/// ties go to the smallest distance. No match means a literal.
inline CodeStream lzss_encode(TokenSpan tokens, std::size_t vocab_size, std::size_t window_capacity,
                              std::size_t buffer_capacity) {
    check_vocab(tokens, vocab_size);
    require(window_capacity > 0 && buffer_capacity > 0, "capacities must be positive");

    CodeStream out;
    out.original_length = tokens.size();
    out.vocab_size = vocab_size;
    const std::size_t n = tokens.size();
    std::size_t pos = 0;
    while (pos < n) {
        const std::size_t max_len = std::min(buffer_capacity, n - pos);
        const std::size_t oldest = pos > window_capacity ? pos - window_capacity : 0;
        std::size_t best_len = 0;
        std::size_t best_dist = 0;
        for (std::size_t start = pos; start-- > oldest;) {
            // Source must end before the encode position.
            const std::size_t cap = std::min(max_len, pos - start);
            if (cap <= best_len) continue;
            std::size_t k = 0;
            while (k < cap && tokens[start + k] == tokens[pos + k]) ++k;
            if (k > best_len) {
                best_len = k;
                best_dist = pos - start;
                if (k == max_len) break;
            }
        }
        CodeBlock block = best_len >= 1 ? CodeBlock::make_match(best_len, best_dist)
                                        : CodeBlock::make_literal(tokens[pos], vocab_size);
        out.total_bits += block.cost_bits;
        out.blocks.push_back(block);
        pos += best_len >= 1 ? best_len : 1;
    }
    return out;
}

inline TokenVec lzss_decode(const CodeStream& stream) {
    TokenVec out;
    out.reserve(stream.original_length);
    for (std::size_t i = 0; i < stream.blocks.size(); ++i) {
        const CodeBlock& b = stream.blocks[i];
        if (b.kind == CodeBlock::Kind::literal) {
            if (stream.vocab_size != 0 && b.literal >= stream.vocab_size)
                throw CodecError("block " + std::to_string(i) + ": literal outside vocabulary");
            out.push_back(b.literal);
            continue;
        }
        if (b.length == 0) throw CodecError("block " + std::to_string(i) + ": zero-length match");
        if (b.distance == 0 || b.distance > out.size())
            throw CodecError("block " + std::to_string(i) + ": distance " + std::to_string(b.distance) +
                             " exceeds " + std::to_string(out.size()) + " emitted tokens");
        const std::size_t from = out.size() - b.distance;
        for (std::size_t k = 0; k < b.length; ++k) out.push_back(out[from + k]);
    }
    return out;
}

/// Bits per token.
inline double compression_rate(const CodeStream& stream) {
    require(stream.original_length > 0, "compression rate of an empty input is undefined");
    return stream.total_bits / static_cast<double>(stream.original_length);
}

} // namespace lzpenalty
