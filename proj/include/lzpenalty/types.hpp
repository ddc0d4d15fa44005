#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lzpenalty {

using Token = std::uint32_t;
using TokenSpan = std::span<const Token>;
using TokenVec = std::vector<Token>;

/// Raised when a caller violates an operation's preconditions
/// (vocabulary overflow, bad capacities, mismatched lengths).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw UsageError(what);
}

inline void check_vocab(TokenSpan tokens, std::size_t vocab_size) {
    require(vocab_size > 0, "vocab_size must be positive");
    for (Token t : tokens) {
        if (t >= vocab_size) {
            throw UsageError("token id " + std::to_string(t) + " outside vocabulary of size " +
                             std::to_string(vocab_size));
        }
    }
}

} // namespace lzpenalty
