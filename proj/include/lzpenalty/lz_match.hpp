#pragma once

// Sliding-window state of a simulated LZSS compressor over a causal token
// sequence, and the longest-suffix match queries the penalty is built from.
//
// Sequences are stored oldest -> newest. Distances count backward from the
// newest window token: an occurrence whose newest token is the last window
// token has distance 1.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "lzpenalty/types.hpp"

namespace lzpenalty {

struct Views {
    TokenSpan window;
    TokenSpan buffer;
};

/// Buffer is the newest min(B, n) tokens; window is the up-to-W tokens
/// immediately older than the buffer. Partial windows are returned as-is.
inline Views simulate_views(TokenSpan tokens, std::size_t window_capacity,
                            std::size_t buffer_capacity) {
    const std::size_t n = tokens.size();
    const std::size_t b = std::min(buffer_capacity, n);
    const std::size_t w = std::min(window_capacity, n - b);
    return {tokens.subspan(n - b - w, w), tokens.subspan(n - b, b)};
}

/// Owning causal context: token history plus the compressor geometry.
class Context {
public:
    Context(TokenVec tokens, std::size_t vocab_size, std::size_t window_capacity = 512,
            std::size_t buffer_capacity = 32)
        : tokens_(std::move(tokens)),
          vocab_size_(vocab_size),
          window_capacity_(window_capacity),
          buffer_capacity_(buffer_capacity) {
        require(window_capacity_ > 0 && buffer_capacity_ > 0, "capacities must be positive");
        require(buffer_capacity_ < window_capacity_, "buffer capacity must be below window capacity");
        check_vocab(tokens_, vocab_size_);
    }

    void push(Token t) {
        require(t < vocab_size_, "token outside vocabulary");
        tokens_.push_back(t);
    }

    Views views() const { return simulate_views(tokens_, window_capacity_, buffer_capacity_); }

    TokenSpan tokens() const { return tokens_; }
    std::size_t vocab_size() const { return vocab_size_; }
    std::size_t window_capacity() const { return window_capacity_; }
    std::size_t buffer_capacity() const { return buffer_capacity_; }

private:
    TokenVec tokens_;
    std::size_t vocab_size_;
    std::size_t window_capacity_;
    std::size_t buffer_capacity_;
};

struct MatchResult {
    std::size_t length = 0;
    std::size_t distance = 0; // 0 only when length == 0

    friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

enum class ExtensionSemantics {
    any_occurrence, // every occurrence of the matched suffix may extend
    canonical_only, // only the canonical (most recent) occurrence may extend
};

enum class MatcherKind { naive, indexed };

struct Extension {
    Token token;
    std::size_t distance; // distance of the newest token of the extended match

    friend bool operator==(const Extension&, const Extension&) = default;
};

struct ExtensionMap {
    MatchResult match;
    std::vector<Extension> entries; // sorted by token id

    std::optional<std::size_t> find(Token t) const {
        auto it = std::lower_bound(entries.begin(), entries.end(), t,
                                   [](const Extension& e, Token v) { return e.token < v; });
        if (it == entries.end() || it->token != t) return std::nullopt;
        return it->distance;
    }

    friend bool operator==(const ExtensionMap&, const ExtensionMap&) = default;
};

namespace detail {

// Number of trailing buffer tokens matching the window ending at index `end`.
inline std::size_t suffix_match_at(TokenSpan window, std::size_t end, TokenSpan buffer) {
    std::size_t k = 0;
    const std::size_t limit = std::min(buffer.size(), end + 1);
    while (k < limit && window[end - k] == buffer[buffer.size() - 1 - k]) ++k;
    return k;
}

// Given all candidate end positions (newest first) and the match length,
// collect followers of every suitable occurrence.
template <class EndRange>
ExtensionMap collect_extensions(TokenSpan window, TokenSpan buffer, MatchResult match,
                                const EndRange& ends, ExtensionSemantics semantics) {
    ExtensionMap out{match, {}};
    if (match.length == 0) return out;
    const std::size_t n = window.size();
    auto add = [&](std::size_t end) {
        // d == 1 occurrences have no in-window follower.
        if (end + 1 >= n) return;
        const Token follower = window[end + 1];
        const std::size_t delta = n - end - 1;
        auto it = std::lower_bound(out.entries.begin(), out.entries.end(), follower,
                                   [](const Extension& e, Token v) { return e.token < v; });
        if (it != out.entries.end() && it->token == follower) {
            it->distance = std::min(it->distance, delta);
        } else {
            out.entries.insert(it, Extension{follower, delta});
        }
    };
    if (semantics == ExtensionSemantics::canonical_only) {
        add(n - match.distance);
        return out;
    }
    for (std::size_t end : ends) {
        if (suffix_match_at(window, end, buffer) >= match.length) add(end);
    }
    return out;
}

struct AllPositionsNewestFirst {
    std::size_t n;
    struct iterator {
        std::size_t i;
        std::size_t operator*() const { return i - 1; }
        iterator& operator++() {
            --i;
            return *this;
        }
        bool operator!=(const iterator& o) const { return i != o.i; }
    };
    iterator begin() const { return {n}; }
    iterator end() const { return {0}; }
};

} // namespace detail

/// Longest suffix of `buffer` occurring contiguously inside `window`.
/// Ties between equal-length occurrences go to the most recent one.
inline MatchResult find_longest_suffix_match(TokenSpan window, TokenSpan buffer) {
    MatchResult best;
    if (window.empty() || buffer.empty()) return best;
    const std::size_t n = window.size();
    for (std::size_t end = n; end-- > 0;) {
        const std::size_t k = detail::suffix_match_at(window, end, buffer);
        if (k > best.length) {
            best = {k, n - end};
            if (k == buffer.size()) break;
        }
    }
    return best;
}

/// Tokens that extend the current longest match by one, each with the
/// smallest distance at which the extended match occurs.
inline ExtensionMap extension_map(TokenSpan window, TokenSpan buffer,
                                  ExtensionSemantics semantics = ExtensionSemantics::any_occurrence) {
    const MatchResult match = find_longest_suffix_match(window, buffer);
    return detail::collect_extensions(window, buffer, match,
                                      detail::AllPositionsNewestFirst{window.size()}, semantics);
}

/// Most recent occurrence distance of every token present in the window.
inline std::map<Token, std::size_t> occurrence_distances(TokenSpan window) {
    std::map<Token, std::size_t> out;
    const std::size_t n = window.size();
    for (std::size_t i = n; i-- > 0;) out.try_emplace(window[i], n - i);
    return out;
}

/// Per-token occurrence lists over a fixed window. Produces results
/// identical to the naive scans while only visiting positions that hold the
/// newest buffer token.
class WindowIndex {
public:
    explicit WindowIndex(TokenSpan window) : window_(window) {
        for (std::size_t i = window.size(); i-- > 0;) positions_[window[i]].push_back(i);
    }

    MatchResult longest_match(TokenSpan buffer) const {
        MatchResult best;
        const auto* ends = ends_for(buffer);
        if (ends == nullptr) return best;
        const std::size_t n = window_.size();
        for (std::size_t end : *ends) {
            const std::size_t k = detail::suffix_match_at(window_, end, buffer);
            if (k > best.length) {
                best = {k, n - end};
                if (k == buffer.size()) break;
            }
        }
        return best;
    }

    ExtensionMap extensions(TokenSpan buffer,
                            ExtensionSemantics semantics = ExtensionSemantics::any_occurrence) const {
        const MatchResult match = longest_match(buffer);
        const auto* ends = ends_for(buffer);
        if (ends == nullptr) return {match, {}};
        return detail::collect_extensions(window_, buffer, match, *ends, semantics);
    }

    /// Distance of the most recent occurrence of `t`, if present.
    std::optional<std::size_t> recent_distance(Token t) const {
        auto it = positions_.find(t);
        if (it == positions_.end()) return std::nullopt;
        return window_.size() - it->second.front();
    }

private:
    const std::vector<std::size_t>* ends_for(TokenSpan buffer) const {
        if (buffer.empty() || window_.empty()) return nullptr;
        auto it = positions_.find(buffer.back());
        return it == positions_.end() ? nullptr : &it->second;
    }

    TokenSpan window_;
    std::unordered_map<Token, std::vector<std::size_t>> positions_; // newest first
};

inline ExtensionMap extension_map(TokenSpan window, TokenSpan buffer, ExtensionSemantics semantics,
                                  MatcherKind matcher) {
    if (matcher == MatcherKind::indexed) return WindowIndex(window).extensions(buffer, semantics);
    return extension_map(window, buffer, semantics);
}

} // namespace lzpenalty
