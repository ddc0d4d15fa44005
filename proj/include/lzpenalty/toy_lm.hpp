#pragma once

// Desk-scale language models: a smoothed byte-level n-gram model and a
// synthetic "loop" model that degenerates under greedy decoding.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lzpenalty/types.hpp"

namespace lzpenalty {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raw bytes of a file as tokens in [0, 256).
inline TokenVec load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read corpus file '" + path + "'");
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error while reading corpus file '" + path + "'");
    TokenVec out;
    out.reserve(bytes.size());
    for (char c : bytes) out.push_back(static_cast<unsigned char>(c));
    return out;
}

template <class M>
concept LanguageModel = requires(const M& m, TokenSpan ctx) {
    { m.vocab_size() } -> std::convertible_to<std::size_t>;
    { m.next_pmf(ctx) } -> std::convertible_to<std::vector<double>>;
};

class NgramModel {
public:
    struct Row {
        std::vector<std::uint32_t> counts;
        std::uint64_t total = 0;
    };

    NgramModel(std::size_t order, std::size_t vocab_size, double epsilon)
        : order_(order), vocab_size_(vocab_size), epsilon_(epsilon) {
        require(order_ >= 1, "n-gram order must be >= 1");
        require(vocab_size_ >= 1, "vocab_size must be positive");
        require(epsilon_ > 0.0, "smoothing constant must be positive");
    }

    void observe(TokenSpan context, Token next) {
        Row& row = rows_[TokenVec(context.begin(), context.end())];
        if (row.counts.empty()) row.counts.assign(vocab_size_, 0);
        ++row.counts[next];
        ++row.total;
    }

    /// Add-epsilon smoothed conditional pmf. Contexts shorter than the order
    /// or never seen in training give the uniform pmf.
    std::vector<double> next_pmf(TokenSpan context) const {
        const double uniform = 1.0 / static_cast<double>(vocab_size_);
        if (context.size() < order_) return std::vector<double>(vocab_size_, uniform);
        const TokenSpan key = context.last(order_);
        auto it = rows_.find(TokenVec(key.begin(), key.end()));
        if (it == rows_.end()) return std::vector<double>(vocab_size_, uniform);
        const Row& row = it->second;
        const double denom = static_cast<double>(row.total) + epsilon_ * static_cast<double>(vocab_size_);
        std::vector<double> p(vocab_size_);
        for (std::size_t a = 0; a < vocab_size_; ++a) p[a] = (row.counts[a] + epsilon_) / denom;
        return p;
    }

    std::size_t order() const { return order_; }
    std::size_t vocab_size() const { return vocab_size_; }
    double epsilon() const { return epsilon_; }
    std::size_t context_count() const { return rows_.size(); }

private:
    std::size_t order_;
    std::size_t vocab_size_;
    double epsilon_;
    std::map<TokenVec, Row> rows_;
};

inline NgramModel train_ngram(TokenSpan tokens, std::size_t order, double epsilon = 0.1,
                              std::size_t vocab_size = 256) {
    check_vocab(tokens, vocab_size);
    require(tokens.size() > order, "corpus must be longer than the n-gram order");
    NgramModel m(order, vocab_size, epsilon);
    for (std::size_t i = order; i < tokens.size(); ++i) m.observe(tokens.subspan(i - order, order), tokens[i]);
    return m;
}

/// Mass `repeat_mass` on the previous token, the rest spread uniformly.
class LoopModel {
public:
    explicit LoopModel(double repeat_mass, std::size_t vocab_size = 256)
        : repeat_mass_(repeat_mass), vocab_size_(vocab_size) {
        require(repeat_mass_ > 0.0 && repeat_mass_ < 1.0, "loop repeat mass must be in (0, 1)");
        require(vocab_size_ >= 2, "loop model needs at least two tokens");
    }

    std::vector<double> next_pmf(TokenSpan context) const {
        if (context.empty()) return std::vector<double>(vocab_size_, 1.0 / static_cast<double>(vocab_size_));
        require(context.back() < vocab_size_, "context token outside vocabulary");
        std::vector<double> p(vocab_size_, (1.0 - repeat_mass_) / static_cast<double>(vocab_size_ - 1));
        p[context.back()] = repeat_mass_;
        return p;
    }

    double repeat_mass() const { return repeat_mass_; }
    std::size_t vocab_size() const { return vocab_size_; }

private:
    double repeat_mass_;
    std::size_t vocab_size_;
};

/// Either toy model, selected at runtime from a spec string.
class AnyModel {
public:
    AnyModel(NgramModel m) : impl_(std::move(m)) {}
    AnyModel(LoopModel m) : impl_(std::move(m)) {}

    std::size_t vocab_size() const {
        return std::visit([](const auto& m) { return m.vocab_size(); }, impl_);
    }
    std::vector<double> next_pmf(TokenSpan ctx) const {
        return std::visit([&](const auto& m) { return m.next_pmf(ctx); }, impl_);
    }
    bool is_ngram() const { return std::holds_alternative<NgramModel>(impl_); }

private:
    std::variant<NgramModel, LoopModel> impl_;
};

namespace detail {

inline double parse_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("invalid " + what + " '" + s + "'");
    return v;
}

inline std::size_t parse_size(const std::string& s, const std::string& what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw UsageError("invalid " + what + " '" + s + "'");
    return static_cast<std::size_t>(std::stoull(s));
}

} // namespace detail

/// `ngram:<order>:<corpus path>` or `loop:<p>[:<vocab>]`.
inline AnyModel parse_model_spec(const std::string& spec, double epsilon = 0.1) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "loop") {
        const auto c2 = rest.find(':');
        const double p = detail::parse_double(rest.substr(0, c2), "loop repeat mass");
        const std::size_t vocab = c2 == std::string::npos ? 256 : detail::parse_size(rest.substr(c2 + 1), "loop vocab");
        return LoopModel(p, vocab);
    }
    if (kind == "ngram") {
        const auto c2 = rest.find(':');
        if (c2 == std::string::npos) throw UsageError("model spec '" + spec + "' must be ngram:<order>:<corpus>");
        const std::size_t order = detail::parse_size(rest.substr(0, c2), "n-gram order");
        const TokenVec corpus = load_corpus(rest.substr(c2 + 1));
        return train_ngram(corpus, order, epsilon);
    }
    throw UsageError("unknown model spec '" + spec + "' (expected ngram:<order>:<corpus> or loop:<p>)");
}

} // namespace lzpenalty
