#pragma once

// Token files: newline-separated unsigned integers, or raw bytes (V = 256).

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "lzpenalty/toy_lm.hpp"
#include "lzpenalty/types.hpp"

namespace lzpenalty {

enum class TokenFormat { bytes, ints };

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline TokenVec parse_int_tokens(const std::string& text) {
    TokenVec out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const char* b = line.data() + first;
        const char* e = line.data() + last + 1;
        Token v = 0;
        const auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr != e)
            throw FormatError("line " + std::to_string(line_no) + ": expected an unsigned integer token, got '" +
                              std::string(b, e) + "'");
        out.push_back(v);
    }
    return out;
}

inline TokenVec read_token_file(const std::string& path, TokenFormat format) {
    if (format == TokenFormat::bytes) return load_corpus(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read token file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_int_tokens(ss.str());
}

} // namespace lzpenalty
