#pragma once

// Line-oriented tokenizer shared by the `.moore` and `.subst` parsers.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "moore/error.hpp"

namespace moore::detail {

struct Token {
    std::string text;
    std::size_t line;
    std::size_t column;
};

struct Line {
    std::size_t number;
    std::vector<Token> tokens;
};

/// Splits `text` into non-empty lines of whitespace-separated tokens with
/// `#` comments removed. Columns count bytes, starting at 1.
inline std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        ++number;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
            if (i >= raw.size()) break;
            std::size_t start = i;
            while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '\r') ++i;
            line.tokens.push_back({std::string(raw.substr(start, i - start)), number, start + 1});
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
        if (end == text.size()) break;
        pos = end + 1;
    }
    return lines;
}

[[noreturn]] inline void fail(const Token& at, const std::string& message) {
    throw ParseError(at.line, at.column, message);
}

/// Position just past the last token of a line, for "missing argument" errors.
inline Token end_of(const Line& line) {
    const Token& last = line.tokens.back();
    return {"", line.number, last.column + last.text.size()};
}

inline void expect_arity(const Line& line, std::size_t count, const char* usage) {
    if (line.tokens.size() < count) fail(end_of(line), std::string("expected: ") + usage);
    if (line.tokens.size() > count) fail(line.tokens[count], std::string("unexpected token, expected: ") + usage);
}

/// Parses a non-negative decimal integer token, or returns false.
inline bool parse_count(std::string_view s, std::size_t& out) {
    if (s.empty() || s.size() > 18) return false;
    std::size_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    out = v;
    return true;
}

} // namespace moore::detail
