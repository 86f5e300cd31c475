#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "pultr/core/error.hpp"
#include "pultr/terms/term.hpp"

namespace pultr::io {

// Grammar (whitespace allowed between tokens):
//   term := "vertex"
//         | "edge_" SYMBOL "(" term ("," term)* ")"
//         | "pr_" DIGITS "(" term ")"
class TermParser {
public:
    explicit TermParser(std::string_view text, std::size_t line = 1, std::size_t column = 1)
        : text_(text), line_(line), column_(column) {}

    Term parse() {
        Term t = term();
        skip_space();
        if (pos_ < text_.size()) fail("unexpected trailing input");
        return t;
    }

private:
    Term term() {
        skip_space();
        const auto word_line = line_, word_column = column_;
        std::string word = identifier();
        if (word == "vertex") return Term::vertex();
        try {
            if (word.starts_with("edge_")) {
                std::string symbol = word.substr(5);
                if (!is_symbol_name(symbol) || symbol == "V") fail_at(word_line, word_column, "bad relation symbol");
                expect('(');
                std::vector<Term> children{term()};
                while (peek() == ',') {
                    expect(',');
                    children.push_back(term());
                }
                expect(')');
                return Term::edge(std::move(symbol), std::move(children));
            }
            if (word.starts_with("pr_")) {
                std::string digits = word.substr(3);
                if (digits.empty() || digits.size() > 9 ||
                    !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
                    fail_at(word_line, word_column, "pr_ needs a positive index");
                expect('(');
                Term child = term();
                expect(')');
                return Term::pr(std::stoul(digits), std::move(child));
            }
        } catch (const MalformedTerm& e) {
            fail_at(word_line, word_column, e.what());
        }
        if (word.empty()) fail("expected a term");
        fail_at(word_line, word_column, "unknown term constructor '" + word + "'");
    }

    std::string identifier() {
        std::string out;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            out += advance();
        return out;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
    }

    [[noreturn]] void fail(const std::string& message) { throw ParseError(message, line_, column_); }
    [[noreturn]] void fail_at(std::size_t line, std::size_t column, const std::string& message) {
        throw ParseError(message, line, column);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_, column_;
};

inline Term parse_term(std::string_view text) { return TermParser(text).parse(); }

inline std::string print_term(const Term& t) { return t.str(); }

}  // namespace pultr::io
