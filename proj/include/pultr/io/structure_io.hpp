#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pultr/core/error.hpp"
#include "pultr/core/structure.hpp"

namespace pultr::io {

// Structure files are line based; '#' starts a comment.
//
//   file   := "signature" (SYMBOL ":" ARITY)* NL body
//   body   := "domain" ID* NL block*
//   block  := "rel" SYMBOL NL (ID+ NL)* "end" NL
//
// The printer writes every relation of the signature, in signature order, and
// tuples in sorted order, so printing a parsed printout gives the same bytes.

struct Token {
    std::string text;
    std::size_t column = 1;
};

struct Line {
    std::size_t number = 0;
    // The line without its comment.
    std::string text;
    std::vector<Token> tokens;

    const std::string& head() const { return tokens.front().text; }
};

inline bool is_reserved_word(std::string_view w) {
    static const std::set<std::string_view> words{"signature", "domain", "rel", "end", "source", "target",
                                                  "P",         "Q",      "epsilon", "term"};
    return words.contains(w);
}

// Element ids must survive whitespace splitting and not read as keywords.
inline bool is_printable_id(std::string_view id) {
    if (id.empty() || is_reserved_word(id)) return false;
    return std::none_of(id.begin(), id.end(),
                        [](char c) { return c == '#' || std::isspace(static_cast<unsigned char>(c)); });
}

namespace detail {

[[noreturn]] inline void syntax(std::size_t line, std::size_t column, const std::string& message) {
    throw ParseError(message, line, column);
}

inline std::string at(std::size_t line, std::size_t column) {
    return std::to_string(line) + ":" + std::to_string(column) + ": ";
}

// Non-empty lines with comments removed, each split on whitespace.
class LineReader {
public:
    explicit LineReader(std::string_view text) {
        std::size_t number = 0, start = 0;
        while (start <= text.size()) {
            auto stop = text.find('\n', start);
            if (stop == std::string_view::npos) stop = text.size();
            ++number;
            auto raw = text.substr(start, stop - start);
            if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
            Line line{number, std::string(raw), {}};
            for (std::size_t i = 0; i < raw.size();) {
                if (std::isspace(static_cast<unsigned char>(raw[i]))) {
                    ++i;
                    continue;
                }
                std::size_t j = i;
                while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
                line.tokens.push_back({std::string(raw.substr(i, j - i)), i + 1});
                i = j;
            }
            if (!line.tokens.empty()) lines_.push_back(std::move(line));
            start = stop + 1;
        }
        // A final newline does not start another line.
        last_line_ = text.ends_with('\n') ? number - 1 : number;
    }

    bool done() const { return pos_ == lines_.size(); }
    const Line* peek() const { return done() ? nullptr : &lines_[pos_]; }
    const Line& next() {
        if (done()) syntax(last_line_, 1, "unexpected end of input");
        return lines_[pos_++];
    }
    std::size_t last_line() const { return last_line_; }

private:
    std::vector<Line> lines_;
    std::size_t pos_ = 0;
    std::size_t last_line_ = 0;
};

inline const Line& expect_keyword(LineReader& in, std::string_view keyword) {
    const Line* peek = in.peek();
    if (!peek) syntax(in.last_line(), 1, "expected '" + std::string(keyword) + "', found end of input");
    if (peek->head() != keyword)
        syntax(peek->number, peek->tokens.front().column,
               "expected '" + std::string(keyword) + "', found '" + peek->head() + "'");
    return in.next();
}

inline Signature signature_items(const Line& line) {
    std::vector<Symbol> symbols;
    for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        const auto& tok = line.tokens[i];
        auto colon = tok.text.find(':');
        if (colon == std::string::npos) syntax(line.number, tok.column, "expected SYMBOL:ARITY");
        auto name = tok.text.substr(0, colon), digits = tok.text.substr(colon + 1);
        if (!is_symbol_name(name)) syntax(line.number, tok.column, "relation symbol must be alphanumeric");
        if (digits.empty() || digits.size() > 6 ||
            !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
            syntax(line.number, tok.column + colon + 1, "arity must be a number");
        symbols.push_back({name, std::stoul(digits)});
    }
    try {
        return Signature(std::move(symbols));
    } catch (const InvalidStructure& e) {
        throw InvalidStructure(at(line.number, line.tokens.front().column) + e.what());
    }
}

// "domain" line and rel blocks, validated against the signature.
inline Structure structure_body(LineReader& in, const Signature& sig) {
    const Line& domain_line = expect_keyword(in, "domain");
    std::vector<std::string> domain;
    std::set<std::string> ids;
    for (std::size_t i = 1; i < domain_line.tokens.size(); ++i) {
        const auto& tok = domain_line.tokens[i];
        if (is_reserved_word(tok.text)) syntax(domain_line.number, tok.column, "'" + tok.text + "' is a keyword");
        if (!ids.insert(tok.text).second)
            throw InvalidStructure(at(domain_line.number, tok.column) + "duplicate element id '" + tok.text + "'");
        domain.push_back(tok.text);
    }
    std::vector<std::vector<Tuple>> relations(sig.size());
    std::vector<bool> seen(sig.size(), false);
    Structure shell(sig, domain, {});
    while (in.peek() && in.peek()->head() == "rel") {
        const Line& head = in.next();
        if (head.tokens.size() != 2) syntax(head.number, head.tokens.front().column, "expected 'rel SYMBOL'");
        const auto& sym = head.tokens[1];
        auto k = sig.find(sym.text);
        if (!k) throw InvalidStructure(at(head.number, sym.column) + "symbol '" + sym.text + "' is not in the signature");
        if (seen[*k]) throw InvalidStructure(at(head.number, sym.column) + "second block for '" + sym.text + "'");
        seen[*k] = true;
        for (;;) {
            const Line* peek = in.peek();
            if (!peek) syntax(in.last_line(), 1, "missing 'end' for rel " + sym.text);
            const Line& line = in.next();
            if (line.head() == "end") {
                if (line.tokens.size() != 1) syntax(line.number, line.tokens[1].column, "unexpected token after 'end'");
                break;
            }
            if (is_reserved_word(line.head()))
                syntax(line.number, line.tokens.front().column, "missing 'end' for rel " + sym.text);
            if (line.tokens.size() != sig[*k].arity)
                throw InvalidStructure(at(line.number, line.tokens.front().column) + "tuple has length " +
                                       std::to_string(line.tokens.size()) + ", arity of " + sym.text + " is " +
                                       std::to_string(sig[*k].arity));
            Tuple t;
            for (const auto& tok : line.tokens) {
                auto a = shell.find(tok.text);
                if (!a) throw InvalidStructure(at(line.number, tok.column) + "'" + tok.text + "' is not in the domain");
                t.push_back(*a);
            }
            relations[*k].push_back(std::move(t));
        }
    }
    return Structure(sig, std::move(domain), std::move(relations));
}

inline std::string signature_items(const Signature& sig) {
    std::string out;
    for (const auto& s : sig) out += " " + s.name + ":" + std::to_string(s.arity);
    return out;
}

inline std::string structure_body(const Structure& s) {
    std::string out = "domain";
    for (const auto& id : s.domain()) {
        if (!is_printable_id(id)) throw InvalidStructure("element id '" + id + "' cannot be written to a file");
        out += " " + id;
    }
    out += "\n";
    for (std::size_t k = 0; k < s.signature().size(); ++k) {
        out += "rel " + s.signature()[k].name + "\n";
        for (const auto& t : s.relation(k)) {
            for (std::size_t i = 0; i < t.size(); ++i) out += (i ? " " : "") + s.id(t[i]);
            out += "\n";
        }
        out += "end\n";
    }
    return out;
}

}  // namespace detail

inline Structure parse_structure(std::string_view text) {
    detail::LineReader in(text);
    const Line& head = detail::expect_keyword(in, "signature");
    auto sig = detail::signature_items(head);
    auto s = detail::structure_body(in, sig);
    if (const Line* extra = in.peek())
        detail::syntax(extra->number, extra->tokens.front().column, "unexpected '" + extra->head() + "'");
    return s;
}

inline std::string print_structure(const Structure& s) {
    return "signature" + detail::signature_items(s.signature()) + "\n" + detail::structure_body(s);
}

}  // namespace pultr::io
