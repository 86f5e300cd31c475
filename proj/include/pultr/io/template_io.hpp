#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pultr/functors/template.hpp"
#include "pultr/io/structure_io.hpp"
#include "pultr/io/term_io.hpp"

namespace pultr::io {

// Template files reuse the structure body syntax:
//
//   file     := "source" items NL "target" items NL "P" NL body section*
//   section  := "Q" SYMBOL NL body
//             | "epsilon" SYMBOL INDEX NL (ID ID NL)* "end" NL
//             | "term" SYMBOL TERM NL
//
// Each Q and epsilon block must appear once per target symbol and index, the
// epsilon blocks after their Q; the term lines are optional.  An epsilon block
// maps every element of P, one "p q" pair per line.

namespace detail {

inline std::size_t symbol_of(const Line& line, const Signature& target) {
    if (line.tokens.size() < 2) syntax(line.number, line.tokens.front().column, "missing relation symbol");
    const auto& tok = line.tokens[1];
    auto k = target.find(tok.text);
    if (!k) throw InvalidTemplate(at(line.number, tok.column) + "'" + tok.text + "' is not a target symbol");
    return *k;
}

inline ElementMap epsilon_block(LineReader& in, const Structure& p, const Structure& q, const std::string& label) {
    ElementMap map(p.size(), 0);
    std::vector<bool> set(p.size(), false);
    for (;;) {
        if (!in.peek()) syntax(in.last_line(), 1, "missing 'end' for " + label);
        const Line& line = in.next();
        if (line.head() == "end") {
            if (line.tokens.size() != 1) syntax(line.number, line.tokens[1].column, "unexpected token after 'end'");
            for (Index a = 0; a < p.size(); ++a)
                if (!set[a]) throw InvalidTemplate(at(line.number, 1) + label + " does not map '" + p.id(a) + "'");
            return map;
        }
        if (line.tokens.size() != 2) syntax(line.number, line.tokens.front().column, "expected 'p q'");
        auto a = p.find(line.tokens[0].text);
        if (!a)
            throw InvalidTemplate(at(line.number, line.tokens[0].column) + "'" + line.head() + "' is not in P");
        auto b = q.find(line.tokens[1].text);
        if (!b)
            throw InvalidTemplate(at(line.number, line.tokens[1].column) + "'" + line.tokens[1].text +
                                  "' is not in Q");
        if (set[*a]) throw InvalidTemplate(at(line.number, line.tokens[0].column) + "'" + line.head() + "' mapped twice");
        set[*a] = true;
        map[*a] = *b;
    }
}

}  // namespace detail

inline PultrTemplate parse_template(std::string_view text) {
    detail::LineReader in(text);
    PultrTemplate t;
    t.source = detail::signature_items(detail::expect_keyword(in, "source"));
    t.target = detail::signature_items(detail::expect_keyword(in, "target"));
    {
        const Line& head = detail::expect_keyword(in, "P");
        if (head.tokens.size() != 1) detail::syntax(head.number, head.tokens[1].column, "unexpected token after 'P'");
    }
    t.p = detail::structure_body(in, t.source);

    const std::size_t n = t.target.size();
    std::vector<std::optional<Structure>> q(n);
    std::vector<std::vector<std::optional<ElementMap>>> eps(n);
    for (std::size_t k = 0; k < n; ++k) eps[k].resize(t.target[k].arity);
    std::vector<std::optional<Term>> terms(n);
    bool any_term = false;

    while (const Line* peek = in.peek()) {
        const auto& word = peek->head();
        if (word == "Q") {
            const Line& head = in.next();
            auto k = detail::symbol_of(head, t.target);
            if (head.tokens.size() != 2) detail::syntax(head.number, head.tokens[2].column, "expected 'Q SYMBOL'");
            if (q[k]) throw InvalidTemplate(detail::at(head.number, 1) + "second Q block for " + t.target[k].name);
            q[k] = detail::structure_body(in, t.source);
        } else if (word == "epsilon") {
            const Line& head = in.next();
            auto k = detail::symbol_of(head, t.target);
            if (head.tokens.size() != 3) detail::syntax(head.number, head.tokens.front().column, "expected 'epsilon SYMBOL INDEX'");
            const auto& idx = head.tokens[2];
            std::size_t i = 0;
            if (idx.text.size() > 6 || idx.text.empty() ||
                !std::all_of(idx.text.begin(), idx.text.end(), [](char c) { return c >= '0' && c <= '9'; }))
                detail::syntax(head.number, idx.column, "index must be a number");
            i = std::stoul(idx.text);
            if (i == 0 || i > t.target[k].arity)
                throw InvalidTemplate(detail::at(head.number, idx.column) + "index out of range for " + t.target[k].name);
            if (!q[k]) throw InvalidTemplate(detail::at(head.number, 1) + "epsilon block before Q " + t.target[k].name);
            if (eps[k][i - 1])
                throw InvalidTemplate(detail::at(head.number, 1) + "second epsilon block for " + t.target[k].name +
                                      " " + idx.text);
            eps[k][i - 1] = detail::epsilon_block(in, t.p, *q[k], "epsilon " + t.target[k].name + " " + idx.text);
        } else if (word == "term") {
            const Line& head = in.next();
            auto k = detail::symbol_of(head, t.target);
            if (head.tokens.size() < 3) detail::syntax(head.number, head.tokens.front().column, "missing term");
            if (terms[k]) throw InvalidTemplate(detail::at(head.number, 1) + "second term for " + t.target[k].name);
            const auto column = head.tokens[2].column;
            terms[k] = TermParser(std::string_view(head.text).substr(column - 1), head.number, column).parse();
            any_term = true;
        } else {
            detail::syntax(peek->number, peek->tokens.front().column, "unexpected '" + word + "'");
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        const auto& name = t.target[k].name;
        if (!q[k]) throw InvalidTemplate(detail::at(in.last_line(), 1) + "missing Q block for " + name);
        t.q.push_back(std::move(*q[k]));
        std::vector<ElementMap> maps;
        for (std::size_t i = 0; i < eps[k].size(); ++i) {
            if (!eps[k][i])
                throw InvalidTemplate(detail::at(in.last_line(), 1) + "missing epsilon " + name + " " +
                                      std::to_string(i + 1));
            maps.push_back(std::move(*eps[k][i]));
        }
        t.epsilon.push_back(std::move(maps));
    }
    if (any_term) t.terms = std::move(terms);
    validate_template(t);
    return t;
}

inline std::string print_template(const PultrTemplate& t) {
    std::string out = "source" + detail::signature_items(t.source) + "\n";
    out += "target" + detail::signature_items(t.target) + "\n";
    out += "P\n" + detail::structure_body(t.p);
    for (std::size_t k = 0; k < t.target.size(); ++k)
        out += "Q " + t.target[k].name + "\n" + detail::structure_body(t.q[k]);
    for (std::size_t k = 0; k < t.target.size(); ++k)
        for (std::size_t i = 0; i < t.epsilon[k].size(); ++i) {
            out += "epsilon " + t.target[k].name + " " + std::to_string(i + 1) + "\n";
            for (Index a = 0; a < t.p.size(); ++a) out += t.p.id(a) + " " + t.q[k].id(t.epsilon[k][i][a]) + "\n";
            out += "end\n";
        }
    for (std::size_t k = 0; k < t.terms.size(); ++k)
        if (t.terms[k]) out += "term " + t.target[k].name + " " + print_term(*t.terms[k]) + "\n";
    return out;
}

}  // namespace pultr::io
