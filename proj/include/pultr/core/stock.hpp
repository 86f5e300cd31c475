#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "pultr/core/structure.hpp"

namespace pultr::stock {

inline Signature digraph() { return Signature{{"E", 2}}; }

// One element "1", all relations empty.
inline Structure v1(const Signature& signature) { return Structure(signature, {"1"}, {}); }

// Elements "1".."k" related by a single tuple of `symbol`.
inline Structure s1(const Signature& signature, std::string_view symbol) {
    const auto k = signature.index_of(symbol);
    StructureBuilder b(signature);
    Tuple t;
    for (std::size_t i = 1; i <= signature[k].arity; ++i) t.push_back(b.add_element(std::to_string(i)));
    b.add_tuple(k, std::move(t));
    return std::move(b).build();
}

// Directed path with k edges on "0".."k".
inline Structure path(std::size_t k) {
    if (k < 1) throw PreconditionFailed("path length must be at least 1");
    StructureBuilder b(digraph());
    for (std::size_t i = 0; i <= k; ++i) b.add_element(std::to_string(i));
    for (Index i = 0; i < k; ++i) b.add_tuple(0, {i, i + 1});
    return std::move(b).build();
}

// The strict linear order on "1".."k".
inline Structure order(std::size_t k) {
    if (k < 1) throw PreconditionFailed("order size must be at least 1");
    StructureBuilder b(digraph());
    for (std::size_t i = 1; i <= k; ++i) b.add_element(std::to_string(i));
    for (Index i = 0; i < k; ++i)
        for (Index j = i + 1; j < k; ++j) b.add_tuple(0, {i, j});
    return std::move(b).build();
}

// Single vertex carrying a loop in every binary relation.
inline Structure loop(const Signature& signature = digraph()) {
    StructureBuilder b(signature);
    b.add_element("1");
    for (std::size_t k = 0; k < signature.size(); ++k) b.add_tuple(k, Tuple(signature[k].arity, 0));
    return std::move(b).build();
}

// Textual selector used by the command line: "V1", "S1:<SYM>", "P:<k>", "L:<k>".
inline Structure by_name(std::string_view spec, const Signature& signature = digraph()) {
    auto number = [&](std::string_view digits) {
        std::size_t k = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec != std::errc{} || ptr != digits.data() + digits.size())
            throw PreconditionFailed("bad size in stock structure '" + std::string(spec) + "'");
        return k;
    };
    if (spec == "V1") return v1(signature);
    if (spec.starts_with("S1:")) {
        auto symbol = spec.substr(3);
        if (!signature.contains(symbol))
            throw PreconditionFailed("symbol '" + std::string(symbol) + "' not in signature");
        return s1(signature, symbol);
    }
    if (spec.starts_with("P:")) return path(number(spec.substr(2)));
    if (spec.starts_with("L:")) return order(number(spec.substr(2)));
    throw PreconditionFailed("unknown stock structure '" + std::string(spec) + "'");
}

}  // namespace pultr::stock
