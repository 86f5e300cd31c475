#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pultr/core/error.hpp"
#include "pultr/core/homomorphism.hpp"
#include "pultr/core/structure.hpp"

namespace pultr::oracle {

// All tuples over {0..n-1} of the given length, lexicographically.
inline std::vector<Tuple> tuple_space(std::size_t n, std::size_t length) {
    std::vector<Tuple> out;
    if (n == 0) return out;
    Tuple t(length, 0);
    while (true) {
        out.push_back(t);
        std::size_t i = length;
        while (i > 0 && ++t[i - 1] == n) t[--i] = 0;
        if (i == 0) break;
    }
    return out;
}

// Labeled structures on domain "1".."n", bit j of the counter selecting the
// j-th tuple of the concatenated tuple spaces (signature order).
inline void for_each_structure_of_size(const Signature& signature, std::size_t n,
                                       const std::function<bool(const Structure&)>& visit) {
    std::vector<std::string> domain;
    for (std::size_t i = 1; i <= n; ++i) domain.push_back(std::to_string(i));
    std::vector<std::pair<std::size_t, Tuple>> slots;
    for (std::size_t k = 0; k < signature.size(); ++k)
        for (auto& t : tuple_space(n, signature[k].arity)) slots.emplace_back(k, std::move(t));
    if (slots.size() >= 63) throw BudgetExceeded("too many candidate tuples to enumerate structures");
    const std::uint64_t count = std::uint64_t{1} << slots.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        std::vector<std::vector<Tuple>> relations(signature.size());
        for (std::size_t j = 0; j < slots.size(); ++j)
            if (mask >> j & 1) relations[slots[j].first].push_back(slots[j].second);
        if (!visit(Structure(signature, domain, std::move(relations)))) return;
    }
}

// Every labeled structure with at most n_max elements, by size then counter.
inline void for_each_structure(const Signature& signature, std::size_t n_max,
                               const std::function<bool(const Structure&)>& visit) {
    bool go = true;
    for (std::size_t n = 0; n <= n_max && go; ++n)
        for_each_structure_of_size(signature, n, [&](const Structure& s) { return go = visit(s); });
}

inline std::vector<Structure> enumerate_structures(const Signature& signature, std::size_t n_max) {
    std::vector<Structure> out;
    for_each_structure(signature, n_max, [&](const Structure& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

// Tries all |B|^|A| maps.
inline void for_each_map(std::size_t n, std::size_t m, const std::function<bool(const ElementMap&)>& visit) {
    if (n > 0 && m == 0) return;
    ElementMap f(n, 0);
    while (true) {
        if (!visit(f)) return;
        std::size_t i = n;
        while (i > 0 && ++f[i - 1] == m) f[--i] = 0;
        if (i == 0) return;
    }
}

inline bool brute_force_hom_exists(const Structure& a, const Structure& b) {
    bool found = false;
    for_each_map(a.size(), b.size(), [&](const ElementMap& f) { return !(found = is_hom(a, b, f)); });
    return found;
}

inline std::vector<ElementMap> brute_force_homs(const Structure& a, const Structure& b) {
    std::vector<ElementMap> out;
    for_each_map(a.size(), b.size(), [&](const ElementMap& f) {
        if (is_hom(a, b, f)) out.push_back(f);
        return true;
    });
    return out;
}

}  // namespace pultr::oracle
