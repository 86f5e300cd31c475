#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pultr/core/error.hpp"

namespace pultr {

using Index = std::uint32_t;
using Tuple = std::vector<Index>;

// A map between domains given by element positions: map[a] is the image of a.
using ElementMap = std::vector<Index>;

struct Symbol {
    std::string name;
    std::size_t arity = 0;

    friend bool operator==(const Symbol&, const Symbol&) = default;
};

inline bool is_symbol_name(std::string_view name) {
    if (name.empty()) return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    });
}

// Ordered list of relation symbols.  "V" is reserved for the vertex sort of terms.
class Signature {
public:
    Signature() = default;

    Signature(std::initializer_list<Symbol> symbols) : Signature(std::vector<Symbol>(symbols)) {}

    explicit Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
        for (std::size_t k = 0; k < symbols_.size(); ++k) {
            const auto& s = symbols_[k];
            if (!is_symbol_name(s.name))
                throw InvalidStructure("relation symbol '" + s.name + "' is not alphanumeric");
            if (s.name == "V")
                throw InvalidStructure("'V' is reserved and cannot be a relation symbol");
            if (s.arity == 0)
                throw InvalidStructure("relation symbol '" + s.name + "' has arity 0");
            for (std::size_t j = 0; j < k; ++j)
                if (symbols_[j].name == s.name)
                    throw InvalidStructure("duplicate relation symbol '" + s.name + "'");
        }
    }

    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    const Symbol& operator[](std::size_t k) const { return symbols_.at(k); }
    const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
    auto begin() const noexcept { return symbols_.begin(); }
    auto end() const noexcept { return symbols_.end(); }

    std::optional<std::size_t> find(std::string_view name) const {
        for (std::size_t k = 0; k < symbols_.size(); ++k)
            if (symbols_[k].name == name) return k;
        return std::nullopt;
    }

    std::size_t index_of(std::string_view name) const {
        if (auto k = find(name)) return *k;
        throw SignatureMismatch("relation symbol '" + std::string(name) + "' is not in the signature");
    }

    bool contains(std::string_view name) const { return find(name).has_value(); }

    Signature with(Symbol extra) const {
        auto symbols = symbols_;
        symbols.push_back(std::move(extra));
        return Signature(std::move(symbols));
    }

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    std::vector<Symbol> symbols_;
};

// A finite relational structure.  Immutable once built; relations are kept
// as sorted, duplicate-free tuple lists over element positions.
class Structure {
public:
    Structure() = default;

    Structure(Signature signature, std::vector<std::string> domain,
              std::vector<std::vector<Tuple>> relations)
        : signature_(std::move(signature)), domain_(std::move(domain)), relations_(std::move(relations)) {
        relations_.resize(signature_.size());
        index_.reserve(domain_.size());
        for (Index a = 0; a < domain_.size(); ++a)
            if (!index_.emplace(domain_[a], a).second)
                throw InvalidStructure("duplicate element id '" + domain_[a] + "'");
        for (std::size_t k = 0; k < relations_.size(); ++k) {
            auto& rel = relations_[k];
            for (const auto& t : rel) {
                if (t.size() != signature_[k].arity)
                    throw InvalidStructure("tuple of wrong length in relation " + signature_[k].name);
                for (Index a : t)
                    if (a >= domain_.size())
                        throw InvalidStructure("tuple entry out of range in relation " + signature_[k].name);
            }
            std::sort(rel.begin(), rel.end());
            rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
        }
    }

    const Signature& signature() const noexcept { return signature_; }
    std::size_t size() const noexcept { return domain_.size(); }
    const std::vector<std::string>& domain() const noexcept { return domain_; }
    const std::string& id(Index a) const { return domain_.at(a); }

    std::optional<Index> find(std::string_view id) const {
        auto it = index_.find(std::string(id));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    Index index_of(std::string_view id) const {
        if (auto a = find(id)) return *a;
        throw InvalidStructure("element '" + std::string(id) + "' is not in the domain");
    }

    const std::vector<Tuple>& relation(std::size_t k) const { return relations_.at(k); }
    const std::vector<Tuple>& relation(std::string_view name) const { return relations_.at(signature_.index_of(name)); }
    const std::vector<std::vector<Tuple>>& relations() const noexcept { return relations_; }

    bool contains(std::size_t k, std::span<const Index> t) const {
        const auto& rel = relations_.at(k);
        return std::binary_search(rel.begin(), rel.end(), t,
                                  [](const auto& x, const auto& y) {
                                      return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
                                  });
    }

    // Position of a tuple within relation(k), if present.
    std::optional<std::size_t> position(std::size_t k, std::span<const Index> t) const {
        const auto& rel = relations_.at(k);
        auto it = std::lower_bound(rel.begin(), rel.end(), t, [](const auto& x, const auto& y) {
            return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
        });
        if (it == rel.end() || !std::equal(it->begin(), it->end(), t.begin(), t.end())) return std::nullopt;
        return static_cast<std::size_t>(it - rel.begin());
    }

    std::size_t tuple_count() const {
        std::size_t n = 0;
        for (const auto& rel : relations_) n += rel.size();
        return n;
    }

    friend bool operator==(const Structure& x, const Structure& y) {
        return x.signature_ == y.signature_ && x.domain_ == y.domain_ && x.relations_ == y.relations_;
    }

private:
    Signature signature_;
    std::vector<std::string> domain_;
    std::unordered_map<std::string, Index> index_;
    std::vector<std::vector<Tuple>> relations_;
};

// Incremental construction of a Structure.
class StructureBuilder {
public:
    explicit StructureBuilder(Signature signature)
        : signature_(std::move(signature)), relations_(signature_.size()) {}

    Index add_element(std::string id) {
        auto [it, inserted] = index_.emplace(id, static_cast<Index>(domain_.size()));
        if (!inserted) throw InvalidStructure("duplicate element id '" + id + "'");
        domain_.push_back(std::move(id));
        return it->second;
    }

    // Returns the existing position when the id is already present.
    Index ensure_element(const std::string& id) {
        if (auto it = index_.find(id); it != index_.end()) return it->second;
        return add_element(id);
    }

    void add_tuple(std::size_t k, Tuple t) { relations_.at(k).push_back(std::move(t)); }

    void add_tuple(std::string_view symbol, const std::vector<std::string>& ids) {
        Tuple t;
        t.reserve(ids.size());
        for (const auto& id : ids) {
            auto it = index_.find(id);
            if (it == index_.end()) throw InvalidStructure("element '" + id + "' is not in the domain");
            t.push_back(it->second);
        }
        add_tuple(signature_.index_of(symbol), std::move(t));
    }

    std::size_t size() const noexcept { return domain_.size(); }
    const Signature& signature() const noexcept { return signature_; }

    Structure build() && { return Structure(std::move(signature_), std::move(domain_), std::move(relations_)); }
    Structure build() const& { return Structure(signature_, domain_, relations_); }

private:
    Signature signature_;
    std::vector<std::string> domain_;
    std::unordered_map<std::string, Index> index_;
    std::vector<std::vector<Tuple>> relations_;
};

// Unchecked structure data, as read from text before validation.
struct RawStructure {
    Signature signature;
    std::vector<std::string> domain;
    std::vector<std::pair<std::string, std::vector<std::string>>> tuples;
};

struct Violation {
    std::string symbol;
    std::vector<std::string> tuple;
    std::string reason;
};

inline std::vector<Violation> validate(const RawStructure& raw) {
    std::vector<Violation> out;
    std::unordered_map<std::string, std::size_t> seen;
    for (const auto& id : raw.domain)
        if (++seen[id] == 2) out.push_back({"", {id}, "duplicate element id '" + id + "'"});
    for (const auto& [symbol, tuple] : raw.tuples) {
        auto k = raw.signature.find(symbol);
        if (!k) {
            out.push_back({symbol, tuple, "symbol '" + symbol + "' is not in the signature"});
            continue;
        }
        if (tuple.size() != raw.signature[*k].arity)
            out.push_back({symbol, tuple,
                           "tuple has length " + std::to_string(tuple.size()) + ", arity is " +
                               std::to_string(raw.signature[*k].arity)});
        for (const auto& id : tuple)
            if (!seen.contains(id)) out.push_back({symbol, tuple, "'" + id + "' is not in the domain"});
    }
    return out;
}

inline Structure build_structure(const RawStructure& raw) {
    if (auto violations = validate(raw); !violations.empty())
        throw InvalidStructure(violations.front().reason);
    StructureBuilder b(raw.signature);
    for (const auto& id : raw.domain) b.add_element(id);
    for (const auto& [symbol, tuple] : raw.tuples) b.add_tuple(symbol, tuple);
    return std::move(b).build();
}

inline void require_same_signature(const Structure& a, const Structure& b) {
    if (a.signature() != b.signature()) throw SignatureMismatch("structures have different signatures");
}

inline std::vector<std::string> ids_of(const Structure& s, std::span<const Index> t) {
    std::vector<std::string> out;
    out.reserve(t.size());
    for (Index a : t) out.push_back(s.id(a));
    return out;
}

// "(a,b,c)"; a single entry is rendered bare.
inline std::string render_tuple(const std::vector<std::string>& ids) {
    if (ids.size() == 1) return ids.front();
    std::string out = "(";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ',';
        out += ids[i];
    }
    out += ')';
    return out;
}

}  // namespace pultr
