#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pultr/core/structure.hpp"

namespace pultr {

inline bool is_hom(const Structure& source, const Structure& target, std::span<const Index> map) {
    require_same_signature(source, target);
    if (map.size() != source.size()) return false;
    for (Index b : map)
        if (b >= target.size()) return false;
    Tuple image;
    for (std::size_t k = 0; k < source.signature().size(); ++k) {
        for (const auto& t : source.relation(k)) {
            image.clear();
            for (Index a : t) image.push_back(map[a]);
            if (!target.contains(k, image)) return false;
        }
    }
    return true;
}

// The coordinatewise action of a homomorphism on one relation: entry j is the
// position in R^target of the image of the j-th tuple of R^source.
inline std::vector<std::size_t> edge_action(const Structure& source, const Structure& target,
                                            std::span<const Index> map, std::string_view symbol) {
    require_same_signature(source, target);
    const std::size_t k = source.signature().index_of(symbol);
    std::vector<std::size_t> out;
    Tuple image;
    for (const auto& t : source.relation(k)) {
        image.clear();
        for (Index a : t) image.push_back(map[a]);
        auto pos = target.position(k, image);
        if (!pos) throw PreconditionFailed("map does not preserve relation " + std::string(symbol));
        out.push_back(*pos);
    }
    return out;
}

// (outer ∘ inner)(a) = outer(inner(a))
inline ElementMap compose(std::span<const Index> outer, std::span<const Index> inner) {
    ElementMap out;
    out.reserve(inner.size());
    for (Index a : inner) out.push_back(outer[a]);
    return out;
}

// True iff map is a bijection carrying every relation of source exactly onto
// the corresponding relation of target.
inline bool is_isomorphism(const Structure& source, const Structure& target, std::span<const Index> map) {
    if (source.signature() != target.signature() || source.size() != target.size()) return false;
    std::vector<bool> hit(target.size(), false);
    for (Index b : map) {
        if (b >= target.size() || hit[b]) return false;
        hit[b] = true;
    }
    if (map.size() != source.size()) return false;
    for (std::size_t k = 0; k < source.signature().size(); ++k)
        if (source.relation(k).size() != target.relation(k).size()) return false;
    return is_hom(source, target, map);
}

// Backtracking search for homomorphisms with arc-consistency propagation.
// Domains are bitsets over the target; binary relations propagate through
// adjacency bitsets, other arities through a scan of the target relation.
class HomSolver {
public:
    using Fixed = std::vector<std::optional<Index>>;

    HomSolver(const Structure& source, const Structure& target)
        : source_(source), target_(target), n_(source.size()), m_(target.size()),
          words_((target.size() + 63) / 64) {
        require_same_signature(source, target);
        const auto& sig = source.signature();
        watch_.resize(n_);
        adjacency_.resize(sig.size());
        for (std::size_t k = 0; k < sig.size(); ++k) {
            if (sig[k].arity == 2 && !source.relation(k).empty()) build_adjacency(k);
            for (const auto& t : source.relation(k)) {
                const std::size_t c = constraints_.size();
                constraints_.push_back({k, t});
                auto vars = t;
                std::sort(vars.begin(), vars.end());
                vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
                for (Index x : vars) watch_[x].push_back(c);
            }
        }
    }

    std::optional<ElementMap> find(const Fixed& fixed = {}) const {
        std::optional<ElementMap> found;
        search(fixed, [&](const ElementMap& f) {
            found = f;
            return false;
        });
        return found;
    }

    bool exists(const Fixed& fixed = {}) const { return find(fixed).has_value(); }

    // Calls visit on every homomorphism until it returns false.
    void for_each(const std::function<bool(const ElementMap&)>& visit, const Fixed& fixed = {}) const {
        search(fixed, visit);
    }

    std::vector<ElementMap> all(const Fixed& fixed = {}) const {
        std::vector<ElementMap> out;
        search(fixed, [&](const ElementMap& f) {
            out.push_back(f);
            return true;
        });
        return out;
    }

private:
    struct Constraint {
        std::size_t symbol;
        Tuple vars;
    };

    struct Adjacency {
        std::vector<std::uint64_t> forward;   // forward[b] row: c with (b, c)
        std::vector<std::uint64_t> backward;  // backward[c] row: b with (b, c)
        std::vector<std::uint64_t> loops;
    };

    using Domains = std::vector<std::uint64_t>;

    void build_adjacency(std::size_t k) {
        auto& adj = adjacency_[k];
        adj.forward.assign(m_ * words_, 0);
        adj.backward.assign(m_ * words_, 0);
        adj.loops.assign(words_, 0);
        for (const auto& t : target_.relation(k)) {
            set_bit(&adj.forward[t[0] * words_], t[1]);
            set_bit(&adj.backward[t[1] * words_], t[0]);
            if (t[0] == t[1]) set_bit(adj.loops.data(), t[0]);
        }
    }

    static void set_bit(std::uint64_t* row, Index b) { row[b / 64] |= std::uint64_t{1} << (b % 64); }
    static bool test_bit(const std::uint64_t* row, Index b) { return (row[b / 64] >> (b % 64)) & 1U; }

    std::uint64_t* dom(Domains& d, Index x) const { return &d[x * words_]; }
    const std::uint64_t* dom(const Domains& d, Index x) const { return &d[x * words_]; }

    std::size_t count(const Domains& d, Index x) const {
        std::size_t c = 0;
        for (std::size_t w = 0; w < words_; ++w) c += std::popcount(d[x * words_ + w]);
        return c;
    }

    // Intersects D(x) with mask; reports whether D(x) changed.  Sets wiped on empty.
    bool restrict(Domains& d, Index x, const std::uint64_t* mask, bool& wiped) const {
        bool changed = false, any = false;
        auto* row = dom(d, x);
        for (std::size_t w = 0; w < words_; ++w) {
            const auto next = row[w] & mask[w];
            changed |= next != row[w];
            row[w] = next;
            any |= next != 0;
        }
        wiped = !any;
        return changed;
    }

    // Revises the domains of one constraint.  Returns false on a wipe-out; pushes
    // variables whose domains shrank into changed.
    bool revise(Domains& d, const Constraint& c, std::vector<Index>& changed) const {
        const auto& t = c.vars;
        const std::size_t arity = t.size();
        std::vector<std::uint64_t> support(arity * words_, 0);
        bool wiped = false;

        if (arity == 2 && !adjacency_[c.symbol].forward.empty()) {
            const auto& adj = adjacency_[c.symbol];
            const Index x = t[0], y = t[1];
            if (x == y) {
                if (restrict(d, x, adj.loops.data(), wiped)) changed.push_back(x);
                return !wiped;
            }
            auto* sy = &support[0];
            const auto* dx = dom(d, x);
            for (std::size_t w = 0; w < words_; ++w)
                for (auto bits = dx[w]; bits; bits &= bits - 1) {
                    const Index b = static_cast<Index>(w * 64 + std::countr_zero(bits));
                    const auto* row = &adj.forward[b * words_];
                    for (std::size_t v = 0; v < words_; ++v) sy[v] |= row[v];
                }
            if (restrict(d, y, sy, wiped)) changed.push_back(y);
            if (wiped) return false;
            auto* sx = &support[words_];
            const auto* dy = dom(d, y);
            for (std::size_t w = 0; w < words_; ++w)
                for (auto bits = dy[w]; bits; bits &= bits - 1) {
                    const Index c2 = static_cast<Index>(w * 64 + std::countr_zero(bits));
                    const auto* row = &adj.backward[c2 * words_];
                    for (std::size_t v = 0; v < words_; ++v) sx[v] |= row[v];
                }
            if (restrict(d, x, sx, wiped)) changed.push_back(x);
            return !wiped;
        }

        for (const auto& image : target_.relation(c.symbol)) {
            bool ok = true;
            for (std::size_t i = 0; i < arity && ok; ++i) {
                ok = test_bit(dom(d, t[i]), image[i]);
                for (std::size_t j = 0; j < i && ok; ++j)
                    if (t[j] == t[i] && image[j] != image[i]) ok = false;
            }
            if (!ok) continue;
            for (std::size_t i = 0; i < arity; ++i) set_bit(&support[i * words_], image[i]);
        }
        for (std::size_t i = 0; i < arity; ++i) {
            if (restrict(d, t[i], &support[i * words_], wiped)) changed.push_back(t[i]);
            if (wiped) return false;
        }
        return true;
    }

    bool propagate(Domains& d, std::vector<std::size_t> queue) const {
        std::vector<bool> queued(constraints_.size(), false);
        for (auto c : queue) queued[c] = true;
        std::vector<Index> changed;
        std::size_t head = 0;
        while (head < queue.size()) {
            const auto c = queue[head++];
            queued[c] = false;
            changed.clear();
            if (!revise(d, constraints_[c], changed)) return false;
            for (Index x : changed)
                for (auto c2 : watch_[x])
                    if (!queued[c2]) {
                        queued[c2] = true;
                        queue.push_back(c2);
                    }
            if (head > 4096 && head * 2 > queue.size()) {
                queue.erase(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(head));
                head = 0;
            }
        }
        return true;
    }

    template <class Visit>
    void search(const Fixed& fixed, Visit&& visit) const {
        if (n_ == 0) {
            visit(ElementMap{});
            return;
        }
        if (m_ == 0) return;
        Domains d(n_ * words_, 0);
        for (Index x = 0; x < n_; ++x) {
            auto* row = dom(d, x);
            if (x < fixed.size() && fixed[x]) {
                if (*fixed[x] >= m_) return;
                set_bit(row, *fixed[x]);
            } else {
                for (Index b = 0; b < m_; ++b) set_bit(row, b);
            }
        }
        std::vector<std::size_t> all(constraints_.size());
        for (std::size_t c = 0; c < all.size(); ++c) all[c] = c;
        if (!propagate(d, std::move(all))) return;
        bool stop = false;
        descend(d, visit, stop);
    }

    template <class Visit>
    void descend(Domains& d, Visit& visit, bool& stop) const {
        Index best = 0;
        std::size_t best_size = 0;
        for (Index x = 0; x < n_; ++x) {
            const auto s = count(d, x);
            if (s > 1 && (best_size == 0 || s < best_size ||
                          (s == best_size && watch_[x].size() > watch_[best].size()))) {
                best = x;
                best_size = s;
            }
        }
        if (best_size == 0) {
            ElementMap f(n_);
            for (Index x = 0; x < n_; ++x) {
                const auto* row = dom(d, x);
                for (std::size_t w = 0; w < words_; ++w)
                    if (row[w]) {
                        f[x] = static_cast<Index>(w * 64 + std::countr_zero(row[w]));
                        break;
                    }
            }
            if (!visit(f)) stop = true;
            return;
        }
        std::vector<Index> values;
        const auto* row = dom(d, best);
        for (std::size_t w = 0; w < words_; ++w)
            for (auto bits = row[w]; bits; bits &= bits - 1)
                values.push_back(static_cast<Index>(w * 64 + std::countr_zero(bits)));
        for (Index b : values) {
            Domains next = d;
            auto* r = dom(next, best);
            std::fill(r, r + words_, 0);
            set_bit(r, b);
            if (propagate(next, watch_[best])) descend(next, visit, stop);
            if (stop) return;
        }
    }

    const Structure& source_;
    const Structure& target_;
    std::size_t n_, m_, words_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<std::size_t>> watch_;
    std::vector<Adjacency> adjacency_;
};

inline std::optional<ElementMap> find_hom(const Structure& a, const Structure& b) { return HomSolver(a, b).find(); }

inline bool hom_exists(const Structure& a, const Structure& b) { return HomSolver(a, b).exists(); }

// hom(a, b), ordered lexicographically by image vector.
inline std::vector<ElementMap> enumerate_homs(const Structure& a, const Structure& b) {
    auto homs = HomSolver(a, b).all();
    std::sort(homs.begin(), homs.end());
    return homs;
}

inline bool hom_equivalent(const Structure& a, const Structure& b) { return hom_exists(a, b) && hom_exists(b, a); }

struct DisjointUnion {
    Structure structure;
    std::vector<ElementMap> injections;
};

// Coproduct; element ids become "<input index>:<id>".
inline DisjointUnion disjoint_union(std::span<const Structure> parts, const Signature& signature) {
    for (const auto& p : parts)
        if (p.signature() != signature) throw SignatureMismatch("disjoint union of dissimilar structures");
    StructureBuilder b(signature);
    DisjointUnion out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        ElementMap inj;
        for (const auto& id : parts[i].domain()) inj.push_back(b.add_element(std::to_string(i) + ":" + id));
        for (std::size_t k = 0; k < signature.size(); ++k)
            for (const auto& t : parts[i].relation(k)) b.add_tuple(k, compose(inj, t));
        out.injections.push_back(std::move(inj));
    }
    out.structure = std::move(b).build();
    return out;
}

inline DisjointUnion disjoint_union(std::span<const Structure> parts) {
    if (parts.empty()) return {Structure(Signature{}, {}, {}), {}};
    return disjoint_union(parts, parts.front().signature());
}

}  // namespace pultr
