#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pultr/core/error.hpp"
#include "pultr/core/homomorphism.hpp"
#include "pultr/core/structure.hpp"
#include "pultr/functors/gamma.hpp"
#include "pultr/functors/template.hpp"
#include "pultr/terms/term.hpp"
#include "pultr/terms/tree.hpp"

namespace pultr {

enum class OmegaCase { vertex, edge };

struct CaseReport {
    bool ok = true;
    std::string reason;

    explicit operator bool() const noexcept { return ok; }
    static CaseReport fail(std::string why) { return {false, std::move(why)}; }
};

namespace detail {

inline CaseReport templates_are_trees(const PultrTemplate& t) {
    try {
        validate_template(t);
    } catch (const InvalidTemplate& e) {
        return CaseReport::fail(e.what());
    }
    for (std::size_t k = 0; k < t.target.size(); ++k)
        if (!is_tree(t.q[k])) return CaseReport::fail("Q_" + t.target[k].name + " is not a tree");
    return {};
}

// Index of the symbol of P's only tuple when P is a single tuple on all of its
// elements, each appearing once.
inline std::optional<std::size_t> single_edge_symbol(const Structure& p) {
    if (p.tuple_count() != 1) return std::nullopt;
    for (std::size_t k = 0; k < p.relations().size(); ++k) {
        if (p.relation(k).empty()) continue;
        auto t = p.relation(k).front();
        std::sort(t.begin(), t.end());
        if (t.size() == p.size() && std::adjacent_find(t.begin(), t.end()) == t.end()) return k;
    }
    return std::nullopt;
}

}  // namespace detail

// P is one element with empty relations and every Q_R is a tree.
inline CaseReport admits_vertex_case(const PultrTemplate& t) {
    if (auto r = detail::templates_are_trees(t); !r) return r;
    if (t.p.size() != 1 || t.p.tuple_count() != 0) return CaseReport::fail("P is not a single element without tuples");
    return {};
}

// P is a single tuple of some symbol on distinct elements and every Q_R is a tree.
inline CaseReport admits_edge_case(const PultrTemplate& t) {
    if (auto r = detail::templates_are_trees(t); !r) return r;
    if (!detail::single_edge_symbol(t.p)) return CaseReport::fail("P is not a single tuple on distinct elements");
    return {};
}

// The symbol whose tuples form the universe of Γ in the edge case.
inline std::size_t edge_case_symbol(const PultrTemplate& t) {
    auto k = detail::single_edge_symbol(t.p);
    if (!k) throw PreconditionFailed("P is not a single tuple on distinct elements");
    return *k;
}

// Term used for Q_R: the template's own if given, else Q_R read from its
// first tuple in canonical order (or from its only element).
inline Term default_term(const Structure& q) {
    for (std::size_t k = 0; k < q.relations().size(); ++k)
        if (!q.relation(k).empty()) return term_of_tree(q, Root::at_edge(k, q.relation(k).front())).term;
    if (q.size() == 1) return Term::vertex();
    throw PreconditionFailed("structure without tuples and with " + std::to_string(q.size()) + " elements is not a tree");
}

inline std::vector<Term> chosen_terms(const PultrTemplate& t) {
    std::vector<Term> out;
    for (std::size_t k = 0; k < t.target.size(); ++k)
        out.push_back(!t.terms.empty() && t.terms[k] ? *t.terms[k] : default_term(t.q[k]));
    return out;
}

struct OmegaOptions {
    // Refuse to build when the number of vertices before pruning exceeds this.
    std::uint64_t budget = std::uint64_t{1} << 20;
    // Refuse to build when |vertices|^arity exceeds this for some symbol.
    std::uint64_t tuple_budget = std::uint64_t{1} << 32;
    // Keep only vertices with {f∘h | f in U_s'} ⊆ U_s for root-preserving h: T(s) -> T(s').
    bool prune_a3 = false;
};

// Entry i is a bitmask over hom(Γ(T(t)), B) for the i-th V-subterm t.
struct OmegaVertex {
    std::vector<std::uint64_t> entries;
    friend bool operator==(const OmegaVertex&, const OmegaVertex&) = default;
    friend auto operator<=>(const OmegaVertex&, const OmegaVertex&) = default;
};

struct OmegaResult {
    Structure structure;
    OmegaCase kind = OmegaCase::vertex;
    std::vector<Term> terms;
    SubtermSet index;
    std::vector<OmegaVertex> vertices;
    // witnesses[k][j]: least witness in B of the j-th tuple of symbol k (edge case, k = Š only).
    std::vector<std::vector<Index>> witnesses;
};

// The tables behind Ω(B) for a fixed template, B and choice of terms.
class OmegaBuilder {
public:
    static constexpr std::size_t none = static_cast<std::size_t>(-1);

    OmegaBuilder(const PultrTemplate& tmpl, const Structure& b, OmegaCase kind, OmegaOptions opt = {})
        : tmpl_(tmpl), b_(b), kind_(kind), opt_(opt) {
        auto report = kind == OmegaCase::vertex ? admits_vertex_case(tmpl) : admits_edge_case(tmpl);
        if (!report) throw PreconditionFailed(report.reason);
        if (b.signature() != tmpl.target) throw SignatureMismatch("Ω expects a structure over the template's target");
        if (kind == OmegaCase::edge) edge_symbol_ = edge_case_symbol(tmpl);
        terms_ = chosen_terms(tmpl);
        index_ = subterms(terms_);
        for (const auto& t : index_.all) data_.push_back(make_data(t));
        count_vertices();
        for (std::size_t i = 0; i < index_.all.size(); ++i)
            if (!index_.all[i].is_v_term()) build_glue(i);
    }

    const SubtermSet& index() const noexcept { return index_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    OmegaCase kind() const noexcept { return kind_; }

    // Γ(T(t)) together with the homomorphisms P -> T(t) behind its elements.
    const GammaResult& gamma_of(const Term& t) const { return data_[position(t)].gamma; }
    // hom(Γ(T(t)), B), in the order used by the bitmasks.
    const std::vector<ElementMap>& homs_of(const Term& t) const { return data_[position(t)].homs; }

    std::vector<OmegaVertex> vertices() const {
        const auto& v = index_.v_terms;
        std::vector<OmegaVertex> out;
        OmegaVertex cur;
        cur.entries.assign(v.size(), 0);
        auto fill = [&](auto&& self, std::size_t i) -> void {
            if (i == v.size()) {
                if (!opt_.prune_a3 || satisfies_a3(cur)) out.push_back(cur);
                return;
            }
            const std::size_t n = data_[position(v[i])].homs.size();
            if (i == 0) {
                for (std::size_t j = 0; j < n; ++j) cur.entries[0] = std::uint64_t{1} << j, self(self, 1);
                return;
            }
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) cur.entries[i] = m, self(self, i + 1);
        };
        fill(fill, 0);
        return out;
    }

    // ⨉_t(U^1, ..., U^k[; e•]) as maps on the universe of Γ(T(t)).
    std::vector<ElementMap> cross(const Term& t, std::span<const OmegaVertex> us,
                                  std::optional<Index> witness = std::nullopt) const {
        if (t.kind() != Term::Kind::edge || !index_.contains(t)) throw MalformedTerm("not an edge subterm: " + t.str());
        if (us.size() != t.arity()) throw MalformedTerm("⨉ of " + t.str() + " needs " + std::to_string(t.arity()) + " vertices");
        const auto& d = data_[position(t)];
        if (d.root_slot != none && !witness) throw PreconditionFailed("⨉ of " + t.str() + " needs a witness");
        if (d.root_slot == none && witness) throw PreconditionFailed("⨉ of " + t.str() + " takes no witness");
        if (witness && *witness >= b_.size()) throw PreconditionFailed("witness is not an element of B");
        std::vector<std::vector<std::size_t>> choices(t.arity());
        for (std::size_t i = 0; i < t.arity(); ++i) {
            const auto mask = us[i].entries.at(index_.v_position(t.children()[i]));
            for (std::size_t j = 0; j < 64; ++j)
                if (mask >> j & 1) choices[i].push_back(j);
        }
        std::vector<ElementMap> out;
        std::vector<std::size_t> pick(t.arity());
        auto go = [&](auto&& self, std::size_t i) -> void {
            if (i == t.arity()) {
                out.push_back(glue(d, pick, witness ? *witness : 0));
                return;
            }
            for (auto j : choices[i]) pick[i] = j, self(self, i + 1);
        };
        go(go, 0);
        std::sort(out.begin(), out.end());
        return out;
    }

    OmegaResult build() const {
        OmegaResult r;
        r.kind = kind_;
        r.terms = terms_;
        r.index = index_;
        r.vertices = vertices();
        const auto& sigma = tmpl_.source;
        std::vector<std::vector<Tuple>> relations(sigma.size());
        r.witnesses.resize(sigma.size());
        for (std::size_t k = 0; k < sigma.size(); ++k) {
            std::vector<std::pair<Tuple, Index>> found;
            edges_of(k, r.vertices, found);
            std::sort(found.begin(), found.end());
            for (auto& [tuple, w] : found) {
                relations[k].push_back(tuple);
                if (kind_ == OmegaCase::edge && k == edge_symbol_) r.witnesses[k].push_back(w);
            }
        }
        std::vector<std::string> domain;
        for (const auto& u : r.vertices) domain.push_back(vertex_id(u));
        r.structure = Structure(sigma, std::move(domain), std::move(relations));
        return r;
    }

    // "{hom;hom}|{...}" with one block per V-subterm; a hom is printed as
    // "(x=b,...)" over the elements x of Γ(T(t)) in domain order.
    std::string vertex_id(const OmegaVertex& u) const {
        std::string s;
        for (std::size_t i = 0; i < index_.v_terms.size(); ++i) {
            if (i) s += '|';
            const auto& d = data_[position(index_.v_terms[i])];
            s += '{';
            bool first = true;
            for (std::size_t j = 0; j < d.homs.size(); ++j) {
                if (!(u.entries[i] >> j & 1)) continue;
                if (!first) s += ';';
                first = false;
                s += '(';
                for (Index x = 0; x < d.homs[j].size(); ++x) {
                    if (x) s += ',';
                    s += d.gamma.structure.id(x) + "=" + b_.id(d.homs[j][x]);
                }
                s += ')';
            }
            s += '}';
        }
        return s;
    }

private:
    struct Source {
        std::size_t child;  // none for the root tuple
        Index element;
    };

    struct TermData {
        RootedTree tree;
        GammaResult gamma;
        std::vector<ElementMap> homs;
        // Edge terms only: where each element of Γ(T(t)) comes from, the slot of
        // the root tuple (edge case, symbol Š), and ⨉ as a lookup table from
        // (f_1, ..., f_k[, e•]) to an index in homs or none.
        std::vector<Source> sources;
        std::size_t root_slot = none;
        std::vector<std::size_t> child_pos;  // positions in index_.all
        std::vector<std::size_t> strides;
        std::vector<std::size_t> table;
    };

    std::size_t position(const Term& t) const {
        auto it = std::lower_bound(index_.all.begin(), index_.all.end(), t);
        if (it == index_.all.end() || *it != t) throw MalformedTerm("not a subterm of the chosen terms: " + t.str());
        return static_cast<std::size_t>(it - index_.all.begin());
    }

    TermData make_data(const Term& t) const {
        TermData d{tree_of_term(t, tmpl_.source), {}, {}, {}, none, {}, {}, {}};
        d.gamma = gamma_with_homs(tmpl_, d.tree.structure);
        d.homs = enumerate_homs(d.gamma.structure, b_);
        return d;
    }

    void count_vertices() const {
        const auto& v = index_.v_terms;
        double total = static_cast<double>(data_[position(v.front())].homs.size());
        for (std::size_t i = 1; i < v.size(); ++i) {
            const auto n = data_[position(v[i])].homs.size();
            if (n >= 63) throw BudgetExceeded("Ω(B) has more than 2^63 vertices");
            total *= static_cast<double>(std::uint64_t{1} << n);
        }
        if (total > static_cast<double>(opt_.budget))
            throw BudgetExceeded("Ω(B) would have " + std::to_string(static_cast<std::uint64_t>(total)) +
                                 " vertices, budget is " + std::to_string(opt_.budget));
    }

    // T(t_i) sits inside T(t) under the address prefix "v.<i>".
    void build_glue(std::size_t pos) {
        const Term& t = index_.all[pos];
        auto& d = data_[pos];
        const auto& gamma = d.gamma;
        d.sources.assign(gamma.homs.size(), Source{none, 0});
        std::vector<bool> covered(gamma.homs.size(), false);
        for (std::size_t i = 0; i < t.arity(); ++i) {
            const auto cpos = position(t.children()[i]);
            d.child_pos.push_back(cpos);
            const auto& child = data_[cpos];
            ElementMap embed(child.tree.structure.size());
            const std::string prefix = "v." + std::to_string(i + 1);
            for (Index x = 0; x < embed.size(); ++x)
                embed[x] = d.tree.structure.index_of(prefix + child.tree.structure.id(x).substr(1));
            for (Index y = 0; y < child.gamma.homs.size(); ++y) {
                auto x = gamma.element_of(compose(embed, child.gamma.homs[y]));
                if (!x || covered[*x]) throw InvalidTemplate("term " + t.str() + " repeats a tuple");
                covered[*x] = true;
                d.sources[*x] = Source{i, y};
            }
        }
        for (Index x = 0; x < covered.size(); ++x) {
            if (covered[x]) continue;
            if (d.root_slot != none || kind_ != OmegaCase::edge)
                throw InvalidTemplate("Γ(T(" + t.str() + ")) has an element outside its subtrees");
            d.root_slot = x;
        }
        if (kind_ == OmegaCase::edge && index_.all[pos].symbol() == tmpl_.source[edge_symbol_].name &&
            d.root_slot == none)
            throw InvalidTemplate("term " + t.str() + " repeats a tuple");

        std::size_t total = 1;
        for (auto c : d.child_pos) {
            d.strides.push_back(total);
            total *= std::max<std::size_t>(data_[c].homs.size(), 1);
            if (total > (std::size_t{1} << 26)) throw BudgetExceeded("⨉ table for " + t.str() + " is too large");
        }
        const std::size_t witnesses = d.root_slot == none ? 1 : b_.size();
        d.strides.push_back(total);
        d.table.assign(total * witnesses, none);
        std::vector<std::size_t> pick(t.arity(), 0);
        for (std::size_t e = 0; e < witnesses; ++e)
            for (std::size_t flat = 0; flat < total; ++flat) {
                bool empty = false;
                for (std::size_t i = 0; i < t.arity(); ++i) {
                    const auto n = data_[d.child_pos[i]].homs.size();
                    if (n == 0) empty = true;
                    else pick[i] = flat / d.strides[i] % n;
                }
                if (empty) continue;
                auto f = glue(d, pick, static_cast<Index>(e));
                auto it = std::lower_bound(d.homs.begin(), d.homs.end(), f);
                if (it != d.homs.end() && *it == f) d.table[e * total + flat] = static_cast<std::size_t>(it - d.homs.begin());
            }
    }

    ElementMap glue(const TermData& d, std::span<const std::size_t> pick, Index witness) const {
        ElementMap f(d.sources.size());
        for (Index x = 0; x < f.size(); ++x) {
            const auto& s = d.sources[x];
            f[x] = s.child == none ? witness : data_[d.child_pos[s.child]].homs[pick[s.child]][s.element];
        }
        return f;
    }

    std::size_t lookup(const TermData& d, std::span<const std::size_t> pick, std::size_t witness) const {
        std::size_t flat = 0;
        for (std::size_t i = 0; i < pick.size(); ++i) flat += pick[i] * d.strides[i];
        return d.table[witness * d.strides.back() + flat];
    }

    bool satisfies_a3(const OmegaVertex& u) const {
        if (a3_.empty() && !a3_ready_) prepare_a3();
        for (const auto& c : a3_)
            for (std::size_t j = 0; j < c.image.size(); ++j)
                if ((u.entries[c.from] >> j & 1) && !(u.entries[c.to] >> c.image[j] & 1)) return false;
        return true;
    }

    // For each root-preserving h: T(s) -> T(s'), the map f |-> f∘Γ(h) from
    // hom(Γ(T(s')), B) to hom(Γ(T(s)), B) as indices.
    struct A3Constraint {
        std::size_t from, to;  // V-term positions of s' and s
        std::vector<std::size_t> image;
        friend bool operator==(const A3Constraint&, const A3Constraint&) = default;
    };

    void prepare_a3() const {
        const auto& v = index_.v_terms;
        for (std::size_t s = 0; s < v.size(); ++s)
            for (std::size_t s2 = 0; s2 < v.size(); ++s2) {
                const auto& ds = data_[position(v[s])];
                const auto& ds2 = data_[position(v[s2])];
                HomSolver solver(ds.tree.structure, ds2.tree.structure);
                HomSolver::Fixed fixed(ds.tree.structure.size());
                fixed[*ds.tree.root.vertex] = *ds2.tree.root.vertex;
                solver.for_each(
                    [&](const ElementMap& h) {
                        ElementMap gamma_h;
                        for (const auto& g : ds.gamma.homs) gamma_h.push_back(*ds2.gamma.element_of(compose(h, g)));
                        A3Constraint c{s2, s, {}};
                        for (const auto& f : ds2.homs) {
                            auto composed = compose(f, gamma_h);
                            auto it = std::lower_bound(ds.homs.begin(), ds.homs.end(), composed);
                            if (it == ds.homs.end() || *it != composed)
                                throw InvalidTemplate("composition with a root-preserving map is not a homomorphism");
                            c.image.push_back(static_cast<std::size_t>(it - ds.homs.begin()));
                        }
                        if (std::find(a3_.begin(), a3_.end(), c) == a3_.end()) a3_.push_back(std::move(c));
                        return true;
                    },
                    fixed);
            }
        a3_ready_ = true;
    }

    // Tuples of symbol k, each with its least witness (0 outside the Š case).
    // The first k-1 coordinates are enumerated; for the last one the
    // conditions reduce to per-V-subterm mask tests.
    void edges_of(std::size_t k, const std::vector<OmegaVertex>& vs, std::vector<std::pair<Tuple, Index>>& out) const {
        const auto& symbol = tmpl_.source[k];
        const std::size_t arity = symbol.arity;
        if (vs.empty()) return;
        double candidates = 1;
        for (std::size_t i = 0; i < arity; ++i) candidates *= static_cast<double>(vs.size());
        if (candidates > static_cast<double>(opt_.tuple_budget))
            throw BudgetExceeded("Ω(B) has too many candidate " + symbol.name + "-tuples");
        const bool witnessed = kind_ == OmegaCase::edge && k == edge_symbol_;
        const std::size_t witnesses = witnessed ? b_.size() : 1;

        struct Check {
            const TermData* d;
            std::vector<std::size_t> child_v;                            // V-position of each t_i
            std::vector<std::pair<std::size_t, std::size_t>> projections;  // (i, V-position of pr_i(t))
            std::size_t last_projection = none;                         // V-position of pr_k(t) if present
        };
        std::vector<Check> checks;
        for (const auto& t : index_.of_symbol(symbol.name)) {
            Check c{&data_[position(t)], {}, {}, none};
            for (const auto& child : t.children()) c.child_v.push_back(index_.v_position(child));
            for (std::size_t i = 0; i < arity; ++i) {
                auto p = Term::pr(i + 1, t);
                if (!index_.contains(p)) continue;
                if (i + 1 == arity) c.last_projection = index_.v_position(p);
                else c.projections.emplace_back(i, index_.v_position(p));
            }
            checks.push_back(std::move(c));
        }

        // allowed[e][c]: mask over hom(Γ(T(t_k)), B); required[e][c][f]: mask over hom(Γ(T(pr_k t)), B).
        std::vector<std::vector<std::uint64_t>> allowed(witnesses, std::vector<std::uint64_t>(checks.size()));
        std::vector<std::vector<std::vector<std::uint64_t>>> required(witnesses,
                                                                      std::vector<std::vector<std::uint64_t>>(checks.size()));
        Tuple prefix(arity - 1, 0);
        std::vector<std::size_t> pick(arity);
        while (true) {
            for (std::size_t e = 0; e < witnesses; ++e)
                for (std::size_t ci = 0; ci < checks.size(); ++ci) {
                    const auto& c = checks[ci];
                    const auto nlast = data_[c.d->child_pos[arity - 1]].homs.size();
                    std::uint64_t ok_mask = nlast >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nlast) - 1;
                    auto& req = required[e][ci];
                    req.assign(nlast, 0);
                    auto go = [&](auto&& self, std::size_t i) -> void {
                        if (i + 1 == arity) {
                            for (std::size_t f = 0; f < nlast; ++f) {
                                pick[i] = f;
                                const auto g = lookup(*c.d, pick, e);
                                bool ok = g != none;
                                for (auto [j, p] : c.projections) ok = ok && (vs[prefix[j]].entries[p] >> g & 1);
                                if (!ok) ok_mask &= ~(std::uint64_t{1} << f);
                                else if (c.last_projection != none) req[f] |= std::uint64_t{1} << g;
                            }
                            return;
                        }
                        const auto mask = vs[prefix[i]].entries[c.child_v[i]];
                        for (std::size_t j = 0; j < 64; ++j)
                            if (mask >> j & 1) pick[i] = j, self(self, i + 1);
                    };
                    go(go, 0);
                    allowed[e][ci] = ok_mask;
                }
            for (Index last = 0; last < vs.size(); ++last) {
                const auto& v = vs[last];
                for (std::size_t e = 0; e < witnesses; ++e) {
                    bool ok = true;
                    for (std::size_t ci = 0; ci < checks.size() && ok; ++ci) {
                        const auto& c = checks[ci];
                        const auto mine = v.entries[c.child_v[arity - 1]];
                        if (mine & ~allowed[e][ci]) ok = false;
                        if (c.last_projection == none) continue;
                        for (std::size_t f = 0; f < required[e][ci].size() && ok; ++f)
                            if ((mine >> f & 1) && (required[e][ci][f] & ~v.entries[c.last_projection])) ok = false;
                    }
                    if (ok) {
                        Tuple tuple = prefix;
                        tuple.push_back(last);
                        out.emplace_back(std::move(tuple), static_cast<Index>(e));
                        break;
                    }
                }
            }
            std::size_t i = prefix.size();
            while (i > 0 && ++prefix[i - 1] == vs.size()) prefix[--i] = 0;
            if (i == 0) break;
        }
    }

    const PultrTemplate& tmpl_;
    const Structure& b_;
    OmegaCase kind_;
    OmegaOptions opt_;
    std::size_t edge_symbol_ = 0;
    std::vector<Term> terms_;
    SubtermSet index_;
    std::vector<TermData> data_;
    mutable std::vector<A3Constraint> a3_;
    mutable bool a3_ready_ = false;
};

inline OmegaResult omega_vertex_build(const PultrTemplate& tmpl, const Structure& b, const OmegaOptions& opt = {}) {
    return OmegaBuilder(tmpl, b, OmegaCase::vertex, opt).build();
}

inline OmegaResult omega_edge_build(const PultrTemplate& tmpl, const Structure& b, const OmegaOptions& opt = {}) {
    return OmegaBuilder(tmpl, b, OmegaCase::edge, opt).build();
}

inline Structure omega_vertex_apply(const PultrTemplate& tmpl, const Structure& b, const OmegaOptions& opt = {}) {
    return omega_vertex_build(tmpl, b, opt).structure;
}

inline Structure omega_edge_apply(const PultrTemplate& tmpl, const Structure& b, const OmegaOptions& opt = {}) {
    return omega_edge_build(tmpl, b, opt).structure;
}

}  // namespace pultr
