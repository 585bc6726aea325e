#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sgn/sign_system.hpp"

namespace sgn {

// Partial structure-preserving translation between two sign systems. The
// formalism's predicates and functions both live in constructors/relations
// here, so three symbol maps suffice.
struct SemioticMorphism {
    std::string name;
    SystemPtr source;
    SystemPtr target;
    std::map<std::string, std::string> sort_map;
    std::map<std::string, std::string> ctor_map;
    std::map<std::string, std::string> rel_map;

    std::optional<std::string> map_sort(const std::string& s) const {
        auto it = sort_map.find(s);
        if (it == sort_map.end()) return std::nullopt;
        return it->second;
    }
    std::optional<std::string> map_ctor(const std::string& c) const {
        auto it = ctor_map.find(c);
        if (it == ctor_map.end()) return std::nullopt;
        return it->second;
    }
    std::optional<std::string> map_rel(const std::string& r) const {
        auto it = rel_map.find(r);
        if (it == rel_map.end()) return std::nullopt;
        return it->second;
    }
};

using MorphismPtr = std::shared_ptr<const SemioticMorphism>;

struct MorphismReport {
    bool valid = false;
    ValidationReport diagnostics;
    bool is_isomorphism = false;
    bool is_level_preserving = false;
};

inline SemioticMorphism identity_morphism(SystemPtr sys) {
    SemioticMorphism m;
    m.name = "id_" + sys->name;
    m.source = sys;
    m.target = sys;
    for (const auto& s : sys->sorts) m.sort_map[s.name] = s.name;
    for (const auto& c : sys->constructors) m.ctor_map[c.name] = c.name;
    for (const auto& r : sys->relations) m.rel_map[r.name] = r.name;
    return m;
}

namespace detail {

// Preservation conditions: (a) data-sorts unchanged, (b) subsort order kept,
// (c) constructor signatures tracked where the sort map is defined,
// (d) likewise for relations. Declaredness of keys/values is checked first.
inline ValidationReport morphism_diagnostics(const SemioticMorphism& m) {
    ValidationReport out;
    if (!m.source || !m.target) {
        report(out, "NO_SYSTEM", "morphism " + m.name + " lacks a source or target system");
        return out;
    }
    const SignSystem& src = *m.source;
    const SignSystem& tgt = *m.target;

    for (const auto& [k, v] : m.sort_map) {
        const SortDecl* sk = src.find_sort(k);
        const SortDecl* sv = tgt.find_sort(v);
        if (!sk) report(out, "UNKNOWN_SYMBOL", "sort " + k + " not declared in " + src.name);
        if (!sv) report(out, "UNKNOWN_SYMBOL", "sort " + v + " not declared in " + tgt.name);
        if (!sk || !sv) continue;
        if (sk->kind == SortKind::Data && (k != v || sv->kind != SortKind::Data))
            report(out, "DATA_SORT_CHANGED", "data-sort " + k + " mapped to " + v);
    }
    for (const auto& [k1, v1] : m.sort_map) {
        for (const auto& [k2, v2] : m.sort_map) {
            if (!src.find_sort(k1) || !src.find_sort(k2) || !tgt.find_sort(v1) ||
                !tgt.find_sort(v2))
                continue;
            if (subsort_leq(k1, k2, src) && !subsort_leq(v1, v2, tgt))
                report(out, "ORDER_BROKEN",
                       k1 + " <= " + k2 + " in " + src.name + " but " + v1 + " <= " + v2 +
                           " fails in " + tgt.name);
        }
    }
    for (const auto& [k, v] : m.ctor_map) {
        const ConstructorDecl* ck = src.find_constructor(k);
        const ConstructorDecl* cv = tgt.find_constructor(v);
        if (!ck) report(out, "UNKNOWN_SYMBOL", "constructor " + k + " not declared in " + src.name);
        if (!cv) report(out, "UNKNOWN_SYMBOL", "constructor " + v + " not declared in " + tgt.name);
        if (!ck || !cv) continue;
        if (ck->arg_sorts.size() != cv->arg_sorts.size()) {
            report(out, "CTOR_ARITY", "constructor " + k + " and " + v + " differ in arity");
            continue;
        }
        if (auto mapped = m.map_sort(ck->result_sort); mapped && *mapped != cv->result_sort)
            report(out, "CTOR_RESULT_SORT",
                   "constructor " + k + ": result sort maps to " + *mapped + " but " + v +
                       " results in " + cv->result_sort);
        for (std::size_t i = 0; i < ck->arg_sorts.size(); ++i)
            if (auto mapped = m.map_sort(ck->arg_sorts[i]); mapped && *mapped != cv->arg_sorts[i])
                report(out, "CTOR_ARG_SORT",
                       "constructor " + k + " argument " + std::to_string(i + 1) + " maps to " +
                           *mapped + " but " + v + " expects " + cv->arg_sorts[i]);
    }
    for (const auto& [k, v] : m.rel_map) {
        const RelationDecl* rk = src.find_relation(k);
        const RelationDecl* rv = tgt.find_relation(v);
        if (!rk) report(out, "UNKNOWN_SYMBOL", "relation " + k + " not declared in " + src.name);
        if (!rv) report(out, "UNKNOWN_SYMBOL", "relation " + v + " not declared in " + tgt.name);
        if (!rk || !rv) continue;
        if (rk->arg_sorts.size() != rv->arg_sorts.size()) {
            report(out, "REL_ARITY", "relation " + k + " and " + v + " differ in arity");
            continue;
        }
        for (std::size_t i = 0; i < rk->arg_sorts.size(); ++i)
            if (auto mapped = m.map_sort(rk->arg_sorts[i]); mapped && *mapped != rv->arg_sorts[i])
                report(out, "REL_ARG_SORT",
                       "relation " + k + " argument " + std::to_string(i + 1) + " maps to " +
                           *mapped + " but " + v + " expects " + rv->arg_sorts[i]);
    }
    return out;
}

inline bool levels_monotone(const SemioticMorphism& m) {
    const SignSystem& src = *m.source;
    const SignSystem& tgt = *m.target;
    for (const auto& [k1, v1] : m.ctor_map) {
        const ConstructorDecl* c1 = src.find_constructor(k1);
        const ConstructorDecl* d1 = tgt.find_constructor(v1);
        if (!c1 || !d1) continue;
        for (const auto& [k2, v2] : m.ctor_map) {
            const ConstructorDecl* c2 = src.find_constructor(k2);
            const ConstructorDecl* d2 = tgt.find_constructor(v2);
            if (!c2 || !d2) continue;
            if (c1->level <= c2->level && d1->level > d2->level) return false;
        }
    }
    return true;
}

inline std::optional<SemioticMorphism> try_inverse(const SemioticMorphism& m) {
    SemioticMorphism inv;
    inv.name = m.name + "_inv";
    inv.source = m.target;
    inv.target = m.source;
    auto invert = [](const std::map<std::string, std::string>& fwd,
                     std::map<std::string, std::string>& back) {
        for (const auto& [k, v] : fwd)
            if (!back.emplace(v, k).second) return false;  // not injective
        return true;
    };
    if (!invert(m.sort_map, inv.sort_map) || !invert(m.ctor_map, inv.ctor_map) ||
        !invert(m.rel_map, inv.rel_map))
        return std::nullopt;
    return inv;
}

inline bool bijective_on_symbols(const SemioticMorphism& m) {
    const SignSystem& src = *m.source;
    const SignSystem& tgt = *m.target;
    if (m.sort_map.size() != src.sorts.size() || m.ctor_map.size() != src.constructors.size() ||
        m.rel_map.size() != src.relations.size())
        return false;
    for (const auto& s : src.sorts)
        if (!m.sort_map.count(s.name)) return false;
    for (const auto& c : src.constructors)
        if (!m.ctor_map.count(c.name)) return false;
    for (const auto& r : src.relations)
        if (!m.rel_map.count(r.name)) return false;
    auto inv = try_inverse(m);
    if (!inv) return false;
    if (inv->sort_map.size() != tgt.sorts.size() || inv->ctor_map.size() != tgt.constructors.size())
        return false;
    for (const auto& s : tgt.sorts)
        if (!inv->sort_map.count(s.name)) return false;
    for (const auto& c : tgt.constructors)
        if (!inv->ctor_map.count(c.name)) return false;
    for (const auto& r : tgt.relations)
        if (!inv->rel_map.count(r.name)) return false;
    return morphism_diagnostics(*inv).empty();
}

}  // namespace detail

// Full report: preservation diagnostics plus the two classifications. An
// invalid morphism is reported as neither isomorphism nor level-preserving.
inline MorphismReport validate_morphism(const SemioticMorphism& m) {
    MorphismReport rep;
    rep.diagnostics = detail::morphism_diagnostics(m);
    rep.valid = rep.diagnostics.empty();
    if (!rep.valid) return rep;
    rep.is_level_preserving = detail::levels_monotone(m);
    rep.is_isomorphism = detail::bijective_on_symbols(m);
    return rep;
}

inline bool is_isomorphism(const SemioticMorphism& m) {
    MorphismReport rep = validate_morphism(m);
    if (!rep.valid)
        throw Error(ErrorCode::InvalidMorphism, "morphism " + m.name + " does not validate");
    return rep.is_isomorphism;
}

// Monotone on constructor levels: collapsing levels is preserving,
// inverting them is not.
inline bool is_level_preserving(const SemioticMorphism& m) {
    MorphismReport rep = validate_morphism(m);
    if (!rep.valid)
        throw Error(ErrorCode::InvalidMorphism, "morphism " + m.name + " does not validate");
    return rep.is_level_preserving;
}

// Composition, first applying to the source of `first`. Defined where both
// partial maps are defined.
inline SemioticMorphism compose(const SemioticMorphism& second, const SemioticMorphism& first) {
    if (!first.target || !second.source || !same_system(*first.target, *second.source))
        throw Error(ErrorCode::SystemMismatch,
                    "cannot compose " + second.name + " after " + first.name);
    SemioticMorphism out;
    out.name = second.name + "." + first.name;
    out.source = first.source;
    out.target = second.target;
    auto chain = [](const std::map<std::string, std::string>& f,
                    const std::map<std::string, std::string>& g,
                    std::map<std::string, std::string>& res) {
        for (const auto& [k, v] : f) {
            auto it = g.find(v);
            if (it != g.end()) res[k] = it->second;
        }
    };
    chain(first.sort_map, second.sort_map, out.sort_map);
    chain(first.ctor_map, second.ctor_map, out.ctor_map);
    chain(first.rel_map, second.rel_map, out.rel_map);
    return out;
}

namespace detail {

// Head-wise term translation; nullopt when some symbol is unmapped.
inline std::optional<SignTerm> translate_term(const SignTerm& t, const SemioticMorphism& m) {
    switch (t.head) {
        case SignTerm::Head::Int:
        case SignTerm::Head::Real:
        case SignTerm::Head::Str: {
            const SortDecl* s = data_sort_for(*m.source, *literal_kind_of_term(t));
            if (!s || !m.map_sort(s->name)) return std::nullopt;
            return t;
        }
        case SignTerm::Head::Ctor: {
            auto mapped = m.map_ctor(t.ctor);
            if (!mapped) return std::nullopt;
            SignTerm out = SignTerm::make(*mapped);
            out.args.reserve(t.args.size());
            for (const auto& a : t.args) {
                auto ta = translate_term(a, m);
                if (!ta) return std::nullopt;
                out.args.push_back(std::move(*ta));
            }
            return out;
        }
    }
    return std::nullopt;
}

}  // namespace detail

// Translates a configuration along a morphism. Terms touching unmapped
// symbols are dropped, as are tuples whose relation is unmapped, whose
// arguments did not survive, or whose translation does not type-check in
// the target; the result is always a valid target configuration.
inline Configuration apply_morphism(const SemioticMorphism& m, const Configuration& cfg) {
    MorphismReport rep = validate_morphism(m);
    if (!rep.valid)
        throw Error(ErrorCode::InvalidMorphism, "morphism " + m.name + " does not validate");
    if (!cfg.system || !same_system(*cfg.system, *m.source))
        throw Error(ErrorCode::SystemMismatch,
                    "configuration " + cfg.name + " is not over " + m.source->name);
    Configuration out;
    out.system = m.target;
    out.name = cfg.name;
    for (const auto& [n, t] : cfg.terms) {
        auto tt = detail::translate_term(t, m);
        if (!tt) continue;
        try {
            well_sorted(*tt, *m.target);
        } catch (const Error&) {
            continue;
        }
        out.terms.emplace_back(n, std::move(*tt));
    }
    for (const auto& tup : cfg.tuples) {
        auto mapped = m.map_rel(tup.relation);
        if (!mapped) continue;
        bool ok = true;
        for (const auto& a : tup.args)
            if (!out.find_term(a)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        RelationTuple moved{*mapped, tup.args};
        const RelationDecl* rel = m.target->find_relation(*mapped);
        if (!rel || rel->arg_sorts.size() != moved.args.size()) continue;
        for (std::size_t i = 0; ok && i < moved.args.size(); ++i) {
            const SignTerm* t = out.find_term(moved.args[i]);
            ok = detail::sort_fits(well_sorted(*t, *m.target), rel->arg_sorts[i], *t, *m.target);
        }
        if (ok) out.tuples.push_back(std::move(moved));
    }
    return out;
}

// Number of relation tuples spanning the product/environment boundary.
inline std::int64_t epsilon(const Configuration& cfg) {
    if (!cfg.system) return 0;
    std::int64_t count = 0;
    for (const auto& tup : cfg.tuples) {
        bool product = false, environment = false;
        for (const auto& a : tup.args) {
            const SignTerm* t = cfg.find_term(a);
            if (!t) continue;
            std::optional<Boundary> b;
            try {
                b = boundary_of_term(*t, *cfg.system);
            } catch (const Error&) {
                continue;
            }
            if (b == Boundary::Product) product = true;
            if (b == Boundary::Environment) environment = true;
        }
        if (product && environment) ++count;
    }
    return count;
}

// Secondary statistic: distinct relation NAMES with at least one
// cross-boundary tuple (exposed, but the laws use instance counts).
inline std::int64_t epsilon_relation_types(const Configuration& cfg) {
    if (!cfg.system) return 0;
    std::set<std::string> names;
    for (const auto& tup : cfg.tuples) {
        bool product = false, environment = false;
        for (const auto& a : tup.args) {
            const SignTerm* t = cfg.find_term(a);
            if (!t) continue;
            std::optional<Boundary> b;
            try {
                b = boundary_of_term(*t, *cfg.system);
            } catch (const Error&) {
                continue;
            }
            if (b == Boundary::Product) product = true;
            if (b == Boundary::Environment) environment = true;
        }
        if (product && environment) names.insert(tup.relation);
    }
    return static_cast<std::int64_t>(names.size());
}

// A translation is natural when it strictly decreases the number of
// product-environment relations.
inline bool is_natural(const Configuration& before, const Configuration& after) {
    return epsilon(before) > epsilon(after);
}

}  // namespace sgn
