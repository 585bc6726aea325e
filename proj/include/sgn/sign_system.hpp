#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgn/detail/format.hpp"
#include "sgn/diagnostics.hpp"

namespace sgn {

enum class SortKind { Sign, Data };
enum class Boundary { Product, Environment };
enum class LiteralKind { Int, Real, Str };

// A sign-sort may carry an explicit boundary tag; untagged sign-sorts are
// product-side. Data-sorts never carry one.
struct SortDecl {
    std::string name;
    SortKind kind = SortKind::Sign;
    std::optional<Boundary> boundary;

    bool operator==(const SortDecl&) const = default;
};

struct ConstructorDecl {
    std::string name;
    std::vector<std::string> arg_sorts;
    std::string result_sort;
    std::int64_t level = 0;
    std::int64_t priority = 0;

    bool operator==(const ConstructorDecl&) const = default;
};

struct RelationDecl {
    std::string name;
    std::vector<std::string> arg_sorts;

    bool operator==(const RelationDecl&) const = default;
};

// Ground sign term: constructor application over ground terms, or a data
// literal leaf.
struct SignTerm {
    enum class Head { Ctor, Int, Real, Str };

    Head head = Head::Ctor;
    std::string ctor;
    std::int64_t int_value = 0;
    double real_value = 0.0;
    std::string str_value;
    std::vector<SignTerm> args;

    static SignTerm make(std::string name, std::vector<SignTerm> arguments = {}) {
        SignTerm t;
        t.head = Head::Ctor;
        t.ctor = std::move(name);
        t.args = std::move(arguments);
        return t;
    }
    static SignTerm of_int(std::int64_t v) {
        SignTerm t;
        t.head = Head::Int;
        t.int_value = v;
        return t;
    }
    static SignTerm of_real(double v) {
        SignTerm t;
        t.head = Head::Real;
        t.real_value = v;
        return t;
    }
    static SignTerm of_str(std::string v) {
        SignTerm t;
        t.head = Head::Str;
        t.str_value = std::move(v);
        return t;
    }

    bool operator==(const SignTerm& other) const {
        if (head != other.head) return false;
        switch (head) {
            case Head::Int: return int_value == other.int_value;
            case Head::Real: return real_value == other.real_value;
            case Head::Str: return str_value == other.str_value;
            case Head::Ctor: return ctor == other.ctor && args == other.args;
        }
        return false;
    }
    bool operator!=(const SignTerm& other) const { return !(*this == other); }
};

inline std::string to_text(const SignTerm& term) {
    switch (term.head) {
        case SignTerm::Head::Int: return detail::format_int(term.int_value);
        case SignTerm::Head::Real: return detail::format_real(term.real_value);
        case SignTerm::Head::Str: return detail::quote_string(term.str_value);
        case SignTerm::Head::Ctor: {
            std::string out = term.ctor + "(";
            for (std::size_t i = 0; i < term.args.size(); ++i) {
                if (i) out += ", ";
                out += to_text(term.args[i]);
            }
            out += ")";
            return out;
        }
    }
    return "";
}

struct PatternAtom {
    enum class Kind { Wildcard, Variable, Ground };

    Kind kind = Kind::Wildcard;
    std::string variable;
    SignTerm term;

    static PatternAtom wildcard() { return {}; }
    static PatternAtom var(std::string name) {
        PatternAtom a;
        a.kind = Kind::Variable;
        a.variable = std::move(name);
        return a;
    }
    static PatternAtom ground(SignTerm t) {
        PatternAtom a;
        a.kind = Kind::Ground;
        a.term = std::move(t);
        return a;
    }

    bool operator==(const PatternAtom& other) const {
        if (kind != other.kind) return false;
        switch (kind) {
            case Kind::Wildcard: return true;
            case Kind::Variable: return variable == other.variable;
            case Kind::Ground: return term == other.term;
        }
        return false;
    }
};

// Ranked axiom. Rank 0 is the most important; larger ranks may be violated
// so that smaller ranks hold.
struct Constraint {
    enum class Op { Forbid, Require, AtMost };

    std::string name;
    std::int64_t rank = 0;
    Op op = Op::Forbid;
    std::string relation;
    std::vector<PatternAtom> pattern;
    std::int64_t limit = 0;

    bool operator==(const Constraint&) const = default;
};

struct SignSystem {
    std::string name;
    std::vector<SortDecl> sorts;
    std::vector<std::pair<std::string, std::string>> subsort_edges;  // (sub, super)
    std::vector<ConstructorDecl> constructors;
    std::vector<RelationDecl> relations;
    std::vector<Constraint> constraints;

    const SortDecl* find_sort(std::string_view n) const {
        for (const auto& s : sorts)
            if (s.name == n) return &s;
        return nullptr;
    }
    const ConstructorDecl* find_constructor(std::string_view n) const {
        for (const auto& c : constructors)
            if (c.name == n) return &c;
        return nullptr;
    }
    const RelationDecl* find_relation(std::string_view n) const {
        for (const auto& r : relations)
            if (r.name == n) return &r;
        return nullptr;
    }

    bool operator==(const SignSystem&) const = default;
};

using SystemPtr = std::shared_ptr<const SignSystem>;

inline bool same_system(const SignSystem& a, const SignSystem& b) {
    return &a == &b || a.name == b.name;
}

// --- literal kinds ---------------------------------------------------------

// V's contents are open-ended in the formalism; literals cover three kinds,
// and a data-sort's kind is recognized from its name.
inline std::optional<LiteralKind> literal_kind_of_sort(std::string_view sort_name) {
    std::string lower;
    lower.reserve(sort_name.size());
    for (char c : sort_name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "int" || lower == "integer" || lower == "nat" || lower == "natural")
        return LiteralKind::Int;
    if (lower == "real" || lower == "float" || lower == "double" || lower == "number")
        return LiteralKind::Real;
    if (lower == "string" || lower == "str" || lower == "text")
        return LiteralKind::Str;
    return std::nullopt;
}

inline std::optional<LiteralKind> literal_kind_of_term(const SignTerm& t) {
    switch (t.head) {
        case SignTerm::Head::Int: return LiteralKind::Int;
        case SignTerm::Head::Real: return LiteralKind::Real;
        case SignTerm::Head::Str: return LiteralKind::Str;
        case SignTerm::Head::Ctor: return std::nullopt;
    }
    return std::nullopt;
}

// First declared data-sort of the given kind, if any.
inline const SortDecl* data_sort_for(const SignSystem& sys, LiteralKind kind) {
    for (const auto& s : sys.sorts)
        if (s.kind == SortKind::Data && literal_kind_of_sort(s.name) == kind) return &s;
    return nullptr;
}

// --- subsort order ---------------------------------------------------------

// Reflexive-transitive closure query over subsort_edges. Throws on
// undeclared sorts.
inline bool subsort_leq(std::string_view sub, std::string_view super, const SignSystem& sys) {
    if (!sys.find_sort(sub)) throw Error(ErrorCode::UnknownSort, std::string(sub));
    if (!sys.find_sort(super)) throw Error(ErrorCode::UnknownSort, std::string(super));
    if (sub == super) return true;
    std::vector<std::string_view> frontier{sub};
    std::set<std::string_view> seen{sub};
    while (!frontier.empty()) {
        auto cur = frontier.back();
        frontier.pop_back();
        for (const auto& [lo, hi] : sys.subsort_edges) {
            if (lo != cur || seen.count(hi)) continue;
            if (hi == super) return true;
            seen.insert(hi);
            frontier.push_back(hi);
        }
    }
    return false;
}

// --- term sorting ----------------------------------------------------------

namespace detail {

// Does a term of sort `actual` fit a position declared as `expected`?
// Literals additionally fit any data-sort of their own kind.
inline bool sort_fits(const std::string& actual, const std::string& expected,
                      const SignTerm& term, const SignSystem& sys) {
    const SortDecl* exp = sys.find_sort(expected);
    if (exp && exp->kind == SortKind::Data) {
        auto kind = literal_kind_of_term(term);
        return kind && literal_kind_of_sort(expected) == *kind;
    }
    const SortDecl* act = sys.find_sort(actual);
    if (!act || act->kind == SortKind::Data) return false;
    return subsort_leq(actual, expected, sys);
}

}  // namespace detail

// Computes the sort of a ground term. Throws UNKNOWN_CONSTRUCTOR or
// SORT_MISMATCH.
inline std::string well_sorted(const SignTerm& term, const SignSystem& sys) {
    switch (term.head) {
        case SignTerm::Head::Int:
        case SignTerm::Head::Real:
        case SignTerm::Head::Str: {
            const SortDecl* s = data_sort_for(sys, *literal_kind_of_term(term));
            if (!s)
                throw Error(ErrorCode::UnknownConstructor,
                            "no data-sort for literal " + to_text(term) + " in system " + sys.name);
            return s->name;
        }
        case SignTerm::Head::Ctor: {
            const ConstructorDecl* c = sys.find_constructor(term.ctor);
            if (!c) throw Error(ErrorCode::UnknownConstructor, term.ctor);
            if (c->arg_sorts.size() != term.args.size())
                throw Error(ErrorCode::SortMismatch,
                            term.ctor + " expects " + std::to_string(c->arg_sorts.size()) +
                                " arguments, got " + std::to_string(term.args.size()));
            for (std::size_t i = 0; i < term.args.size(); ++i) {
                std::string actual = well_sorted(term.args[i], sys);
                if (!detail::sort_fits(actual, c->arg_sorts[i], term.args[i], sys))
                    throw Error(ErrorCode::SortMismatch,
                                "argument " + std::to_string(i + 1) + " of " + term.ctor + ": " +
                                    actual + " is not a subsort of " + c->arg_sorts[i]);
            }
            return c->result_sort;
        }
    }
    throw Error(ErrorCode::UnknownConstructor, "malformed term");
}

// --- configurations --------------------------------------------------------

struct RelationTuple {
    std::string relation;
    std::vector<std::string> args;  // term names

    bool operator==(const RelationTuple&) const = default;
};

inline std::string to_text(const RelationTuple& t) {
    std::string out = t.relation + "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ", ";
        out += t.args[i];
    }
    out += ")";
    return out;
}

// A finite model over a sign system: named ground terms plus relation
// tuples over them.
struct Configuration {
    SystemPtr system;
    std::string name;
    std::vector<std::pair<std::string, SignTerm>> terms;  // insertion order kept
    std::vector<RelationTuple> tuples;

    const SignTerm* find_term(std::string_view n) const {
        for (const auto& [tn, t] : terms)
            if (tn == n) return &t;
        return nullptr;
    }
    bool has_term(std::string_view n) const { return find_term(n) != nullptr; }
};

// Name-independent canonical form; two configurations with equal keys carry
// the same structure over the same system.
inline std::string canonical_key(const Configuration& cfg) {
    std::string out = "system " + (cfg.system ? cfg.system->name : std::string("?")) + "\n";
    std::vector<std::string> lines;
    lines.reserve(cfg.terms.size());
    for (const auto& [n, t] : cfg.terms) lines.push_back(n + " = " + to_text(t));
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out += l + "\n";
    lines.clear();
    for (const auto& tup : cfg.tuples) lines.push_back(to_text(tup));
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out += l + "\n";
    return out;
}

inline bool same_structure(const Configuration& a, const Configuration& b) {
    return canonical_key(a) == canonical_key(b);
}

// Boundary of a term: its computed sort's tag. Data-sorted terms carry none.
inline std::optional<Boundary> boundary_of_term(const SignTerm& term, const SignSystem& sys) {
    const SortDecl* s = sys.find_sort(well_sorted(term, sys));
    if (!s || s->kind == SortKind::Data) return std::nullopt;
    return s->boundary.value_or(Boundary::Product);
}

// --- validation ------------------------------------------------------------

namespace detail {

inline void report(ValidationReport& out, std::string code, std::string message) {
    out.push_back(Diagnostic{Severity::Error, std::move(code), std::move(message), 0, 0});
}

}  // namespace detail

// Checks every structural invariant of a system; an empty report means the
// system is valid. Never throws.
inline ValidationReport validate_system(const SignSystem& sys) {
    ValidationReport out;
    std::set<std::string> sort_names;
    for (const auto& s : sys.sorts) {
        if (!sort_names.insert(s.name).second)
            detail::report(out, "DUPLICATE_SORT", "sort " + s.name + " declared twice");
        if (s.kind == SortKind::Data && s.boundary)
            detail::report(out, "DATA_BOUNDARY", "data-sort " + s.name + " carries a boundary tag");
    }
    auto check_sort_ref = [&](const std::string& n, const std::string& where) -> const SortDecl* {
        const SortDecl* s = sys.find_sort(n);
        if (!s) detail::report(out, "UNKNOWN_SORT", where + " references undeclared sort " + n);
        return s;
    };
    for (const auto& [lo, hi] : sys.subsort_edges) {
        const SortDecl* a = check_sort_ref(lo, "subsort edge");
        const SortDecl* b = check_sort_ref(hi, "subsort edge");
        if (a && a->kind == SortKind::Data)
            detail::report(out, "SUBSORT_NOT_SIGN", "subsort edge uses data-sort " + lo);
        if (b && b->kind == SortKind::Data)
            detail::report(out, "SUBSORT_NOT_SIGN", "subsort edge uses data-sort " + hi);
    }
    // Antisymmetry of the closure: no two distinct sorts below each other.
    std::set<std::pair<std::string, std::string>> cycle_seen;
    for (const auto& a : sys.sorts) {
        for (const auto& b : sys.sorts) {
            if (a.name >= b.name) continue;
            if (a.kind == SortKind::Data || b.kind == SortKind::Data) continue;
            if (subsort_leq(a.name, b.name, sys) && subsort_leq(b.name, a.name, sys) &&
                cycle_seen.insert({a.name, b.name}).second)
                detail::report(out, "CYCLIC_SUBSORT",
                               "sorts " + a.name + " and " + b.name + " are subsorts of each other");
        }
    }
    std::set<std::string> ctor_names;
    for (const auto& c : sys.constructors) {
        if (!ctor_names.insert(c.name).second)
            detail::report(out, "DUPLICATE_CTOR", "constructor " + c.name + " declared twice");
        for (const auto& a : c.arg_sorts) check_sort_ref(a, "constructor " + c.name);
        const SortDecl* res = check_sort_ref(c.result_sort, "constructor " + c.name);
        if (res && res->kind != SortKind::Sign)
            detail::report(out, "NONSIGN_RESULT",
                           "constructor " + c.name + " results in data-sort " + c.result_sort);
    }
    std::set<std::string> rel_names;
    for (const auto& r : sys.relations) {
        if (!rel_names.insert(r.name).second)
            detail::report(out, "DUPLICATE_REL", "relation " + r.name + " declared twice");
        for (const auto& a : r.arg_sorts) check_sort_ref(a, "relation " + r.name);
    }
    std::set<std::string> cons_names;
    for (const auto& c : sys.constraints) {
        if (!cons_names.insert(c.name).second)
            detail::report(out, "DUPLICATE_CONSTRAINT", "constraint " + c.name + " declared twice");
        if (c.rank < 0)
            detail::report(out, "BAD_RANK", "constraint " + c.name + " has negative rank");
        if (c.op == Constraint::Op::AtMost && c.limit < 0)
            detail::report(out, "BAD_COUNT", "constraint " + c.name + " has negative count");
        const RelationDecl* rel = sys.find_relation(c.relation);
        if (!rel) {
            detail::report(out, "UNKNOWN_RELATION",
                           "constraint " + c.name + " references undeclared relation " + c.relation);
            continue;
        }
        if (c.op == Constraint::Op::AtMost) continue;
        if (c.pattern.size() != rel->arg_sorts.size()) {
            detail::report(out, "ARITY_MISMATCH",
                           "constraint " + c.name + " pattern arity " +
                               std::to_string(c.pattern.size()) + " does not match relation " +
                               c.relation + " arity " + std::to_string(rel->arg_sorts.size()));
            continue;
        }
        for (std::size_t i = 0; i < c.pattern.size(); ++i) {
            const auto& atom = c.pattern[i];
            if (atom.kind != PatternAtom::Kind::Ground) continue;
            try {
                std::string actual = well_sorted(atom.term, sys);
                if (!detail::sort_fits(actual, rel->arg_sorts[i], atom.term, sys))
                    detail::report(out, "PATTERN_SORT",
                                   "constraint " + c.name + " atom " + std::to_string(i + 1) +
                                       " has sort " + actual + ", expected " + rel->arg_sorts[i]);
            } catch (const Error& e) {
                detail::report(out, "PATTERN_SORT",
                               "constraint " + c.name + " atom " + std::to_string(i + 1) + ": " +
                                   e.what());
            }
        }
    }
    return out;
}

// Companion check for configurations (artifact plumbing; the spec's
// Configuration invariants).
inline ValidationReport validate_configuration(const Configuration& cfg) {
    ValidationReport out;
    if (!cfg.system) {
        detail::report(out, "NO_SYSTEM", "configuration has no system");
        return out;
    }
    const SignSystem& sys = *cfg.system;
    std::set<std::string> seen;
    std::map<std::string, std::string> term_sorts;
    for (const auto& [n, t] : cfg.terms) {
        if (!seen.insert(n).second)
            detail::report(out, "DUPLICATE_TERM", "term " + n + " defined twice");
        try {
            term_sorts[n] = well_sorted(t, sys);
        } catch (const Error& e) {
            detail::report(out, to_string(e.code()), "term " + n + ": " + e.what());
        }
    }
    std::set<std::string> tuple_texts;
    for (const auto& tup : cfg.tuples) {
        if (!tuple_texts.insert(to_text(tup)).second)
            detail::report(out, "DUPLICATE_TUPLE", "tuple " + to_text(tup) + " appears twice");
        const RelationDecl* rel = sys.find_relation(tup.relation);
        if (!rel) {
            detail::report(out, "UNKNOWN_RELATION",
                           "tuple references undeclared relation " + tup.relation);
            continue;
        }
        if (rel->arg_sorts.size() != tup.args.size()) {
            detail::report(out, "ARITY_MISMATCH",
                           "tuple " + to_text(tup) + " does not match arity of " + tup.relation);
            continue;
        }
        for (std::size_t i = 0; i < tup.args.size(); ++i) {
            const SignTerm* t = cfg.find_term(tup.args[i]);
            if (!t) {
                detail::report(out, "UNKNOWN_TERM",
                               "tuple " + to_text(tup) + " references missing term " + tup.args[i]);
                continue;
            }
            auto it = term_sorts.find(tup.args[i]);
            if (it == term_sorts.end()) continue;  // term itself already diagnosed
            if (!detail::sort_fits(it->second, rel->arg_sorts[i], *t, sys))
                detail::report(out, "TUPLE_SORT",
                               "tuple " + to_text(tup) + " argument " + std::to_string(i + 1) +
                                   " has sort " + it->second + ", expected " + rel->arg_sorts[i]);
        }
    }
    return out;
}

// --- constraint evaluation -------------------------------------------------

namespace detail {

inline bool tuple_matches(const Constraint& c, const RelationTuple& tup, const Configuration& cfg) {
    if (tup.args.size() != c.pattern.size()) return false;
    std::map<std::string, std::string> binding;
    for (std::size_t i = 0; i < c.pattern.size(); ++i) {
        const auto& atom = c.pattern[i];
        switch (atom.kind) {
            case PatternAtom::Kind::Wildcard: break;
            case PatternAtom::Kind::Variable: {
                auto [it, inserted] = binding.emplace(atom.variable, tup.args[i]);
                if (!inserted && it->second != tup.args[i]) return false;
                break;
            }
            case PatternAtom::Kind::Ground: {
                const SignTerm* t = cfg.find_term(tup.args[i]);
                if (!t || !(*t == atom.term)) return false;
                break;
            }
        }
    }
    return true;
}

}  // namespace detail

// True iff the constraint is satisfied on the configuration.
inline bool evaluate_constraint(const Constraint& c, const Configuration& cfg) {
    std::size_t rel_count = 0;
    bool any_match = false;
    for (const auto& tup : cfg.tuples) {
        if (tup.relation != c.relation) continue;
        ++rel_count;
        if (c.op != Constraint::Op::AtMost && !any_match && detail::tuple_matches(c, tup, cfg))
            any_match = true;
    }
    switch (c.op) {
        case Constraint::Op::Forbid: return !any_match;
        case Constraint::Op::Require: return any_match;
        case Constraint::Op::AtMost: return rel_count <= static_cast<std::size_t>(c.limit);
    }
    return true;
}

struct ConstraintStatus {
    std::string name;
    std::int64_t rank = 0;
    bool satisfied = true;

    bool operator==(const ConstraintStatus&) const = default;
};

// One entry per constraint, ordered by (rank, name).
inline std::vector<ConstraintStatus> constraint_profile(const Configuration& cfg) {
    std::vector<ConstraintStatus> out;
    if (!cfg.system) return out;
    for (const auto& c : cfg.system->constraints)
        out.push_back({c.name, c.rank, evaluate_constraint(c, cfg)});
    std::sort(out.begin(), out.end(), [](const ConstraintStatus& a, const ConstraintStatus& b) {
        return a.rank != b.rank ? a.rank < b.rank : a.name < b.name;
    });
    return out;
}

}  // namespace sgn
