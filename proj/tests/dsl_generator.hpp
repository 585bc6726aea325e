#pragma once

#include <string>
#include <vector>

#include "sgn/detail/rng.hpp"
#include "sgn/dsl.hpp"

namespace dsl_gen {

using sgn::detail::Rng;
namespace dsl = sgn::dsl;

// Identifiers that can never collide with grammar keywords.
inline std::string ident(Rng& rng, const char* stem) {
    return std::string(stem) + std::to_string(rng.below(100000));
}

inline double small_real(Rng& rng) {
    switch (rng.below(4)) {
        case 0: return static_cast<double>(rng.below(100));
        case 1: return rng.unit() * 100.0 - 50.0;
        case 2: return rng.unit() * 1e-6;
        default: return -static_cast<double>(rng.below(1000)) / 7.0;
    }
}

// A structurally valid system block: declarations ordered so every
// reference points backwards, matching the parser's single pass.
inline sgn::SignSystem gen_system(Rng& rng, const std::string& name) {
    using namespace sgn;
    SignSystem sys;
    sys.name = name;
    const int n_sorts = 1 + static_cast<int>(rng.below(4));
    std::vector<std::string> sign_names;
    for (int i = 0; i < n_sorts; ++i) {
        std::string sn = "s" + std::to_string(i) + "_" + name;
        std::optional<Boundary> b;
        if (rng.below(3) == 1) b = Boundary::Product;
        if (rng.below(3) == 2) b = Boundary::Environment;
        sys.sorts.push_back(SortDecl{sn, SortKind::Sign, b});
        sign_names.push_back(sn);
        if (i > 0 && rng.below(2) == 0)
            sys.subsort_edges.emplace_back(sn, sign_names[rng.below(static_cast<std::uint64_t>(i))]);
    }
    bool has_real = rng.below(2) == 0;
    if (has_real) sys.sorts.push_back(SortDecl{"Real", SortKind::Data, std::nullopt});

    const int n_ctors = static_cast<int>(rng.below(4));
    for (int i = 0; i < n_ctors; ++i) {
        ConstructorDecl c;
        c.name = "c" + std::to_string(i) + "_" + name;
        const int arity = static_cast<int>(rng.below(3));
        for (int a = 0; a < arity; ++a) {
            if (has_real && rng.below(4) == 0)
                c.arg_sorts.push_back("Real");
            else
                c.arg_sorts.push_back(sign_names[rng.below(sign_names.size())]);
        }
        c.result_sort = sign_names[rng.below(sign_names.size())];
        c.level = static_cast<std::int64_t>(rng.below(5));
        c.priority = rng.below(3) ? 0 : static_cast<std::int64_t>(rng.below(9)) - 4;
        sys.constructors.push_back(std::move(c));
    }
    const int n_rels = static_cast<int>(rng.below(3));
    for (int i = 0; i < n_rels; ++i) {
        RelationDecl r;
        r.name = "r" + std::to_string(i) + "_" + name;
        const int arity = 1 + static_cast<int>(rng.below(2));
        for (int a = 0; a < arity; ++a)
            r.arg_sorts.push_back(sign_names[rng.below(sign_names.size())]);
        sys.relations.push_back(std::move(r));
    }
    // a couple of axioms over declared relations
    for (std::size_t i = 0; i < sys.relations.size() && i < 2; ++i) {
        const RelationDecl& rel = sys.relations[i];
        Constraint c;
        c.name = "a" + std::to_string(i) + "_" + name;
        c.rank = static_cast<std::int64_t>(rng.below(3));
        c.relation = rel.name;
        switch (rng.below(3)) {
            case 0: c.op = Constraint::Op::Forbid; break;
            case 1: c.op = Constraint::Op::Require; break;
            default: c.op = Constraint::Op::AtMost; break;
        }
        if (c.op == Constraint::Op::AtMost) {
            c.limit = static_cast<std::int64_t>(rng.below(5));
        } else {
            for (const auto& want : rel.arg_sorts) {
                switch (rng.below(3)) {
                    case 0:
                        c.pattern.push_back(PatternAtom::wildcard());
                        break;
                    case 1:
                        c.pattern.push_back(PatternAtom::var("x" + std::to_string(rng.below(2))));
                        break;
                    default: {
                        // ground atom: a nullary constructor of a fitting sort if any
                        const ConstructorDecl* found = nullptr;
                        for (const auto& cd : sys.constructors)
                            if (cd.arg_sorts.empty() && subsort_leq(cd.result_sort, want, sys)) {
                                found = &cd;
                                break;
                            }
                        c.pattern.push_back(found ? PatternAtom::ground(SignTerm::make(found->name))
                                                  : PatternAtom::wildcard());
                        break;
                    }
                }
            }
        }
        sys.constraints.push_back(std::move(c));
    }
    return sys;
}

inline dsl::TermSyntax gen_term(Rng& rng, const sgn::SignSystem& sys, int depth = 0) {
    dsl::TermSyntax t;
    std::vector<const sgn::ConstructorDecl*> ctors;
    for (const auto& c : sys.constructors)
        if (depth > 0 || c.arg_sorts.empty()) ctors.push_back(&c);
    if (ctors.empty() || rng.below(4) == 0) {
        switch (rng.below(3)) {
            case 0:
                t.kind = dsl::TermSyntax::Kind::Int;
                t.int_value = static_cast<std::int64_t>(rng.below(1000)) - 500;
                return t;
            case 1:
                t.kind = dsl::TermSyntax::Kind::Real;
                t.real_value = small_real(rng);
                return t;
            default:
                t.kind = dsl::TermSyntax::Kind::Str;
                t.str_value = "s\"q\\u" + std::to_string(rng.below(10));
                return t;
        }
    }
    const sgn::ConstructorDecl* c = ctors[rng.below(ctors.size())];
    t.kind = dsl::TermSyntax::Kind::Apply;
    t.name = c->name;
    for (std::size_t i = 0; i < c->arg_sorts.size(); ++i)
        t.args.push_back(gen_term(rng, sys, depth - 1));
    return t;
}

inline dsl::ConfigBlock gen_config(Rng& rng, const sgn::SignSystem& sys, const std::string& name) {
    dsl::ConfigBlock cb;
    cb.name = name;
    cb.system = sys.name;
    const int n_terms = static_cast<int>(rng.below(4));
    std::vector<std::string> term_names;
    for (int i = 0; i < n_terms; ++i) {
        dsl::ConfigEntry e;
        e.kind = dsl::ConfigEntry::Kind::Term;
        e.name = "t" + std::to_string(i) + "_" + name;
        e.term = gen_term(rng, sys, 2);
        term_names.push_back(e.name);
        cb.entries.push_back(std::move(e));
    }
    if (!term_names.empty())
        for (const auto& rel : sys.relations) {
            if (rng.below(2)) continue;
            dsl::ConfigEntry e;
            e.kind = dsl::ConfigEntry::Kind::Tuple;
            e.name = rel.name;
            for (std::size_t i = 0; i < rel.arg_sorts.size(); ++i)
                e.args.push_back(term_names[rng.below(term_names.size())]);
            cb.entries.push_back(std::move(e));
        }
    return cb;
}

inline dsl::MorphismBlock gen_morphism(Rng& rng, const sgn::SignSystem& a,
                                       const sgn::SignSystem& b, const std::string& name) {
    dsl::MorphismBlock mb;
    mb.name = name;
    mb.source = a.name;
    mb.target = b.name;
    auto pick = [&](const std::vector<std::string>& pool) {
        return pool.empty() ? std::string("x") : pool[rng.below(pool.size())];
    };
    std::vector<std::string> b_sorts, b_ctors, b_rels;
    for (const auto& s : b.sorts) b_sorts.push_back(s.name);
    for (const auto& c : b.constructors) b_ctors.push_back(c.name);
    for (const auto& r : b.relations) b_rels.push_back(r.name);
    std::set<std::string> used;
    for (const auto& s : a.sorts)
        if (rng.below(2) && !b_sorts.empty() && used.insert(s.name).second)
            mb.entries.push_back({dsl::MorphismMapEntry::Kind::Sort, s.name, pick(b_sorts), {}});
    for (const auto& c : a.constructors)
        if (rng.below(2) && !b_ctors.empty())
            mb.entries.push_back({dsl::MorphismMapEntry::Kind::Ctor, c.name, pick(b_ctors), {}});
    for (const auto& r : a.relations)
        if (rng.below(2) && !b_rels.empty())
            mb.entries.push_back({dsl::MorphismMapEntry::Kind::Rel, r.name, pick(b_rels), {}});
    return mb;
}

inline dsl::SequenceBlock gen_sequence(Rng& rng, const std::string& name,
                                       const std::vector<std::string>& config_names,
                                       const std::vector<std::string>& morphism_names,
                                       const std::vector<std::string>& system_names) {
    dsl::SequenceBlock sb;
    sb.name = name;
    const int n_comp = 1 + static_cast<int>(rng.below(2));
    std::int64_t t = 0;
    auto pick = [&](const std::vector<std::string>& pool) {
        return pool.empty() ? std::string("x") : pool[rng.below(pool.size())];
    };
    for (int i = 0; i < n_comp; ++i) {
        dsl::ComponentSyntax comp;
        comp.t1 = t;
        comp.t2 = t + 1 + static_cast<std::int64_t>(rng.below(3));
        t = comp.t2;
        comp.from_config = pick(config_names);
        const int n_steps = static_cast<int>(rng.below(3));
        for (int s = 0; s < n_steps; ++s) {
            dsl::StepSyntax st;
            switch (rng.below(3)) {
                case 0:
                    st.kind = dsl::StepSyntax::Kind::Vary;
                    st.depth = 1 + static_cast<std::int64_t>(rng.below(3));
                    st.budget = static_cast<std::int64_t>(rng.below(4));
                    break;
                case 1:
                    st.kind = dsl::StepSyntax::Kind::Select;
                    st.minimal = rng.below(2);
                    break;
                default:
                    st.kind = dsl::StepSyntax::Kind::Apply;
                    st.morphism = pick(morphism_names);
                    break;
            }
            comp.steps.push_back(std::move(st));
        }
        const int n_branches = 1 + static_cast<int>(rng.below(3));
        for (int b = 0; b < n_branches; ++b) {
            dsl::BranchSyntax br;
            br.morphism = pick(morphism_names);
            br.probability = 1.0 / n_branches;
            br.target = pick(system_names);
            comp.branches.push_back(std::move(br));
        }
        sb.components.push_back(std::move(comp));
    }
    return sb;
}

inline dsl::ScenarioBlock gen_scenario(Rng& rng, const std::string& name,
                                       const std::vector<std::string>& config_names) {
    dsl::ScenarioBlock sc;
    sc.name = name;
    const int n_envs = 1 + static_cast<int>(rng.below(2));
    const std::size_t dim = 1 + rng.below(3);
    std::vector<std::string> env_names;
    for (int i = 0; i < n_envs; ++i) {
        dsl::EnvDecl env;
        env.id = "e" + std::to_string(i) + "_" + name;
        for (std::size_t d = 0; d < dim; ++d) env.features.push_back(small_real(rng));
        env.rates.emplace_back("part_movement", rng.unit() * 4.0);
        if (rng.below(2)) env.rates.emplace_back("mode_switch", rng.unit());
        env_names.push_back(env.id);
        sc.envs.push_back(std::move(env));
    }
    const int n_products = static_cast<int>(rng.below(3));
    auto pick = [&](const std::vector<std::string>& pool) {
        return pool.empty() ? std::string("x") : pool[rng.below(pool.size())];
    };
    for (int i = 0; i < n_products; ++i) {
        dsl::ProductDecl p;
        p.id = "p" + std::to_string(i) + "_" + name;
        p.config = pick(config_names);
        p.env = pick(env_names);
        p.manufacturer = "m" + std::to_string(rng.below(2));
        if (rng.below(2)) p.params.emplace_back("temp", small_real(rng));
        sc.products.push_back(p);
        if (rng.below(2)) {
            dsl::AgentDecl a;
            a.product = p.id;
            a.weber = 0.05 + rng.unit() * 0.5;
            a.window = 1 + static_cast<std::int64_t>(rng.below(20));
            if (rng.below(2)) {
                dsl::ExpectDecl e;
                e.functional = rng.below(2);
                e.subject = e.functional ? "temp" : "part_movement";
                e.low = -1.0;
                e.high = e.low + rng.unit() * 10.0;
                a.expects.push_back(std::move(e));
            }
            sc.agents.push_back(std::move(a));
        }
    }
    if (rng.below(3) != 2) sc.adapt = rng.below(2) == 0;
    return sc;
}

// A whole random file at the block level.
inline dsl::ParsedFile gen_file(std::uint64_t seed) {
    Rng rng(seed);
    dsl::ParsedFile file;
    file.path = "<generated>";
    std::vector<std::string> system_names, config_names, morphism_names;
    std::vector<sgn::SignSystem> systems;
    const int n_systems = 1 + static_cast<int>(rng.below(2));
    for (int i = 0; i < n_systems; ++i) {
        std::string name = ident(rng, "Sys");
        sgn::SignSystem sys = gen_system(rng, name);
        system_names.push_back(name);
        systems.push_back(sys);
        file.blocks.push_back(dsl::SystemBlock{std::move(sys), {}});
    }
    const int n_configs = static_cast<int>(rng.below(3));
    for (int i = 0; i < n_configs; ++i) {
        std::string name = ident(rng, "cfg");
        config_names.push_back(name);
        file.blocks.push_back(gen_config(rng, systems[rng.below(systems.size())], name));
    }
    const int n_morphisms = static_cast<int>(rng.below(3));
    for (int i = 0; i < n_morphisms; ++i) {
        std::string name = ident(rng, "mor");
        morphism_names.push_back(name);
        const auto& a = systems[rng.below(systems.size())];
        const auto& b = systems[rng.below(systems.size())];
        file.blocks.push_back(gen_morphism(rng, a, b, name));
    }
    if (!config_names.empty() && rng.below(2))
        file.blocks.push_back(
            dsl::Block{gen_sequence(rng, ident(rng, "seq"), config_names, morphism_names,
                                    system_names)});
    if (rng.below(2))
        file.blocks.push_back(dsl::Block{gen_scenario(rng, ident(rng, "scn"), config_names)});
    return file;
}

}  // namespace dsl_gen
