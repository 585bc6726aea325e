#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sgn/detail/rng.hpp"
#include "sgn/morphism.hpp"

namespace sgn {

inline constexpr double kProbabilityTolerance = 1e-9;

// One step of f: generate variety, prune it, or translate in place.
struct SemioticStep {
    enum class Kind { Variation, Selection, Morphism };

    Kind kind = Kind::Variation;
    std::int64_t depth_bound = 1;      // Variation
    std::int64_t relation_budget = 0;  // Variation
    bool minimality = false;           // Selection
    MorphismPtr morphism;              // Morphism

    static SemioticStep variation(std::int64_t depth, std::int64_t budget) {
        SemioticStep s;
        s.kind = Kind::Variation;
        s.depth_bound = depth;
        s.relation_budget = budget;
        return s;
    }
    static SemioticStep selection(bool minimal = false) {
        SemioticStep s;
        s.kind = Kind::Selection;
        s.minimality = minimal;
        return s;
    }
    static SemioticStep apply(MorphismPtr m) {
        SemioticStep s;
        s.kind = Kind::Morphism;
        s.morphism = std::move(m);
        return s;
    }
};

struct Branch {
    MorphismPtr morphism;
    double probability = 1.0;
    SystemPtr target_system;
};

// The unit of life-cycle semiosis: internal variation/selection steps under
// information closure, then probability-weighted branch translations.
struct BasicComponent {
    SystemPtr source_system;
    Configuration source_config;
    std::vector<SemioticStep> steps;
    std::vector<Branch> branches;
    std::int64_t t1 = 0;
    std::int64_t t2 = 1;
};

struct SemiosisSequence {
    std::string name;
    std::vector<BasicComponent> components;
};

struct LawReport {
    bool law1_holds = false;
    std::optional<std::size_t> well_defined_witness;
    std::optional<std::pair<std::size_t, std::size_t>> level_break_witness;
    std::vector<std::vector<bool>> law2_verdicts;  // [component][branch]
};

// --- variation ---------------------------------------------------------

// Adds every well-sorted ground term buildable from the configuration's
// terms and the system's constructors, up to the height bound (existing
// terms have height 1), then up to relation_budget fresh tuples drawn
// deterministically from the seed. No symbols outside the system are used.
inline Configuration variation(const Configuration& cfg, std::int64_t depth_bound,
                               std::int64_t relation_budget, std::uint64_t seed) {
    Configuration out = cfg;
    const SignSystem& sys = *cfg.system;

    // Constructors in deterministic order: level, then priority, then name.
    std::vector<const ConstructorDecl*> ctors;
    for (const auto& c : sys.constructors) ctors.push_back(&c);
    std::sort(ctors.begin(), ctors.end(), [](const ConstructorDecl* a, const ConstructorDecl* b) {
        if (a->level != b->level) return a->level < b->level;
        if (a->priority != b->priority) return a->priority < b->priority;
        return a->name < b->name;
    });

    struct PoolEntry {
        std::string name;
        std::string sort;
        std::int64_t height;  // building height: input terms count as 1
        const SignTerm* term;
    };
    std::vector<PoolEntry> pool;
    std::set<std::string> used_texts;
    std::set<std::string> used_names;
    std::map<std::string, std::int64_t> heights;
    for (const auto& [n, t] : out.terms) {
        used_names.insert(n);
        used_texts.insert(to_text(t));
        heights[n] = 1;
    }

    std::uint64_t fresh_counter = 0;
    auto fresh_name = [&] {
        std::string candidate;
        do {
            candidate = "v" + std::to_string(++fresh_counter);
        } while (used_names.count(candidate));
        used_names.insert(candidate);
        return candidate;
    };

    auto seed_pool = [&] {
        pool.clear();
        for (const auto& [n, t] : out.terms) {
            try {
                pool.push_back({n, well_sorted(t, sys), heights.at(n), &t});
            } catch (const Error&) {
                // ill-sorted inputs take no part in generation
            }
        }
        std::sort(pool.begin(), pool.end(),
                  [](const PoolEntry& a, const PoolEntry& b) { return a.name < b.name; });
    };

    // Constant constructors build height-1 terms.
    if (depth_bound >= 1) {
        for (const ConstructorDecl* c : ctors) {
            if (!c->arg_sorts.empty()) continue;
            SignTerm t = SignTerm::make(c->name);
            if (used_texts.insert(to_text(t)).second) {
                std::string n = fresh_name();
                heights[n] = 1;
                out.terms.emplace_back(std::move(n), std::move(t));
            }
        }
    }
    seed_pool();

    for (std::int64_t height = 2; height <= depth_bound; ++height) {
        std::vector<std::pair<std::string, SignTerm>> added;
        for (const ConstructorDecl* c : ctors) {
            if (c->arg_sorts.empty()) continue;
            // Candidate argument lists in lexicographic order of term names.
            std::vector<std::vector<const PoolEntry*>> options(c->arg_sorts.size());
            bool feasible = true;
            for (std::size_t i = 0; i < c->arg_sorts.size(); ++i) {
                for (const auto& e : pool)
                    if (detail::sort_fits(e.sort, c->arg_sorts[i], *e.term, sys))
                        options[i].push_back(&e);
                if (options[i].empty()) {
                    feasible = false;
                    break;
                }
            }
            if (!feasible) continue;
            std::vector<std::size_t> idx(c->arg_sorts.size(), 0);
            while (true) {
                std::int64_t max_arg_height = 0;
                SignTerm t = SignTerm::make(c->name);
                for (std::size_t i = 0; i < idx.size(); ++i) {
                    const PoolEntry* e = options[i][idx[i]];
                    t.args.push_back(*e->term);
                    max_arg_height = std::max(max_arg_height, e->height);
                }
                if (max_arg_height + 1 == height && used_texts.insert(to_text(t)).second)
                    added.emplace_back(fresh_name(), std::move(t));
                // odometer over argument choices
                std::size_t pos = idx.size();
                while (pos > 0) {
                    --pos;
                    if (++idx[pos] < options[pos].size()) break;
                    idx[pos] = 0;
                    if (pos == 0) goto ctor_done;
                }
            }
        ctor_done:;
        }
        if (added.empty()) break;
        for (auto& [n, t] : added) {
            heights[n] = height;
            out.terms.emplace_back(n, std::move(t));
        }
        seed_pool();
    }

    if (relation_budget > 0 && !sys.relations.empty()) {
        // All fresh well-sorted tuples, in deterministic order.
        std::set<std::string> tuple_texts;
        for (const auto& t : out.tuples) tuple_texts.insert(to_text(t));
        std::vector<const RelationDecl*> rels;
        for (const auto& r : sys.relations) rels.push_back(&r);
        std::sort(rels.begin(), rels.end(),
                  [](const RelationDecl* a, const RelationDecl* b) { return a->name < b->name; });
        std::vector<RelationTuple> candidates;
        for (const RelationDecl* r : rels) {
            std::vector<std::vector<const PoolEntry*>> options(r->arg_sorts.size());
            bool feasible = !r->arg_sorts.empty();
            for (std::size_t i = 0; i < r->arg_sorts.size(); ++i) {
                for (const auto& e : pool)
                    if (detail::sort_fits(e.sort, r->arg_sorts[i], *e.term, sys))
                        options[i].push_back(&e);
                if (options[i].empty()) {
                    feasible = false;
                    break;
                }
            }
            if (!feasible) continue;
            std::vector<std::size_t> idx(r->arg_sorts.size(), 0);
            while (true) {
                RelationTuple tup;
                tup.relation = r->name;
                for (std::size_t i = 0; i < idx.size(); ++i)
                    tup.args.push_back(options[i][idx[i]]->name);
                if (tuple_texts.insert(to_text(tup)).second) candidates.push_back(std::move(tup));
                std::size_t pos = idx.size();
                while (pos > 0) {
                    --pos;
                    if (++idx[pos] < options[pos].size()) break;
                    idx[pos] = 0;
                    if (pos == 0) goto rel_done;
                }
            }
        rel_done:;
        }
        detail::Rng rng(seed);
        const std::size_t take =
            std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(relation_budget));
        // Partial Fisher-Yates, then restore enumeration order for output.
        std::vector<std::size_t> order(candidates.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        for (std::size_t i = 0; i < take; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.below(order.size() - i));
            std::swap(order[i], order[j]);
        }
        std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<long>(take));
        std::sort(chosen.begin(), chosen.end());
        for (std::size_t i : chosen) out.tuples.push_back(candidates[i]);
    }
    return out;
}

// --- selection ---------------------------------------------------------

struct SelectionResult {
    Configuration config;
    bool unrepairable = false;                  // some REQUIRE stays violated
    std::vector<std::string> violated_requires;  // their names, (rank, name) order
};

// Rank-lexicographic repair: walk constraints by ascending (rank, name);
// violated FORBIDs lose every matching tuple, violated AT_MOSTs lose the
// lexicographically greatest tuples first, REQUIREs are only reported.
// With minimality set, terms outside `baseline` that no tuple references
// are dropped (baseline defaults to the input's own terms).
inline SelectionResult selection(const Configuration& cfg, bool minimality = false,
                                 const std::set<std::string>* baseline = nullptr) {
    SelectionResult res;
    res.config = cfg;
    Configuration& out = res.config;
    if (!cfg.system) return res;

    std::vector<const Constraint*> order;
    for (const auto& c : cfg.system->constraints) order.push_back(&c);
    std::sort(order.begin(), order.end(), [](const Constraint* a, const Constraint* b) {
        return a->rank != b->rank ? a->rank < b->rank : a->name < b->name;
    });

    for (const Constraint* c : order) {
        switch (c->op) {
            case Constraint::Op::Forbid: {
                std::vector<RelationTuple> kept;
                kept.reserve(out.tuples.size());
                for (auto& tup : out.tuples)
                    if (tup.relation != c->relation || !detail::tuple_matches(*c, tup, out))
                        kept.push_back(std::move(tup));
                out.tuples = std::move(kept);
                break;
            }
            case Constraint::Op::AtMost: {
                std::vector<std::size_t> members;
                for (std::size_t i = 0; i < out.tuples.size(); ++i)
                    if (out.tuples[i].relation == c->relation) members.push_back(i);
                if (members.size() <= static_cast<std::size_t>(std::max<std::int64_t>(c->limit, 0)))
                    break;
                std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
                    return to_text(out.tuples[a]) > to_text(out.tuples[b]);
                });
                std::size_t excess =
                    members.size() - static_cast<std::size_t>(std::max<std::int64_t>(c->limit, 0));
                std::set<std::size_t> doomed(members.begin(),
                                             members.begin() + static_cast<long>(excess));
                std::vector<RelationTuple> kept;
                kept.reserve(out.tuples.size() - doomed.size());
                for (std::size_t i = 0; i < out.tuples.size(); ++i)
                    if (!doomed.count(i)) kept.push_back(std::move(out.tuples[i]));
                out.tuples = std::move(kept);
                break;
            }
            case Constraint::Op::Require:
                break;  // checked after all repairs
        }
    }
    for (const Constraint* c : order)
        if (c->op == Constraint::Op::Require && !evaluate_constraint(*c, out))
            res.violated_requires.push_back(c->name);
    res.unrepairable = !res.violated_requires.empty();

    if (minimality) {
        std::set<std::string> keep;
        if (baseline) {
            keep = *baseline;
        } else {
            for (const auto& [n, t] : cfg.terms) keep.insert(n);
        }
        std::set<std::string> referenced;
        for (const auto& tup : out.tuples)
            for (const auto& a : tup.args) referenced.insert(a);
        std::vector<std::pair<std::string, SignTerm>> kept;
        for (auto& [n, t] : out.terms)
            if (keep.count(n) || referenced.count(n)) kept.emplace_back(n, std::move(t));
        out.terms = std::move(kept);
    }
    return res;
}

// --- basic components ----------------------------------------------------

// Field validation for Eq.-style components: probabilities positive and
// summing to one, ordered timestamps, and information closure for the
// internal morphism steps (endomorphisms of the source system only).
inline BasicComponent make_component(SystemPtr source_system, Configuration source_config,
                                     std::vector<SemioticStep> steps, std::vector<Branch> branches,
                                     std::int64_t t1, std::int64_t t2) {
    if (t2 <= t1) throw Error(ErrorCode::TimeOrder, "t2 must be greater than t1");
    if (branches.empty()) throw Error(ErrorCode::NonpositiveProb, "component has no branches");
    double sum = 0.0;
    for (const auto& b : branches) {
        if (!(b.probability > 0.0))
            throw Error(ErrorCode::NonpositiveProb,
                        "branch probability " + detail::format_real(b.probability));
        sum += b.probability;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance)
        throw Error(ErrorCode::ProbSum, "branch probabilities sum to " + detail::format_real(sum));
    for (const auto& s : steps) {
        if (s.kind == SemioticStep::Kind::Variation && s.depth_bound < 1)
            throw Error(ErrorCode::ClosureViolation, "variation depth bound must be >= 1");
        if (s.kind == SemioticStep::Kind::Variation && s.relation_budget < 0)
            throw Error(ErrorCode::ClosureViolation, "variation relation budget must be >= 0");
        if (s.kind != SemioticStep::Kind::Morphism) continue;
        if (!s.morphism || !s.morphism->source || !s.morphism->target ||
            !same_system(*s.morphism->source, *source_system) ||
            !same_system(*s.morphism->target, *source_system))
            throw Error(ErrorCode::ClosureViolation,
                        "step morphism must be an endomorphism of " + source_system->name);
        if (!validate_morphism(*s.morphism).valid)
            throw Error(ErrorCode::InvalidMorphism, "step morphism " + s.morphism->name);
    }
    for (const auto& b : branches) {
        if (!b.morphism || !b.morphism->source || !same_system(*b.morphism->source, *source_system))
            throw Error(ErrorCode::SystemMismatch,
                        "branch morphism must start from " + source_system->name);
        if (!b.target_system || !same_system(*b.morphism->target, *b.target_system))
            throw Error(ErrorCode::SystemMismatch,
                        "branch morphism " + b.morphism->name + " does not reach its target system");
        if (!validate_morphism(*b.morphism).valid)
            throw Error(ErrorCode::InvalidMorphism, "branch morphism " + b.morphism->name);
    }
    BasicComponent c;
    c.source_system = std::move(source_system);
    c.source_config = std::move(source_config);
    c.steps = std::move(steps);
    c.branches = std::move(branches);
    c.t1 = t1;
    c.t2 = t2;
    return c;
}

// Chaining and timestamp checks over a whole sequence.
inline ValidationReport validate_sequence(const SemiosisSequence& seq) {
    ValidationReport out;
    for (std::size_t i = 0; i + 1 < seq.components.size(); ++i) {
        const auto& cur = seq.components[i];
        const auto& next = seq.components[i + 1];
        for (const auto& b : cur.branches)
            if (!b.target_system || !next.source_system ||
                !same_system(*b.target_system, *next.source_system))
                detail::report(out, "CHAIN_BROKEN",
                               "component " + std::to_string(i) + " branch targets " +
                                   (b.target_system ? b.target_system->name : "?") +
                                   " but the next component starts from " +
                                   (next.source_system ? next.source_system->name : "?"));
        if (next.t1 < cur.t2)
            detail::report(out, "TIME_ORDER",
                           "component " + std::to_string(i + 1) + " starts before its predecessor ends");
    }
    return out;
}

inline std::uint64_t step_seed(std::uint64_t seed, std::size_t component, std::size_t step) {
    return detail::mix_seed(detail::mix_seed(seed, component + 1), step + 0x5103);
}

// Runs the internal steps f on a configuration. Selection minimality is
// judged against the configuration the pipeline started from.
inline Configuration run_steps(const Configuration& start, const std::vector<SemioticStep>& steps,
                               std::uint64_t seed, std::size_t component_index = 0) {
    Configuration cfg = start;
    std::set<std::string> baseline;
    for (const auto& [n, t] : start.terms) baseline.insert(n);
    for (std::size_t j = 0; j < steps.size(); ++j) {
        const auto& s = steps[j];
        switch (s.kind) {
            case SemioticStep::Kind::Variation:
                cfg = variation(cfg, s.depth_bound, s.relation_budget,
                                step_seed(seed, component_index, j));
                break;
            case SemioticStep::Kind::Selection:
                cfg = selection(cfg, s.minimality, &baseline).config;
                break;
            case SemioticStep::Kind::Morphism:
                cfg = apply_morphism(*s.morphism, cfg);
                break;
        }
    }
    return cfg;
}

// A component is well defined when not all of its transformations are
// isomorphisms. Variation/selection steps count as non-isomorphic exactly
// when they act non-trivially on the component's own source configuration.
inline bool is_well_defined(const BasicComponent& c) {
    for (const auto& b : c.branches)
        if (!is_isomorphism(*b.morphism)) return true;
    for (const auto& s : c.steps) {
        switch (s.kind) {
            case SemioticStep::Kind::Morphism:
                if (!is_isomorphism(*s.morphism)) return true;
                break;
            case SemioticStep::Kind::Variation: {
                Configuration probe =
                    variation(c.source_config, s.depth_bound, s.relation_budget, 0);
                if (!same_structure(probe, c.source_config)) return true;
                break;
            }
            case SemioticStep::Kind::Selection: {
                std::set<std::string> baseline;
                for (const auto& [n, t] : c.source_config.terms) baseline.insert(n);
                Configuration probe = selection(c.source_config, s.minimality, &baseline).config;
                if (!same_structure(probe, c.source_config)) return true;
                break;
            }
        }
    }
    return false;
}

// Law I: some component is well defined AND some branch morphism breaks the
// level order. Witnesses point at the first of each.
inline LawReport check_law_one(const SemiosisSequence& seq) {
    LawReport rep;
    for (std::size_t i = 0; i < seq.components.size(); ++i) {
        if (!rep.well_defined_witness && is_well_defined(seq.components[i]))
            rep.well_defined_witness = i;
        if (!rep.level_break_witness)
            for (std::size_t k = 0; k < seq.components[i].branches.size(); ++k)
                if (!is_level_preserving(*seq.components[i].branches[k].morphism)) {
                    rep.level_break_witness = {i, k};
                    break;
                }
    }
    rep.law1_holds = rep.well_defined_witness.has_value() && rep.level_break_witness.has_value();
    return rep;
}

// Law II per branch: epsilon strictly decreases from the post-f
// configuration to the post-branch configuration. Stage configurations
// default to each component's own source configuration.
inline std::vector<std::vector<bool>> check_law_two(
    const SemiosisSequence& seq, const std::vector<Configuration>* configs_per_stage = nullptr,
    std::uint64_t seed = 0) {
    if (configs_per_stage && configs_per_stage->size() != seq.components.size())
        throw Error(ErrorCode::IndexOutOfRange, "one designated configuration per stage required");
    std::vector<std::vector<bool>> verdicts;
    for (std::size_t i = 0; i < seq.components.size(); ++i) {
        const auto& comp = seq.components[i];
        const Configuration& start =
            configs_per_stage ? (*configs_per_stage)[i] : comp.source_config;
        Configuration after_f = run_steps(start, comp.steps, seed, i);
        std::vector<bool> row;
        row.reserve(comp.branches.size());
        for (const auto& b : comp.branches) {
            Configuration after_m = apply_morphism(*b.morphism, after_f);
            row.push_back(is_natural(after_f, after_m));
        }
        verdicts.push_back(std::move(row));
    }
    return verdicts;
}

// Designated configuration path for a sequence: start from `first`, run f,
// then follow the most probable branch (lowest index on ties).
inline std::vector<Configuration> stage_configs_modal(const SemiosisSequence& seq,
                                                      const Configuration& first,
                                                      std::uint64_t seed = 0) {
    std::vector<Configuration> stages;
    Configuration cfg = first;
    for (std::size_t i = 0; i < seq.components.size(); ++i) {
        const auto& comp = seq.components[i];
        stages.push_back(cfg);
        Configuration after_f = run_steps(cfg, comp.steps, seed, i);
        std::size_t best = 0;
        for (std::size_t k = 1; k < comp.branches.size(); ++k)
            if (comp.branches[k].probability > comp.branches[best].probability) best = k;
        cfg = apply_morphism(*comp.branches[best].morphism, after_f);
    }
    return stages;
}

struct Trajectory {
    std::vector<std::size_t> branch_indices;
    std::vector<Configuration> configurations;  // post-branch, one per component
};

// Samples one branch per component; the realized configurations chain
// through the sequence. Identical seeds give identical trajectories.
inline Trajectory sample_trajectory(const SemiosisSequence& seq, std::uint64_t seed) {
    Trajectory out;
    detail::Rng rng(detail::mix_seed(seed, 0xB4A2C));
    Configuration cfg;
    bool have_cfg = false;
    for (std::size_t i = 0; i < seq.components.size(); ++i) {
        const auto& comp = seq.components[i];
        if (!have_cfg) {
            cfg = comp.source_config;
            have_cfg = true;
        }
        Configuration after_f = run_steps(cfg, comp.steps, seed, i);
        double u = rng.unit();
        std::size_t pick = comp.branches.size() - 1;
        double acc = 0.0;
        for (std::size_t k = 0; k < comp.branches.size(); ++k) {
            acc += comp.branches[k].probability;
            if (u < acc) {
                pick = k;
                break;
            }
        }
        cfg = apply_morphism(*comp.branches[pick].morphism, after_f);
        out.branch_indices.push_back(pick);
        out.configurations.push_back(cfg);
    }
    return out;
}

// Retrospective collapse: each component keeps only the observed branch,
// with probability one.
inline SemiosisSequence collapse_past(const SemiosisSequence& seq,
                                      const std::vector<std::size_t>& observed) {
    if (observed.size() != seq.components.size())
        throw Error(ErrorCode::IndexOutOfRange,
                    "observed branch list length does not match the sequence");
    SemiosisSequence out;
    out.name = seq.name;
    for (std::size_t i = 0; i < seq.components.size(); ++i) {
        const auto& comp = seq.components[i];
        if (observed[i] >= comp.branches.size())
            throw Error(ErrorCode::IndexOutOfRange,
                        "component " + std::to_string(i) + " has no branch " +
                            std::to_string(observed[i]));
        BasicComponent kept = comp;
        Branch b = comp.branches[observed[i]];
        b.probability = 1.0;
        kept.branches = {std::move(b)};
        out.components.push_back(std::move(kept));
    }
    return out;
}

// --- variety -------------------------------------------------------------

// Product-internal structure: tuples whose arguments are all product-side.
inline std::int64_t synchronic_variety(const Configuration& cfg) {
    if (!cfg.system) return 0;
    std::int64_t count = 0;
    for (const auto& tup : cfg.tuples) {
        bool all_product = !tup.args.empty();
        for (const auto& a : tup.args) {
            const SignTerm* t = cfg.find_term(a);
            std::optional<Boundary> b;
            if (t) {
                try {
                    b = boundary_of_term(*t, *cfg.system);
                } catch (const Error&) {
                }
            }
            if (b != Boundary::Product) {
                all_product = false;
                break;
            }
        }
        if (all_product) ++count;
    }
    return count;
}

// Distinct states over time, by canonical structure.
inline std::int64_t diachronic_variety(const std::vector<Configuration>& trace) {
    std::set<std::string> keys;
    for (const auto& cfg : trace) keys.insert(canonical_key(cfg));
    return static_cast<std::int64_t>(keys.size());
}

}  // namespace sgn
