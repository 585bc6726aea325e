#include <catch2/catch_amalgamated.hpp>

#include "sgn/semiosis.hpp"
#include "test_support.hpp"

using namespace sgn;
using namespace test_support;

namespace {

Configuration assembly_config() {
    Configuration cfg = config_of(assembly_system(), "asm");
    add_term(cfg, "p1", SignTerm::make("p_left"));
    add_term(cfg, "p2", SignTerm::make("p_right"));
    return cfg;
}

MorphismPtr identity_ptr(SystemPtr sys) {
    return std::make_shared<const SemioticMorphism>(identity_morphism(sys));
}

BasicComponent simple_component(SystemPtr sys, Configuration cfg, std::vector<Branch> branches,
                                std::vector<SemioticStep> steps = {}) {
    return make_component(sys, std::move(cfg), std::move(steps), std::move(branches), 0, 1);
}

}  // namespace

TEST_CASE("variation is a no-op when no constructor applies") {
    SignSystem bare;
    bare.name = "Bare";
    bare.sorts = {sign_sort("P")};
    auto sys = std::make_shared<const SignSystem>(bare);
    Configuration cfg = config_of(sys);
    Configuration out = variation(cfg, 3, 0, 1);
    CHECK(same_structure(cfg, out));
}

TEST_CASE("variation enumerates all ordered pairs at depth two") {
    Configuration cfg = assembly_config();
    Configuration out = variation(cfg, 2, 0, 7);
    // expected: the four ordered assemble() pairs over {p1, p2}
    REQUIRE(out.terms.size() == 6);
    std::set<std::string> added;
    for (std::size_t i = 2; i < out.terms.size(); ++i) added.insert(to_text(out.terms[i].second));
    CHECK(added == std::set<std::string>{
                       "assemble(p_left(), p_left())", "assemble(p_left(), p_right())",
                       "assemble(p_right(), p_left())", "assemble(p_right(), p_right())"});
    CHECK(synchronic_variety(out) >= synchronic_variety(cfg));
}

TEST_CASE("variation with budget zero never adds tuples") {
    auto sys = boundary_system();
    Configuration cfg = boundary_config(sys, 1, 1);
    Configuration out = variation(cfg, 1, 0, 3);
    CHECK(out.tuples == cfg.tuples);
}

TEST_CASE("variation adds at most the budgeted number of fresh tuples, deterministically") {
    auto sys = boundary_system();
    Configuration cfg = boundary_config(sys, 0, 0);
    Configuration a = variation(cfg, 1, 3, 42);
    Configuration b = variation(cfg, 1, 3, 42);
    Configuration c = variation(cfg, 1, 3, 43);
    CHECK(a.tuples.size() == 3);
    CHECK(same_structure(a, b));
    CHECK(validate_configuration(a).empty());
    // a different seed may pick different tuples, but stays valid
    CHECK(c.tuples.size() == 3);
    CHECK(validate_configuration(c).empty());
}

TEST_CASE("selection is the identity on satisfied configurations") {
    auto sys = boundary_system({Constraint{"cap", 0, Constraint::Op::AtMost, "touches", {}, 10}});
    Configuration cfg = boundary_config(sys, 2, 1);
    SelectionResult res = selection(cfg);
    CHECK_FALSE(res.unrepairable);
    CHECK(same_structure(res.config, cfg));
}

TEST_CASE("selection removes tuples matching a violated FORBID") {
    auto sys = boundary_system({Constraint{"no_cross_x", 0, Constraint::Op::Forbid, "touches",
                                           {PatternAtom::wildcard(),
                                            PatternAtom::ground(SignTerm::make("zone_x"))},
                                           0}});
    Configuration cfg = boundary_config(sys, 1, 1);  // touches(pa,pb) + touches(pa,zx)
    SelectionResult res = selection(cfg);
    CHECK_FALSE(res.unrepairable);
    REQUIRE(res.config.tuples.size() == 1);
    CHECK(to_text(res.config.tuples[0]) == "touches(pa, pb)");
}

TEST_CASE("AT_MOST repair keeps the lexicographically least tuples") {
    auto sys = boundary_system({Constraint{"cap", 0, Constraint::Op::AtMost, "touches", {}, 1}});
    Configuration cfg = boundary_config(sys, 3, 0);
    // tuples: touches(pa, pb), touches(pb, pc), touches(pa, pc)
    SelectionResult res = selection(cfg);
    REQUIRE(res.config.tuples.size() == 1);
    CHECK(to_text(res.config.tuples[0]) == "touches(pa, pb)");
}

TEST_CASE("violated REQUIRE flags the result unrepairable") {
    auto sys = boundary_system({Constraint{"need", 0, Constraint::Op::Require, "touches",
                                           {PatternAtom::wildcard(), PatternAtom::wildcard()},
                                           0}});
    Configuration cfg = boundary_config(sys, 0, 0);
    SelectionResult res = selection(cfg);
    CHECK(res.unrepairable);
    CHECK(res.violated_requires == std::vector<std::string>{"need"});
    CHECK(same_structure(res.config, cfg));
}

TEST_CASE("selection minimality drops unreferenced non-baseline terms") {
    auto sys = boundary_system({Constraint{"no_any", 0, Constraint::Op::Forbid, "touches",
                                           {PatternAtom::wildcard(), PatternAtom::wildcard()},
                                           0}});
    Configuration cfg = boundary_config(sys, 0, 2);
    Configuration grown = variation(cfg, 1, 2, 9);
    std::set<std::string> baseline;
    for (const auto& [n, t] : cfg.terms) baseline.insert(n);
    SelectionResult res = selection(grown, true, &baseline);
    CHECK(res.config.tuples.empty());
    CHECK(res.config.terms.size() == cfg.terms.size());  // generated terms pruned
}

TEST_CASE("make_component accepts balanced probabilities") {
    auto sys = boundary_system();
    Configuration cfg = boundary_config(sys, 0, 1);
    auto id = identity_ptr(sys);
    CHECK_NOTHROW(simple_component(sys, cfg, {{id, 0.5, sys}, {id, 0.5, sys}}));
    CHECK_NOTHROW(simple_component(sys, cfg, {{id, 1.0, sys}}));
}

TEST_CASE("make_component rejects probability sums away from one") {
    auto sys = boundary_system();
    Configuration cfg = boundary_config(sys, 0, 1);
    auto id = identity_ptr(sys);
    try {
        simple_component(sys, cfg, {{id, 0.6, sys}, {id, 0.5, sys}});
        FAIL("expected PROB_SUM");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ProbSum);
    }
}

TEST_CASE("make_component rejects nonpositive probabilities and bad timestamps") {
    auto sys = boundary_system();
    Configuration cfg = boundary_config(sys, 0, 1);
    auto id = identity_ptr(sys);
    try {
        simple_component(sys, cfg, {{id, 0.0, sys}, {id, 1.0, sys}});
        FAIL("expected NONPOSITIVE_PROB");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonpositiveProb);
    }
    try {
        make_component(sys, cfg, {}, {{id, 1.0, sys}}, 5, 5);
        FAIL("expected TIME_ORDER");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TimeOrder);
    }
}

TEST_CASE("make_component enforces information closure on step morphisms") {
    auto sys = boundary_system();
    auto pair = renamed_pair(sys, "o_");
    Configuration cfg = boundary_config(sys, 0, 1);
    auto id = identity_ptr(sys);
    auto outward = std::make_shared<const SemioticMorphism>(pair.full);
    try {
        make_component(sys, cfg, {SemioticStep::apply(outward)}, {{id, 1.0, sys}}, 0, 1);
        FAIL("expected CLOSURE_VIOLATION");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ClosureViolation);
    }
}

TEST_CASE("a component of pure identities is not well defined") {
    auto sys = boundary_system();
    Configuration cfg = boundary_config(sys, 0, 1);
    auto id = identity_ptr(sys);
    BasicComponent c = simple_component(sys, cfg, {{id, 1.0, sys}});
    CHECK_FALSE(is_well_defined(c));
}

TEST_CASE("a non-total branch makes the component well defined") {
    auto sys = boundary_system();
    auto pair = renamed_pair(sys, "w_");
    SemioticMorphism partial = pair.full;
    partial.ctor_map.erase("part_c");
    auto m = std::make_shared<const SemioticMorphism>(partial);
    Configuration cfg = boundary_config(sys, 0, 1);
    BasicComponent c = simple_component(sys, cfg, {{m, 1.0, pair.target}});
    CHECK(is_well_defined(c));
}

TEST_CASE("a selection step that removes a tuple makes the component well defined") {
    auto sys = boundary_system({Constraint{"no_any", 0, Constraint::Op::Forbid, "touches",
                                           {PatternAtom::wildcard(), PatternAtom::wildcard()},
                                           0}});
    Configuration cfg = boundary_config(sys, 1, 0);
    auto id = identity_ptr(sys);
    BasicComponent with_sel =
        simple_component(sys, cfg, {{id, 1.0, sys}}, {SemioticStep::selection(false)});
    CHECK(is_well_defined(with_sel));
    // the same step on an already-clean configuration changes nothing
    Configuration clean = boundary_config(sys, 0, 0);
    BasicComponent no_op =
        simple_component(sys, clean, {{id, 1.0, sys}}, {SemioticStep::selection(false)});
    CHECK_FALSE(is_well_defined(no_op));
}

TEST_CASE("Law I fails on an all-identity sequence") {
    auto sys = boundary_system();
    Configuration cfg = boundary_config(sys, 0, 1);
    auto id = identity_ptr(sys);
    SemiosisSequence seq;
    seq.name = "identities";
    seq.components.push_back(simple_component(sys, cfg, {{id, 1.0, sys}}));
    seq.components.push_back(make_component(sys, cfg, {}, {{id, 1.0, sys}}, 1, 2));
    LawReport rep = check_law_one(seq);
    CHECK_FALSE(rep.law1_holds);
    CHECK_FALSE(rep.well_defined_witness.has_value());
    CHECK_FALSE(rep.level_break_witness.has_value());
}

TEST_CASE("Law I needs a level break, not just a non-isomorphism") {
    auto sys = boundary_system();
    auto pair = renamed_pair(sys, "l_");
    SemioticMorphism partial = pair.full;
    partial.ctor_map.erase("part_c");  // non-total, still level-preserving
    auto m = std::make_shared<const SemioticMorphism>(partial);
    Configuration cfg = boundary_config(sys, 0, 1);
    SemiosisSequence seq;
    seq.name = "halfway";
    seq.components.push_back(simple_component(sys, cfg, {{m, 1.0, pair.target}}));
    LawReport rep = check_law_one(seq);
    CHECK_FALSE(rep.law1_holds);
    CHECK(rep.well_defined_witness == std::optional<std::size_t>(0));
    CHECK_FALSE(rep.level_break_witness.has_value());
}

namespace {

// Constructors at distinct levels; a second system with the levels swapped
// makes the symbol-wise map level-inverting.
SystemPtr leveled_system(std::string name, std::int64_t l1, std::int64_t l2) {
    SignSystem sys;
    sys.name = std::move(name);
    sys.sorts = {sign_sort("P", Boundary::Product), sign_sort("Z", Boundary::Environment)};
    sys.constructors = {ctor("mk_p", {}, "P", l1), ctor("mk_z", {}, "Z", l2)};
    sys.relations = {RelationDecl{"links", {"P", "Z"}}};
    return std::make_shared<const SignSystem>(std::move(sys));
}

}  // namespace

TEST_CASE("Law I holds with a non-isomorphism and a level-inverting branch") {
    auto lo = leveled_system("Lo", 1, 2);
    auto hi = leveled_system("Hi", 2, 1);  // same shape, levels swapped
    SemioticMorphism invert;
    invert.name = "invert";
    invert.source = lo;
    invert.target = hi;
    invert.sort_map = {{"P", "P"}, {"Z", "Z"}};
    invert.ctor_map = {{"mk_p", "mk_p"}, {"mk_z", "mk_z"}};
    invert.rel_map = {{"links", "links"}};
    REQUIRE(validate_morphism(invert).valid);
    REQUIRE_FALSE(is_level_preserving(invert));
    SemioticMorphism partial = invert;
    partial.name = "partial";
    partial.ctor_map.erase("mk_z");
    partial.rel_map.clear();

    Configuration cfg = config_of(lo);
    add_term(cfg, "a", SignTerm::make("mk_p"));
    add_term(cfg, "z", SignTerm::make("mk_z"));
    add_tuple(cfg, "links", {"a", "z"});

    SemiosisSequence seq;
    seq.name = "lawful";
    seq.components.push_back(
        make_component(lo, cfg, {},
                       {{std::make_shared<const SemioticMorphism>(partial), 0.5, hi},
                        {std::make_shared<const SemioticMorphism>(invert), 0.5, hi}},
                       0, 1));
    LawReport rep = check_law_one(seq);
    CHECK(rep.law1_holds);
    CHECK(rep.well_defined_witness == std::optional<std::size_t>(0));
    REQUIRE(rep.level_break_witness.has_value());
    CHECK(rep.level_break_witness->first == 0);
}

TEST_CASE("Law II verdicts follow the strict epsilon decrease") {
    auto sys = boundary_system();
    auto pair = renamed_pair(sys, "n_");
    SemioticMorphism drop_zones = pair.full;
    drop_zones.ctor_map.erase("zone_x");
    drop_zones.ctor_map.erase("zone_y");  // all cross tuples die with their zone terms
    auto dropper = std::make_shared<const SemioticMorphism>(drop_zones);
    auto id = identity_ptr(sys);

    Configuration cfg = boundary_config(sys, 0, 2);
    REQUIRE(epsilon(cfg) == 2);
    SemiosisSequence seq;
    seq.name = "two";
    seq.components.push_back(
        simple_component(sys, cfg, {{dropper, 0.5, pair.target}, {id, 0.5, sys}}));
    auto verdicts = check_law_two(seq);
    REQUIRE(verdicts.size() == 1);
    REQUIRE(verdicts[0].size() == 2);
    CHECK(verdicts[0][0]);        // eps 2 -> 0
    CHECK_FALSE(verdicts[0][1]);  // identity keeps eps

    Configuration flat = boundary_config(sys, 1, 0);  // eps already 0
    SemiosisSequence seq2;
    seq2.name = "flat";
    seq2.components.push_back(simple_component(sys, flat, {{dropper, 1.0, pair.target}}));
    auto verdicts2 = check_law_two(seq2);
    CHECK_FALSE(verdicts2[0][0]);
}

TEST_CASE("law II accepts designated per-stage configurations") {
    auto sys = boundary_system();
    auto pair = renamed_pair(sys, "d_");
    SemioticMorphism drop_zones = pair.full;
    drop_zones.ctor_map.erase("zone_x");
    drop_zones.ctor_map.erase("zone_y");
    auto dropper = std::make_shared<const SemioticMorphism>(drop_zones);

    // the component's own config has no cross tuples, the designated one does
    SemiosisSequence seq;
    seq.name = "designated";
    seq.components.push_back(
        simple_component(sys, boundary_config(sys, 1, 0), {{dropper, 1.0, pair.target}}));
    CHECK_FALSE(check_law_two(seq)[0][0]);
    std::vector<Configuration> stages{boundary_config(sys, 0, 2)};
    CHECK(check_law_two(seq, &stages)[0][0]);
    std::vector<Configuration> wrong_arity;
    CHECK_THROWS_AS(check_law_two(seq, &wrong_arity), Error);
}

TEST_CASE("the modal path follows the most probable branch") {
    auto sys = boundary_system();
    auto pair = renamed_pair(sys, "m_");
    SemioticMorphism drop_zones = pair.full;
    drop_zones.ctor_map.erase("zone_x");
    drop_zones.ctor_map.erase("zone_y");
    auto dropper = std::make_shared<const SemioticMorphism>(drop_zones);
    auto id = identity_ptr(sys);

    Configuration cfg = boundary_config(sys, 0, 2);
    SemiosisSequence seq;
    seq.name = "modal";
    // identity is the likelier branch, so the path keeps the cross tuples
    seq.components.push_back(
        simple_component(sys, cfg, {{dropper, 0.25, pair.target}, {id, 0.75, sys}}));
    seq.components.push_back(make_component(sys, cfg, {}, {{id, 1.0, sys}}, 1, 2));
    auto stages = stage_configs_modal(seq, cfg);
    REQUIRE(stages.size() == 2);
    CHECK(epsilon(stages[1]) == 2);
}

TEST_CASE("validate_sequence reports broken chains and time order") {
    auto sys = boundary_system();
    auto pair = renamed_pair(sys, "v_");
    auto id = identity_ptr(sys);
    auto ren = std::make_shared<const SemioticMorphism>(pair.full);
    Configuration cfg = boundary_config(sys, 0, 1);

    SemiosisSequence seq;
    seq.name = "broken";
    // first component ends in the renamed system, second starts from the original
    seq.components.push_back(
        make_component(sys, cfg, {}, {{ren, 1.0, pair.target}}, 0, 1));
    seq.components.push_back(make_component(sys, cfg, {}, {{id, 1.0, sys}}, 0, 1));
    ValidationReport report = validate_sequence(seq);
    bool chain = false, times = false;
    for (const auto& d : report) {
        chain = chain || d.code == "CHAIN_BROKEN";
        times = times || d.code == "TIME_ORDER";
    }
    CHECK(chain);
    CHECK(times);
}

TEST_CASE("single-branch components force the trajectory") {
    auto sys = boundary_system();
    Configuration cfg = boundary_config(sys, 0, 1);
    auto id = identity_ptr(sys);
    SemiosisSequence seq;
    seq.name = "forced";
    seq.components.push_back(simple_component(sys, cfg, {{id, 1.0, sys}}));
    for (std::uint64_t s : {0ULL, 7ULL, 123456ULL}) {
        Trajectory t = sample_trajectory(seq, s);
        REQUIRE(t.branch_indices.size() == 1);
        CHECK(t.branch_indices[0] == 0);
    }
}

TEST_CASE("identical seeds give identical trajectories") {
    auto sys = boundary_system();
    auto pair = renamed_pair(sys, "s_");
    auto id = identity_ptr(sys);
    auto ren = std::make_shared<const SemioticMorphism>(pair.full);
    Configuration cfg = boundary_config(sys, 1, 1);
    SemiosisSequence seq;
    seq.name = "coin";
    seq.components.push_back(make_component(sys, cfg, {SemioticStep::variation(2, 2)},
                                            {{id, 0.5, sys}, {id, 0.5, sys}}, 0, 1));
    seq.components.push_back(
        make_component(sys, cfg, {}, {{ren, 0.25, pair.target}, {ren, 0.75, pair.target}}, 1, 2));
    Trajectory a = sample_trajectory(seq, 99);
    Trajectory b = sample_trajectory(seq, 99);
    CHECK(a.branch_indices == b.branch_indices);
    REQUIRE(a.configurations.size() == b.configurations.size());
    for (std::size_t i = 0; i < a.configurations.size(); ++i)
        CHECK(canonical_key(a.configurations[i]) == canonical_key(b.configurations[i]));
}

TEST_CASE("branch frequencies match their probabilities") {
    auto sys = boundary_system();
    Configuration cfg = boundary_config(sys, 0, 1);
    auto id = identity_ptr(sys);
    SemiosisSequence seq;
    seq.name = "biased";
    seq.components.push_back(simple_component(sys, cfg, {{id, 0.25, sys}, {id, 0.75, sys}}));
    int second = 0;
    for (std::uint64_t s = 0; s < 10000; ++s)
        if (sample_trajectory(seq, s).branch_indices[0] == 1) ++second;
    double freq = second / 10000.0;
    CHECK(freq >= 0.73);
    CHECK(freq <= 0.77);
}

TEST_CASE("collapse_past keeps only the observed branches with probability one") {
    auto sys = boundary_system();
    Configuration cfg = boundary_config(sys, 0, 1);
    auto id = identity_ptr(sys);
    SemiosisSequence seq;
    seq.name = "open";
    seq.components.push_back(simple_component(sys, cfg, {{id, 0.5, sys}, {id, 0.5, sys}}));
    SemiosisSequence past = collapse_past(seq, {0});
    REQUIRE(past.components[0].branches.size() == 1);
    CHECK(past.components[0].branches[0].probability == 1.0);

    SemiosisSequence again = collapse_past(past, {0});
    CHECK(again.components[0].branches.size() == 1);
    CHECK(again.components[0].branches[0].probability == 1.0);

    CHECK_THROWS_AS(collapse_past(seq, {5}), Error);
    CHECK_THROWS_AS(collapse_past(seq, {0, 0}), Error);
}

TEST_CASE("synchronic variety counts product-internal tuples only") {
    auto sys = boundary_system();
    CHECK(synchronic_variety(boundary_config(sys, 0, 0)) == 0);
    CHECK(synchronic_variety(boundary_config(sys, 2, 3)) == 2);
    CHECK(synchronic_variety(boundary_config(sys, 0, 4)) == 0);
}

TEST_CASE("diachronic variety counts distinct states") {
    auto sys = boundary_system();
    Configuration c1 = boundary_config(sys, 1, 0);
    Configuration c2 = boundary_config(sys, 2, 0);
    CHECK(diachronic_variety({}) == 0);
    CHECK(diachronic_variety({c1, c1, c1}) == 1);
    CHECK(diachronic_variety({c1, c2, c1}) == 2);
}

TEST_CASE("property: variation respects information closure") {
    sgn::detail::Rng rng(17);
    for (int round = 0; round < 100; ++round) {
        auto sys = random_system(rng);
        Configuration cfg = config_of(sys);
        int i = 0;
        for (const auto& t : random_terms(*sys, rng, 4)) {
            try {
                well_sorted(t, *sys);
            } catch (const Error&) {
                continue;
            }
            add_term(cfg, "t" + std::to_string(i++), t);
        }
        Configuration out = variation(cfg, 1 + static_cast<std::int64_t>(rng.below(2)),
                                      static_cast<std::int64_t>(rng.below(4)), rng.next());
        CHECK(validate_configuration(out).empty());  // only declared symbols, well-sorted
        CHECK(out.terms.size() >= cfg.terms.size());
        CHECK(synchronic_variety(out) >= synchronic_variety(cfg));
    }
}

TEST_CASE("property: selection never increases epsilon and is idempotent") {
    sgn::detail::Rng rng(23);
    auto sys = boundary_system(
        {Constraint{"no_self", 0, Constraint::Op::Forbid, "touches",
                    {PatternAtom::var("x"), PatternAtom::var("x")}, 0},
         Constraint{"cap", 1, Constraint::Op::AtMost, "touches", {}, 2},
         Constraint{"grounded", 2, Constraint::Op::Require, "touches",
                    {PatternAtom::wildcard(), PatternAtom::wildcard()}, 0}});
    for (int round = 0; round < 300; ++round) {
        Configuration cfg = boundary_config(sys, static_cast<int>(rng.below(6)),
                                            static_cast<int>(rng.below(6)));
        SelectionResult once = selection(cfg);
        CHECK(epsilon(once.config) <= epsilon(cfg));
        SelectionResult twice = selection(once.config);
        CHECK(same_structure(once.config, twice.config));
        CHECK(once.unrepairable == twice.unrepairable);
    }
}

TEST_CASE("property: variation then selection does not increase rank-0 violations") {
    sgn::detail::Rng rng(31);
    auto sys = boundary_system(
        {Constraint{"no_cross_x", 0, Constraint::Op::Forbid, "touches",
                    {PatternAtom::wildcard(), PatternAtom::ground(SignTerm::make("zone_x"))}, 0},
         Constraint{"no_self", 0, Constraint::Op::Forbid, "touches",
                    {PatternAtom::var("x"), PatternAtom::var("x")}, 0}});
    auto rank0_violations = [&](const Configuration& cfg) {
        int n = 0;
        for (const auto& c : cfg.system->constraints)
            if (c.rank == 0 && !evaluate_constraint(c, cfg)) ++n;
        return n;
    };
    for (int round = 0; round < 200; ++round) {
        Configuration cfg = boundary_config(sys, static_cast<int>(rng.below(4)),
                                            static_cast<int>(rng.below(4)));
        int before = rank0_violations(cfg);
        Configuration grown =
            variation(cfg, 2, static_cast<std::int64_t>(rng.below(5)), rng.next());
        Configuration repaired = selection(grown).config;
        CHECK(rank0_violations(repaired) <= before);
    }
}

TEST_CASE("property: collapsing a sampled past pins the trajectory") {
    auto sys = boundary_system();
    auto pair = renamed_pair(sys, "c_");
    auto id = identity_ptr(sys);
    auto ren = std::make_shared<const SemioticMorphism>(pair.full);
    SemioticMorphism partial = pair.full;
    partial.ctor_map.erase("part_b");
    auto par = std::make_shared<const SemioticMorphism>(partial);

    Configuration cfg = boundary_config(sys, 1, 1);
    SemiosisSequence seq;
    seq.name = "past";
    seq.components.push_back(make_component(sys, cfg, {SemioticStep::variation(2, 1)},
                                            {{id, 0.3, sys}, {id, 0.7, sys}}, 0, 1));
    seq.components.push_back(
        make_component(sys, cfg, {}, {{ren, 0.5, pair.target}, {par, 0.5, pair.target}}, 1, 2));

    for (std::uint64_t s = 0; s < 50; ++s) {
        Trajectory t = sample_trajectory(seq, s);
        SemiosisSequence past = collapse_past(seq, t.branch_indices);
        Trajectory replay = sample_trajectory(past, s);
        CHECK(replay.branch_indices == std::vector<std::size_t>(seq.components.size(), 0));
        REQUIRE(replay.configurations.size() == t.configurations.size());
        for (std::size_t i = 0; i < t.configurations.size(); ++i)
            CHECK(canonical_key(replay.configurations[i]) == canonical_key(t.configurations[i]));
    }
}

TEST_CASE("property: Law I is false for sequences of pure renamings") {
    sgn::detail::Rng rng(47);
    for (int round = 0; round < 50; ++round) {
        auto base = random_system(rng, "Base");
        auto step1 = renamed_pair(base, "a_");
        auto step2 = renamed_pair(step1.target, "b_");
        if (!validate_morphism(step1.full).valid || !validate_morphism(step2.full).valid) continue;
        Configuration cfg = config_of(base);
        SemiosisSequence seq;
        seq.name = "renames";
        seq.components.push_back(make_component(
            base, cfg, {},
            {{std::make_shared<const SemioticMorphism>(step1.full), 1.0, step1.target}}, 0, 1));
        Configuration cfg2 = config_of(step1.target);
        seq.components.push_back(make_component(
            step1.target, cfg2, {},
            {{std::make_shared<const SemioticMorphism>(step2.full), 1.0, step2.target}}, 1, 2));
        CHECK_FALSE(check_law_one(seq).law1_holds);
    }
}
