#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dsl_generator.hpp"
#include "sgn/link.hpp"
#include "test_support.hpp"

using namespace sgn;
namespace dsl = sgn::dsl;

namespace {

bool has_code(const std::vector<Diagnostic>& ds, std::string_view code) {
    for (const auto& d : ds)
        if (d.code == code) return true;
    return false;
}

const Diagnostic* find_code(const std::vector<Diagnostic>& ds, std::string_view code) {
    for (const auto& d : ds)
        if (d.code == code) return &d;
    return nullptr;
}

}  // namespace

TEST_CASE("parsing an empty file yields nothing") {
    dsl::ParsedFile f = dsl::parse("");
    CHECK(f.blocks.empty());
    CHECK(f.diagnostics.empty());
    CHECK(dsl::parse("  // only a comment\n").blocks.empty());
}

TEST_CASE("parsing a minimal system block") {
    dsl::ParsedFile f = dsl::parse("system S { sort P; }");
    REQUIRE(f.diagnostics.empty());
    REQUIRE(f.blocks.size() == 1);
    const auto& sys = std::get<dsl::SystemBlock>(f.blocks[0]).system;
    CHECK(sys.name == "S");
    REQUIRE(sys.sorts.size() == 1);
    CHECK(sys.sorts[0].name == "P");
    CHECK(sys.sorts[0].kind == SortKind::Sign);
    CHECK_FALSE(sys.sorts[0].boundary.has_value());
}

TEST_CASE("undeclared sorts are reported at their token position") {
    dsl::ParsedFile f = dsl::parse("system S {\n    sort P;\n    ctor f(Q) -> P @level 0;\n}");
    const Diagnostic* d = find_code(f.diagnostics, "UNKNOWN_SORT");
    REQUIRE(d != nullptr);
    CHECK(d->line == 3);
    CHECK(d->column == 12);
}

TEST_CASE("a full system parses into the expected declarations") {
    const char* text =
        "system Fr {\n"
        "    data Real;\n"
        "    sort Item;\n"
        "    sort Part [product] < Item;\n"
        "    sort Zone [env] < Item;\n"
        "    ctor shelf(Real) -> Part @level 0 @prio 2;\n"
        "    rel touches(Item, Item);\n"
        "    axiom no_self : rank 0 : forbid touches(x, x);\n"
        "    axiom somewhere : rank 1 : require touches(*, *);\n"
        "    axiom cap : rank 2 : atmost touches 3;\n"
        "}\n";
    dsl::ParsedFile f = dsl::parse(text);
    REQUIRE(f.diagnostics.empty());
    const auto& sys = std::get<dsl::SystemBlock>(f.blocks[0]).system;
    CHECK(sys.sorts.size() == 4);
    CHECK(sys.subsort_edges ==
          std::vector<std::pair<std::string, std::string>>{{"Part", "Item"}, {"Zone", "Item"}});
    REQUIRE(sys.constructors.size() == 1);
    CHECK(sys.constructors[0].priority == 2);
    REQUIRE(sys.constraints.size() == 3);
    CHECK(sys.constraints[0].op == Constraint::Op::Forbid);
    CHECK(sys.constraints[1].op == Constraint::Op::Require);
    CHECK(sys.constraints[2].op == Constraint::Op::AtMost);
    CHECK(sys.constraints[2].limit == 3);
    CHECK(validate_system(sys).empty());
}

TEST_CASE("redeclaring a sort is rejected while parsing") {
    dsl::ParsedFile f = dsl::parse("system S { sort A; sort B < A; }");
    CHECK(f.diagnostics.empty());
    dsl::ParsedFile g = dsl::parse("system S { sort A; sort B < A; sort A < B; }");
    CHECK(has_code(g.diagnostics, "DUPLICATE_SORT"));
}

TEST_CASE("keywords cannot name declarations") {
    dsl::ParsedFile f = dsl::parse("system select { sort P; }");
    CHECK(has_code(f.diagnostics, "RESERVED_WORD"));
}

TEST_CASE("relations need at least one argument sort") {
    dsl::ParsedFile f = dsl::parse("system S { sort P; rel empty(); rel ok(P); }");
    CHECK(has_code(f.diagnostics, "EMPTY_RELATION"));
    const auto& sys = std::get<dsl::SystemBlock>(f.blocks[0]).system;
    CHECK(sys.relations.size() == 1);
}

TEST_CASE("diagnostics are deterministic") {
    const char* text = "system S { sort P; ctor f(Q -> P @level 0; } config c of ???";
    dsl::ParsedFile a = dsl::parse(text);
    dsl::ParsedFile b = dsl::parse(text);
    REQUIRE(a.diagnostics.size() == b.diagnostics.size());
    for (std::size_t i = 0; i < a.diagnostics.size(); ++i) {
        CHECK(a.diagnostics[i].code == b.diagnostics[i].code);
        CHECK(a.diagnostics[i].line == b.diagnostics[i].line);
        CHECK(a.diagnostics[i].column == b.diagnostics[i].column);
    }
}

TEST_CASE("serializing an empty file yields empty text") {
    dsl::ParsedFile f;
    CHECK(dsl::serialize(f).empty());
}

TEST_CASE("a system with every declaration kind survives a round trip") {
    const char* text =
        "system Fr {\n"
        "    data Real;\n"
        "    sort Item;\n"
        "    sort Part [product] < Item;\n"
        "    sort Zone [env] < Item;\n"
        "    ctor shelf(Real) -> Part @level 0 @prio -1;\n"
        "    ctor room() -> Zone @level 1;\n"
        "    rel touches(Item, Item);\n"
        "    axiom no_self : rank 0 : forbid touches(x, x);\n"
        "    axiom near_room : rank 1 : forbid touches(*, room());\n"
        "    axiom cap : rank 2 : atmost touches 3;\n"
        "}\n"
        "config c of Fr {\n"
        "    s1 = shelf(0.5);\n"
        "    s2 = shelf(-12.25);\n"
        "    z = room();\n"
        "    touches(s1, s2);\n"
        "    touches(s1, z);\n"
        "}\n"
        "morphism m : Fr -> Fr {\n"
        "    sort Part -> Part;\n"
        "    ctor shelf -> shelf;\n"
        "    rel touches -> touches;\n"
        "}\n"
        "sequence q {\n"
        "    component t 0 .. 2 {\n"
        "        from c;\n"
        "        vary depth 2 budget 1;\n"
        "        select min;\n"
        "        apply m;\n"
        "        branch m p 0.5 -> Fr;\n"
        "        branch m p 0.5 -> Fr;\n"
        "    }\n"
        "}\n"
        "scenario demo {\n"
        "    env kitchen features [0.5, 1.5] rate part_movement 2.0;\n"
        "    product fr of c in kitchen manufacturer acme params (temp = 4.0);\n"
        "    agent for fr weber 0.1 window 16 expect functional temp [2.0, 6.0] expect env "
        "part_movement [0.0, 5.0];\n"
        "    adapt on;\n"
        "}\n";
    dsl::ParsedFile first = dsl::parse(text);
    REQUIRE(first.diagnostics.empty());
    REQUIRE(first.blocks.size() == 5);
    std::string emitted = dsl::serialize(first);
    dsl::ParsedFile second = dsl::parse(emitted);
    REQUIRE(second.diagnostics.empty());
    CHECK(dsl::same_blocks(first, second));
    CHECK(dsl::serialize(second) == emitted);
}

TEST_CASE("the refrigerator sample survives a round trip") {
    std::ifstream in(std::string(SGN_SAMPLES_DIR) + "/refrigerator.sgn");
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    dsl::ParsedFile first = dsl::parse(buf.str());
    REQUIRE(first.diagnostics.empty());
    REQUIRE(first.blocks.size() == 4);  // system, config, two scenarios
    dsl::ParsedFile second = dsl::parse(dsl::serialize(first));
    REQUIRE(second.diagnostics.empty());
    CHECK(dsl::same_blocks(first, second));
}

TEST_CASE("property: generated files round-trip through parse and serialize") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        dsl::ParsedFile blocks = dsl_gen::gen_file(seed);
        std::string text = dsl::serialize(blocks);
        dsl::ParsedFile back = dsl::parse(text);
        INFO("seed " << seed << "\n" << text);
        REQUIRE(back.diagnostics.empty());
        CHECK(dsl::same_blocks(blocks, back));
    }
}

TEST_CASE("property: mutated sources never crash the parser") {
    std::string base = dsl::serialize(dsl_gen::gen_file(7));
    sgn::detail::Rng rng(1234);
    for (int round = 0; round < 2000; ++round) {
        std::string text = base;
        const int edits = 1 + static_cast<int>(rng.below(4));
        for (int e = 0; e < edits; ++e) {
            if (text.empty()) break;
            std::size_t pos = rng.below(text.size());
            switch (rng.below(3)) {
                case 0: text[pos] = static_cast<char>(rng.below(256)); break;
                case 1: text.erase(pos, 1); break;
                default: text.insert(pos, 1, static_cast<char>(rng.below(256))); break;
            }
        }
        dsl::ParsedFile f = dsl::parse(text);
        (void)f;  // must return, possibly with diagnostics
    }
}

TEST_CASE("linking resolves configurations with term references") {
    const char* text =
        "system S { sort P; ctor leaf() -> P @level 0; ctor pair(P, P) -> P @level 1; "
        "rel near(P, P); }\n"
        "config c of S {\n"
        "    a = leaf;\n"           // bare identifier: constant constructor
        "    b = pair(a, leaf);\n"  // bare identifier inside a term: prior term
        "    near(a, b);\n"
        "}\n";
    dsl::ParsedFile f = dsl::parse(text);
    REQUIRE(f.diagnostics.empty());
    dsl::Workspace ws = dsl::link({f});
    REQUIRE(ws.ok());
    const Configuration& cfg = ws.configs.at("c");
    REQUIRE(cfg.terms.size() == 2);
    CHECK(to_text(cfg.terms[1].second) == "pair(leaf(), leaf())");
    CHECK(cfg.tuples.size() == 1);
    CHECK(validate_configuration(cfg).empty());
}

TEST_CASE("linking reports unresolved and ill-sorted configuration entries") {
    const char* text =
        "system S { data Real; sort P; ctor leaf() -> P @level 0; ctor box(Real) -> P @level 0; "
        "rel near(P, P); }\n"
        "config c of S {\n"
        "    a = ghost;\n"
        "    b = box(leaf);\n"
        "    near(a, zz);\n"
        "}\n";
    dsl::ParsedFile f = dsl::parse(text);
    REQUIRE(f.diagnostics.empty());
    dsl::Workspace ws = dsl::link({f});
    CHECK(has_code(ws.diagnostics, "UNKNOWN_CONSTRUCTOR"));
    CHECK(has_code(ws.diagnostics, "SORT_MISMATCH"));
    CHECK(has_code(ws.diagnostics, "UNKNOWN_TERM"));
}

TEST_CASE("linking keeps invalid morphisms available for reporting") {
    const char* text =
        "system A { data Real; sort P; }\n"
        "system B { data Real; data Nat; sort Q; }\n"
        "morphism bad : A -> B { sort Real -> Nat; sort P -> Q; }\n";
    dsl::ParsedFile f = dsl::parse(text);
    REQUIRE(f.diagnostics.empty());
    dsl::Workspace ws = dsl::link({f});
    CHECK(ws.ok());  // file resolves; the morphism itself fails its conditions
    REQUIRE(ws.morphism_reports.count("bad"));
    CHECK_FALSE(ws.morphism_reports.at("bad").valid);
    CHECK_FALSE(ws.all_morphisms_valid());
}

TEST_CASE("linking builds sequences and rejects bad probabilities") {
    const char* good =
        "system S { sort P; ctor leaf() -> P @level 0; }\n"
        "config c of S { a = leaf; }\n"
        "morphism id_s : S -> S { sort P -> P; ctor leaf -> leaf; }\n"
        "sequence q { component t 0 .. 1 { from c; branch id_s p 0.25 -> S; branch id_s p 0.75 -> "
        "S; } }\n";
    dsl::Workspace ws = dsl::link({dsl::parse(good)});
    REQUIRE(ws.ok());
    REQUIRE(ws.sequences.count("q"));
    CHECK(ws.sequences.at("q").components.size() == 1);

    const char* bad =
        "system S { sort P; ctor leaf() -> P @level 0; }\n"
        "config c of S { a = leaf; }\n"
        "morphism id_s : S -> S { sort P -> P; ctor leaf -> leaf; }\n"
        "sequence q { component t 0 .. 1 { from c; branch id_s p 0.6 -> S; branch id_s p 0.5 -> S; "
        "} }\n";
    dsl::Workspace ws2 = dsl::link({dsl::parse(bad)});
    CHECK(has_code(ws2.diagnostics, "PROB_SUM"));
    CHECK_FALSE(ws2.sequences.count("q"));
}

TEST_CASE("linking builds scenarios and validates them") {
    const char* text =
        "system S { sort P; ctor leaf() -> P @level 0; }\n"
        "config c of S { a = leaf; }\n"
        "scenario ok {\n"
        "    env kitchen features [1.0, 2.0] rate use 2.0;\n"
        "    product fr of c in kitchen manufacturer acme;\n"
        "    agent for fr weber 0.2 window 4 expect env use [0.0, 5.0];\n"
        "    adapt off;\n"
        "}\n";
    dsl::Workspace ws = dsl::link({dsl::parse(text)});
    REQUIRE(ws.ok());
    REQUIRE(ws.scenarios.count("ok"));
    const auto& sc = ws.scenarios.at("ok");
    CHECK(sc.environments.size() == 1);
    CHECK(sc.products.size() == 1);
    CHECK(sc.agents.size() == 1);
    CHECK_FALSE(sc.adapt);

    const char* bad =
        "system S { sort P; ctor leaf() -> P @level 0; }\n"
        "config c of S { a = leaf; }\n"
        "scenario broken {\n"
        "    env kitchen features [1.0] rate use 2.0;\n"
        "    env cellar features [1.0, 2.0];\n"
        "    product fr of c in nowhere manufacturer acme;\n"
        "}\n";
    dsl::Workspace ws2 = dsl::link({dsl::parse(bad)});
    CHECK(has_code(ws2.diagnostics, "DIMENSION_MISMATCH"));
    CHECK(has_code(ws2.diagnostics, "UNRESOLVED_NAME"));
    CHECK_FALSE(ws2.scenarios.count("broken"));
}

TEST_CASE("imports are loaded once and cycles are reported") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "sgn_dsl_import_test";
    fs::create_directories(dir);
    {
        std::ofstream(dir / "base.sgn") << "system S { sort P; ctor leaf() -> P @level 0; }\n";
        std::ofstream(dir / "main.sgn") << "import \"base.sgn\";\nconfig c of S { a = leaf; }\n";
        std::ofstream(dir / "loop_a.sgn") << "import \"loop_b.sgn\";\nsystem A { sort P; }\n";
        std::ofstream(dir / "loop_b.sgn") << "import \"loop_a.sgn\";\nsystem B { sort P; }\n";
    }
    dsl::Workspace ws = dsl::load_and_link({(dir / "main.sgn").string()});
    CHECK(ws.ok());
    CHECK(ws.configs.count("c"));

    std::vector<dsl::ParsedFile> files = dsl::load_files({(dir / "loop_a.sgn").string()});
    bool cycle = false;
    for (const auto& f : files) cycle = cycle || has_code(f.diagnostics, "IMPORT_CYCLE");
    CHECK(cycle);

    dsl::Workspace missing = dsl::load_and_link({(dir / "absent.sgn").string()});
    CHECK(has_code(missing.diagnostics, "IO_ERROR"));
    fs::remove_all(dir);
}
