#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "sgn/dsl.hpp"
#include "sgn/lifecycle.hpp"

namespace sgn::dsl {

// Semantic view over a set of parsed files. Morphism preservation reports
// are kept per morphism so callers can distinguish "file does not resolve"
// from "morphism fails its conditions".
struct Workspace {
    std::vector<Diagnostic> diagnostics;
    std::map<std::string, SystemPtr> systems;
    std::map<std::string, MorphismPtr> morphisms;
    std::map<std::string, MorphismReport> morphism_reports;
    std::map<std::string, Configuration> configs;
    std::map<std::string, SemiosisSequence> sequences;
    std::map<std::string, sim::Scenario> scenarios;

    bool ok() const { return !has_errors(diagnostics); }
    bool all_morphisms_valid() const {
        for (const auto& [n, r] : morphism_reports)
            if (!r.valid) return false;
        return true;
    }
};

namespace link_detail {

inline void fail(Workspace& ws, Pos pos, std::string code, std::string message) {
    ws.diagnostics.push_back(
        Diagnostic{Severity::Error, std::move(code), std::move(message), pos.line, pos.column});
}

inline std::optional<SignTerm> resolve_term(Workspace& ws, const TermSyntax& ts,
                                            const SignSystem& sys, const Configuration& cfg) {
    switch (ts.kind) {
        case TermSyntax::Kind::Int: return SignTerm::of_int(ts.int_value);
        case TermSyntax::Kind::Real: return SignTerm::of_real(ts.real_value);
        case TermSyntax::Kind::Str: return SignTerm::of_str(ts.str_value);
        case TermSyntax::Kind::Ident: {
            const ConstructorDecl* c = sys.find_constructor(ts.name);
            if (c && c->arg_sorts.empty()) return SignTerm::make(ts.name);
            if (const SignTerm* prior = cfg.find_term(ts.name)) return *prior;
            fail(ws, ts.pos, "UNKNOWN_CONSTRUCTOR",
                 ts.name + " is neither a constant constructor nor an earlier term");
            return std::nullopt;
        }
        case TermSyntax::Kind::Apply: {
            if (!sys.find_constructor(ts.name)) {
                fail(ws, ts.pos, "UNKNOWN_CONSTRUCTOR",
                     ts.name + " is not a constructor of " + sys.name);
                return std::nullopt;
            }
            SignTerm t = SignTerm::make(ts.name);
            for (const auto& arg : ts.args) {
                auto a = resolve_term(ws, arg, sys, cfg);
                if (!a) return std::nullopt;
                t.args.push_back(std::move(*a));
            }
            return t;
        }
    }
    return std::nullopt;
}

}  // namespace link_detail

inline Workspace link(const std::vector<ParsedFile>& files) {
    using link_detail::fail;
    Workspace ws;

    // systems first; everything else may reference them in any block order
    for (const auto& file : files)
        for (const auto& block : file.blocks)
            if (const auto* sb = std::get_if<SystemBlock>(&block)) {
                if (ws.systems.count(sb->system.name)) {
                    fail(ws, sb->pos, "DUPLICATE_BLOCK",
                         "system " + sb->system.name + " defined twice");
                    continue;
                }
                ws.systems.emplace(sb->system.name,
                                   std::make_shared<const SignSystem>(sb->system));
            }

    for (const auto& file : files)
        for (const auto& block : file.blocks)
            if (const auto* cb = std::get_if<ConfigBlock>(&block)) {
                if (ws.configs.count(cb->name)) {
                    fail(ws, cb->pos, "DUPLICATE_BLOCK", "config " + cb->name + " defined twice");
                    continue;
                }
                auto sys_it = ws.systems.find(cb->system);
                if (sys_it == ws.systems.end()) {
                    fail(ws, cb->pos, "UNRESOLVED_NAME",
                         "config " + cb->name + " references unknown system " + cb->system);
                    continue;
                }
                Configuration cfg;
                cfg.system = sys_it->second;
                cfg.name = cb->name;
                std::set<std::string> tuple_texts;
                for (const auto& e : cb->entries) {
                    if (e.kind == ConfigEntry::Kind::Term) {
                        if (cfg.has_term(e.name)) {
                            fail(ws, e.pos, "DUPLICATE_TERM",
                                 "term " + e.name + " defined twice in config " + cb->name);
                            continue;
                        }
                        auto t = link_detail::resolve_term(ws, e.term, *cfg.system, cfg);
                        if (!t) continue;
                        try {
                            well_sorted(*t, *cfg.system);
                        } catch (const Error& err) {
                            fail(ws, e.pos, to_string(err.code()),
                                 "term " + e.name + ": " + err.what());
                            continue;
                        }
                        cfg.terms.emplace_back(e.name, std::move(*t));
                    } else {
                        const RelationDecl* rel = cfg.system->find_relation(e.name);
                        if (!rel) {
                            fail(ws, e.pos, "UNKNOWN_RELATION",
                                 e.name + " is not a relation of " + cfg.system->name);
                            continue;
                        }
                        if (rel->arg_sorts.size() != e.args.size()) {
                            fail(ws, e.pos, "ARITY_MISMATCH",
                                 "tuple does not match arity of " + e.name);
                            continue;
                        }
                        RelationTuple tup{e.name, e.args};
                        bool ok = true;
                        for (std::size_t i = 0; i < e.args.size(); ++i) {
                            const SignTerm* t = cfg.find_term(e.args[i]);
                            if (!t) {
                                fail(ws, e.pos, "UNKNOWN_TERM",
                                     "tuple references missing term " + e.args[i]);
                                ok = false;
                                continue;
                            }
                            std::string actual = well_sorted(*t, *cfg.system);
                            if (!sgn::detail::sort_fits(actual, rel->arg_sorts[i], *t,
                                                        *cfg.system)) {
                                fail(ws, e.pos, "TUPLE_SORT",
                                     "tuple argument " + std::to_string(i + 1) + " has sort " +
                                         actual + ", expected " + rel->arg_sorts[i]);
                                ok = false;
                            }
                        }
                        if (!ok) continue;
                        if (!tuple_texts.insert(to_text(tup)).second) {
                            fail(ws, e.pos, "DUPLICATE_TUPLE",
                                 "tuple " + to_text(tup) + " appears twice");
                            continue;
                        }
                        cfg.tuples.push_back(std::move(tup));
                    }
                }
                ws.configs.emplace(cb->name, std::move(cfg));
            }

    for (const auto& file : files)
        for (const auto& block : file.blocks)
            if (const auto* mb = std::get_if<MorphismBlock>(&block)) {
                if (ws.morphisms.count(mb->name)) {
                    fail(ws, mb->pos, "DUPLICATE_BLOCK", "morphism " + mb->name + " defined twice");
                    continue;
                }
                auto src = ws.systems.find(mb->source);
                auto tgt = ws.systems.find(mb->target);
                if (src == ws.systems.end() || tgt == ws.systems.end()) {
                    fail(ws, mb->pos, "UNRESOLVED_NAME",
                         "morphism " + mb->name + " references unknown system " +
                             (src == ws.systems.end() ? mb->source : mb->target));
                    continue;
                }
                auto m = std::make_shared<SemioticMorphism>();
                m->name = mb->name;
                m->source = src->second;
                m->target = tgt->second;
                bool dup = false;
                for (const auto& e : mb->entries) {
                    std::map<std::string, std::string>* target_map = nullptr;
                    switch (e.kind) {
                        case MorphismMapEntry::Kind::Sort: target_map = &m->sort_map; break;
                        case MorphismMapEntry::Kind::Ctor: target_map = &m->ctor_map; break;
                        case MorphismMapEntry::Kind::Rel: target_map = &m->rel_map; break;
                    }
                    if (!target_map->emplace(e.from, e.to).second) {
                        fail(ws, e.pos, "DUPLICATE_MAP",
                             "morphism " + mb->name + " maps " + e.from + " twice");
                        dup = true;
                    }
                }
                if (dup) continue;
                ws.morphism_reports.emplace(mb->name, validate_morphism(*m));
                ws.morphisms.emplace(mb->name, std::move(m));
            }

    for (const auto& file : files)
        for (const auto& block : file.blocks)
            if (const auto* sq = std::get_if<SequenceBlock>(&block)) {
                if (ws.sequences.count(sq->name)) {
                    fail(ws, sq->pos, "DUPLICATE_BLOCK", "sequence " + sq->name + " defined twice");
                    continue;
                }
                SemiosisSequence seq;
                seq.name = sq->name;
                bool ok = true;
                for (const auto& comp : sq->components) {
                    auto cfg_it = ws.configs.find(comp.from_config);
                    if (cfg_it == ws.configs.end()) {
                        fail(ws, comp.pos, "UNRESOLVED_NAME",
                             "component references unknown config " + comp.from_config);
                        ok = false;
                        continue;
                    }
                    std::vector<SemioticStep> steps;
                    bool steps_ok = true;
                    for (const auto& st : comp.steps) {
                        switch (st.kind) {
                            case StepSyntax::Kind::Vary:
                                steps.push_back(SemioticStep::variation(st.depth, st.budget));
                                break;
                            case StepSyntax::Kind::Select:
                                steps.push_back(SemioticStep::selection(st.minimal));
                                break;
                            case StepSyntax::Kind::Apply: {
                                auto m = ws.morphisms.find(st.morphism);
                                if (m == ws.morphisms.end()) {
                                    fail(ws, st.pos, "UNRESOLVED_NAME",
                                         "step references unknown morphism " + st.morphism);
                                    steps_ok = false;
                                    break;
                                }
                                steps.push_back(SemioticStep::apply(m->second));
                                break;
                            }
                        }
                    }
                    std::vector<Branch> branches;
                    for (const auto& b : comp.branches) {
                        auto m = ws.morphisms.find(b.morphism);
                        auto t = ws.systems.find(b.target);
                        if (m == ws.morphisms.end()) {
                            fail(ws, b.pos, "UNRESOLVED_NAME",
                                 "branch references unknown morphism " + b.morphism);
                            steps_ok = false;
                            continue;
                        }
                        if (t == ws.systems.end()) {
                            fail(ws, b.pos, "UNRESOLVED_NAME",
                                 "branch references unknown system " + b.target);
                            steps_ok = false;
                            continue;
                        }
                        branches.push_back({m->second, b.probability, t->second});
                    }
                    if (!steps_ok) {
                        ok = false;
                        continue;
                    }
                    try {
                        seq.components.push_back(make_component(cfg_it->second.system,
                                                                cfg_it->second, std::move(steps),
                                                                std::move(branches), comp.t1,
                                                                comp.t2));
                    } catch (const Error& err) {
                        fail(ws, comp.pos, to_string(err.code()), err.what());
                        ok = false;
                    }
                }
                if (!ok) continue;
                ValidationReport chain = validate_sequence(seq);
                if (!chain.empty()) {
                    for (auto d : chain) {
                        d.line = sq->pos.line;
                        d.column = sq->pos.column;
                        ws.diagnostics.push_back(std::move(d));
                    }
                    continue;
                }
                ws.sequences.emplace(sq->name, std::move(seq));
            }

    for (const auto& file : files)
        for (const auto& block : file.blocks)
            if (const auto* sc = std::get_if<ScenarioBlock>(&block)) {
                if (ws.scenarios.count(sc->name)) {
                    fail(ws, sc->pos, "DUPLICATE_BLOCK", "scenario " + sc->name + " defined twice");
                    continue;
                }
                sim::Scenario scenario;
                scenario.name = sc->name;
                scenario.adapt = sc->adapt.value_or(false);
                bool ok = true;
                for (const auto& e : sc->envs)
                    scenario.environments.push_back({e.id, e.features, e.rates});
                for (const auto& p : sc->products) {
                    auto cfg = ws.configs.find(p.config);
                    if (cfg == ws.configs.end()) {
                        fail(ws, p.pos, "UNRESOLVED_NAME",
                             "product " + p.id + " references unknown config " + p.config);
                        ok = false;
                        continue;
                    }
                    scenario.products.push_back(
                        {p.id, cfg->second, p.params, p.env, p.manufacturer});
                }
                for (const auto& a : sc->agents) {
                    sim::AgentSpec spec;
                    spec.product = a.product;
                    spec.weber_k = a.weber;
                    spec.filter_window = a.window;
                    for (const auto& e : a.expects) {
                        sim::Expectation exp;
                        exp.kind = e.functional ? sim::Expectation::Kind::Functional
                                                : sim::Expectation::Kind::Environmental;
                        exp.subject = e.subject;
                        exp.low = e.low;
                        exp.high = e.high;
                        spec.expectations.push_back(std::move(exp));
                    }
                    scenario.agents.push_back(std::move(spec));
                }
                if (!ok) continue;
                ValidationReport rep = sim::validate_scenario(scenario);
                if (has_errors(rep)) {
                    for (auto d : rep) {
                        d.line = sc->pos.line;
                        d.column = sc->pos.column;
                        ws.diagnostics.push_back(std::move(d));
                    }
                    continue;
                }
                ws.scenarios.emplace(sc->name, std::move(scenario));
            }

    return ws;
}

// --- file loading with imports ------------------------------------------------

// Depth-first load; each file parsed once, cycles reported on the importing
// file. Relative import paths resolve against the importing file.
inline std::vector<ParsedFile> load_files(const std::vector<std::string>& paths) {
    namespace fs = std::filesystem;
    std::vector<ParsedFile> out;
    std::set<std::string> done;
    std::set<std::string> in_progress;

    struct Loader {
        std::vector<ParsedFile>& out;
        std::set<std::string>& done;
        std::set<std::string>& in_progress;

        void visit(const fs::path& path, ParsedFile* importer, Pos import_pos) {
            std::error_code ec;
            fs::path norm = fs::weakly_canonical(path, ec);
            if (ec) norm = path;
            const std::string key = norm.string();
            if (done.count(key)) return;
            if (in_progress.count(key)) {
                Diagnostic d{Severity::Error, "IMPORT_CYCLE",
                             "import cycle through " + key, import_pos.line, import_pos.column};
                if (importer)
                    importer->diagnostics.push_back(std::move(d));
                else
                    out.push_back(ParsedFile{.path = key, .diagnostics = {std::move(d)}});
                return;
            }
            std::ifstream in(path);
            if (!in) {
                Diagnostic d{Severity::Error, "IO_ERROR", "cannot read " + path.string(),
                             import_pos.line, import_pos.column};
                if (importer)
                    importer->diagnostics.push_back(std::move(d));
                else
                    out.push_back(ParsedFile{.path = path.string(), .diagnostics = {std::move(d)}});
                return;
            }
            std::stringstream buffer;
            buffer << in.rdbuf();
            in_progress.insert(key);
            ParsedFile parsed = parse(buffer.str(), path.string());
            for (const auto& imp : parsed.imports)
                visit(path.parent_path() / imp.path, &parsed, imp.pos);
            in_progress.erase(key);
            done.insert(key);
            out.push_back(std::move(parsed));
        }
    } loader{out, done, in_progress};

    for (const auto& p : paths) loader.visit(p, nullptr, Pos{});
    return out;
}

inline Workspace load_and_link(const std::vector<std::string>& paths,
                               std::vector<ParsedFile>* files_out = nullptr) {
    std::vector<ParsedFile> files = load_files(paths);
    Workspace ws = link(files);
    std::vector<Diagnostic> all;
    for (const auto& f : files)
        for (const auto& d : f.diagnostics) all.push_back(d);
    for (const auto& d : ws.diagnostics) all.push_back(d);
    ws.diagnostics = std::move(all);
    if (files_out) *files_out = std::move(files);
    return ws;
}

}  // namespace sgn::dsl
