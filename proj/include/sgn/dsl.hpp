#pragma once

#include <cctype>
#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "sgn/sign_system.hpp"

namespace sgn::dsl {

struct Pos {
    int line = 1;
    int column = 1;
};

// --- lexer -----------------------------------------------------------------

enum class Tok {
    End,
    Ident,
    Keyword,
    Int,
    Real,
    Str,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Colon,
    Comma,
    Star,
    Equals,
    Less,
    Arrow,
    DotDot,
    AtWord,  // "@level", "@prio"
    Error,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;  // identifier/keyword/atword spelling, string value
    std::int64_t int_value = 0;
    double real_value = 0.0;
    Pos pos;
};

inline const std::set<std::string>& keywords() {
    static const std::set<std::string> kw = {
        "import",  "system",   "data",         "sort",   "ctor",   "rel",    "axiom",
        "rank",    "forbid",   "require",      "atmost", "morphism", "config", "of",
        "sequence", "component", "t",          "from",   "vary",   "depth",  "budget",
        "select",  "min",      "apply",        "branch", "p",      "scenario", "env",
        "features", "rate",    "product",      "in",     "manufacturer", "params", "agent",
        "for",     "weber",    "window",       "expect", "functional", "adapt", "on",
        "off",
    };
    return kw;
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_trivia();
        Token tok;
        tok.pos = pos_;
        if (at_end()) {
            tok.kind = Tok::End;
            return tok;
        }
        char c = peek();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_word();
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(false);
        switch (c) {
            case '-':
                if (offset_ + 1 < text_.size() && text_[offset_ + 1] == '>') {
                    advance();
                    advance();
                    tok.kind = Tok::Arrow;
                    return tok;
                }
                if (offset_ + 1 < text_.size() &&
                    std::isdigit(static_cast<unsigned char>(text_[offset_ + 1]))) {
                    return lex_number(true);
                }
                advance();
                tok.kind = Tok::Error;
                tok.text = "-";
                return tok;
            case '"':
                return lex_string();
            case '{': advance(); tok.kind = Tok::LBrace; return tok;
            case '}': advance(); tok.kind = Tok::RBrace; return tok;
            case '(': advance(); tok.kind = Tok::LParen; return tok;
            case ')': advance(); tok.kind = Tok::RParen; return tok;
            case '[': advance(); tok.kind = Tok::LBracket; return tok;
            case ']': advance(); tok.kind = Tok::RBracket; return tok;
            case ';': advance(); tok.kind = Tok::Semi; return tok;
            case ':': advance(); tok.kind = Tok::Colon; return tok;
            case ',': advance(); tok.kind = Tok::Comma; return tok;
            case '*': advance(); tok.kind = Tok::Star; return tok;
            case '=': advance(); tok.kind = Tok::Equals; return tok;
            case '<': advance(); tok.kind = Tok::Less; return tok;
            case '.':
                if (offset_ + 1 < text_.size() && text_[offset_ + 1] == '.') {
                    advance();
                    advance();
                    tok.kind = Tok::DotDot;
                    return tok;
                }
                advance();
                tok.kind = Tok::Error;
                tok.text = ".";
                return tok;
            case '@': {
                advance();
                std::string word;
                while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
                    word += take();
                tok.kind = Tok::AtWord;
                tok.text = word;
                return tok;
            }
            default:
                advance();
                tok.kind = Tok::Error;
                tok.text = std::string(1, c);
                return tok;
        }
    }

private:
    bool at_end() const { return offset_ >= text_.size(); }
    char peek() const { return text_[offset_]; }
    char take() {
        char c = text_[offset_];
        advance();
        return c;
    }
    void advance() {
        if (at_end()) return;
        if (text_[offset_] == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else {
            ++pos_.column;
        }
        ++offset_;
    }
    void skip_trivia() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && offset_ + 1 < text_.size() && text_[offset_ + 1] == '/') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }
    Token lex_word() {
        Token tok;
        tok.pos = pos_;
        std::string word;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            word += take();
        tok.kind = keywords().count(word) ? Tok::Keyword : Tok::Ident;
        tok.text = std::move(word);
        return tok;
    }
    Token lex_number(bool negative) {
        Token tok;
        tok.pos = pos_;
        std::string digits;
        if (negative) digits += take();  // '-'
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) digits += take();
        bool real = false;
        if (!at_end() && peek() == '.' && offset_ + 1 < text_.size() &&
            std::isdigit(static_cast<unsigned char>(text_[offset_ + 1]))) {
            real = true;
            digits += take();  // '.'
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) digits += take();
        }
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            std::size_t save = offset_;
            Pos save_pos = pos_;
            std::string exp;
            exp += take();
            if (!at_end() && (peek() == '+' || peek() == '-')) exp += take();
            if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) exp += take();
                digits += exp;
                real = true;
            } else {
                offset_ = save;  // plain ident follows; back off
                pos_ = save_pos;
            }
        }
        if (real) {
            tok.kind = Tok::Real;
            tok.real_value = std::strtod(digits.c_str(), nullptr);
        } else {
            tok.kind = Tok::Int;
            errno = 0;
            tok.int_value = std::strtoll(digits.c_str(), nullptr, 10);
            if (errno == ERANGE) {
                tok.kind = Tok::Error;
                tok.text = digits;
            }
        }
        return tok;
    }
    Token lex_string() {
        Token tok;
        tok.pos = pos_;
        advance();  // opening quote
        std::string value;
        while (!at_end()) {
            char c = take();
            if (c == '"') {
                tok.kind = Tok::Str;
                tok.text = std::move(value);
                return tok;
            }
            if (c == '\n') break;
            if (c == '\\' && !at_end()) {
                char esc = take();
                switch (esc) {
                    case 'n': value += '\n'; break;
                    case 'r': value += '\r'; break;
                    case 't': value += '\t'; break;
                    case '"': value += '"'; break;
                    case '\\': value += '\\'; break;
                    default: value += esc; break;
                }
            } else {
                value += c;
            }
        }
        tok.kind = Tok::Error;
        tok.text = "unterminated string";
        return tok;
    }

    std::string_view text_;
    std::size_t offset_ = 0;
    Pos pos_;
};

// --- syntax tree -------------------------------------------------------------

// Term as written. A bare identifier may later resolve to a constant
// constructor or to a previously defined term of the same configuration.
struct TermSyntax {
    enum class Kind { Apply, Ident, Int, Real, Str };

    Kind kind = Kind::Ident;
    Pos pos;
    std::string name;
    std::int64_t int_value = 0;
    double real_value = 0.0;
    std::string str_value;
    std::vector<TermSyntax> args;

    bool operator==(const TermSyntax& other) const {
        if (kind != other.kind) return false;
        switch (kind) {
            case Kind::Apply: return name == other.name && args == other.args;
            case Kind::Ident: return name == other.name;
            case Kind::Int: return int_value == other.int_value;
            case Kind::Real: return real_value == other.real_value;
            case Kind::Str: return str_value == other.str_value;
        }
        return false;
    }
};

struct ImportDecl {
    std::string path;
    Pos pos;

    bool operator==(const ImportDecl& o) const { return path == o.path; }
};

struct SystemBlock {
    SignSystem system;
    Pos pos;

    bool operator==(const SystemBlock& o) const { return system == o.system; }
};

struct MorphismMapEntry {
    enum class Kind { Sort, Ctor, Rel };
    Kind kind = Kind::Sort;
    std::string from;
    std::string to;
    Pos pos;

    bool operator==(const MorphismMapEntry& o) const {
        return kind == o.kind && from == o.from && to == o.to;
    }
};

struct MorphismBlock {
    std::string name;
    std::string source;
    std::string target;
    std::vector<MorphismMapEntry> entries;
    Pos pos;

    bool operator==(const MorphismBlock& o) const {
        return name == o.name && source == o.source && target == o.target && entries == o.entries;
    }
};

struct ConfigEntry {
    enum class Kind { Term, Tuple };
    Kind kind = Kind::Term;
    std::string name;  // term name, or relation name for tuples
    TermSyntax term;
    std::vector<std::string> args;
    Pos pos;

    bool operator==(const ConfigEntry& o) const {
        if (kind != o.kind || name != o.name) return false;
        return kind == Kind::Term ? term == o.term : args == o.args;
    }
};

struct ConfigBlock {
    std::string name;
    std::string system;
    std::vector<ConfigEntry> entries;
    Pos pos;

    bool operator==(const ConfigBlock& o) const {
        return name == o.name && system == o.system && entries == o.entries;
    }
};

struct StepSyntax {
    enum class Kind { Vary, Select, Apply };
    Kind kind = Kind::Vary;
    std::int64_t depth = 1;
    std::int64_t budget = 0;
    bool minimal = false;
    std::string morphism;
    Pos pos;

    bool operator==(const StepSyntax& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case Kind::Vary: return depth == o.depth && budget == o.budget;
            case Kind::Select: return minimal == o.minimal;
            case Kind::Apply: return morphism == o.morphism;
        }
        return false;
    }
};

struct BranchSyntax {
    std::string morphism;
    double probability = 1.0;
    std::string target;
    Pos pos;

    bool operator==(const BranchSyntax& o) const {
        return morphism == o.morphism && probability == o.probability && target == o.target;
    }
};

struct ComponentSyntax {
    std::int64_t t1 = 0;
    std::int64_t t2 = 1;
    std::string from_config;
    std::vector<StepSyntax> steps;
    std::vector<BranchSyntax> branches;
    Pos pos;

    bool operator==(const ComponentSyntax& o) const {
        return t1 == o.t1 && t2 == o.t2 && from_config == o.from_config && steps == o.steps &&
               branches == o.branches;
    }
};

struct SequenceBlock {
    std::string name;
    std::vector<ComponentSyntax> components;
    Pos pos;

    bool operator==(const SequenceBlock& o) const {
        return name == o.name && components == o.components;
    }
};

struct EnvDecl {
    std::string id;
    std::vector<double> features;
    std::vector<std::pair<std::string, double>> rates;
    Pos pos;

    bool operator==(const EnvDecl& o) const {
        return id == o.id && features == o.features && rates == o.rates;
    }
};

struct ProductDecl {
    std::string id;
    std::string config;
    std::string env;
    std::string manufacturer;
    std::vector<std::pair<std::string, double>> params;
    Pos pos;

    bool operator==(const ProductDecl& o) const {
        return id == o.id && config == o.config && env == o.env &&
               manufacturer == o.manufacturer && params == o.params;
    }
};

struct ExpectDecl {
    bool functional = true;
    std::string subject;  // parameter name or event kind
    double low = 0.0;
    double high = 0.0;
    Pos pos;

    bool operator==(const ExpectDecl& o) const {
        return functional == o.functional && subject == o.subject && low == o.low && high == o.high;
    }
};

struct AgentDecl {
    std::string product;
    double weber = 0.1;
    std::int64_t window = 16;
    std::vector<ExpectDecl> expects;
    Pos pos;

    bool operator==(const AgentDecl& o) const {
        return product == o.product && weber == o.weber && window == o.window &&
               expects == o.expects;
    }
};

struct ScenarioBlock {
    std::string name;
    std::vector<EnvDecl> envs;
    std::vector<ProductDecl> products;
    std::vector<AgentDecl> agents;
    std::optional<bool> adapt;
    Pos pos;

    bool operator==(const ScenarioBlock& o) const {
        return name == o.name && envs == o.envs && products == o.products && agents == o.agents &&
               adapt == o.adapt;
    }
};

using Block = std::variant<SystemBlock, MorphismBlock, ConfigBlock, SequenceBlock, ScenarioBlock>;

struct ParsedFile {
    std::string path;
    std::string text;
    std::vector<ImportDecl> imports;
    std::vector<Block> blocks;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return !has_errors(diagnostics); }
};

// --- parser ------------------------------------------------------------------

class Parser {
public:
    Parser(std::string_view text, std::string path) : lexer_(text) {
        file_.path = std::move(path);
        file_.text = std::string(text);
        shift();
    }

    ParsedFile run() {
        while (cur_.kind != Tok::End) {
            if (accept_keyword("import")) {
                ImportDecl imp;
                imp.pos = prev_pos_;
                if (cur_.kind == Tok::Str) {
                    imp.path = cur_.text;
                    shift();
                    expect(Tok::Semi, "';' after import path");
                    file_.imports.push_back(std::move(imp));
                } else {
                    error("IMPORT_PATH", "expected a quoted path after 'import'");
                    sync_to_semi();
                }
            } else if (check_keyword("system")) {
                parse_system();
            } else if (check_keyword("morphism")) {
                parse_morphism();
            } else if (check_keyword("config")) {
                parse_config();
            } else if (check_keyword("sequence")) {
                parse_sequence();
            } else if (check_keyword("scenario")) {
                parse_scenario();
            } else {
                error("UNEXPECTED_TOKEN", "expected a top-level block, got " + describe(cur_));
                shift();
            }
        }
        return std::move(file_);
    }

private:
    // -- token plumbing --
    void shift() {
        prev_pos_ = cur_.pos;
        cur_ = lexer_.next();
        while (cur_.kind == Tok::Error) {
            if (cur_.text == "unterminated string")
                error_at(cur_.pos, "UNTERMINATED_STRING", "string literal is not terminated");
            else if (!cur_.text.empty() &&
                     (std::isdigit(static_cast<unsigned char>(cur_.text[0])) ||
                      cur_.text.size() > 1))
                error_at(cur_.pos, "BAD_NUMBER", "numeric literal '" + cur_.text + "' is out of range");
            else
                error_at(cur_.pos, "BAD_TOKEN", "unrecognized input '" + cur_.text + "'");
            cur_ = lexer_.next();
        }
    }
    bool check(Tok k) const { return cur_.kind == k; }
    bool check_keyword(std::string_view kw) const {
        return cur_.kind == Tok::Keyword && cur_.text == kw;
    }
    bool accept(Tok k) {
        if (!check(k)) return false;
        shift();
        return true;
    }
    bool accept_keyword(std::string_view kw) {
        if (!check_keyword(kw)) return false;
        shift();
        return true;
    }
    bool expect(Tok k, const std::string& what) {
        if (accept(k)) return true;
        error("UNEXPECTED_TOKEN", "expected " + what + ", got " + describe(cur_));
        return false;
    }
    bool expect_keyword(std::string_view kw) {
        if (accept_keyword(kw)) return true;
        error("UNEXPECTED_TOKEN",
              "expected '" + std::string(kw) + "', got " + describe(cur_));
        return false;
    }
    std::string expect_ident(const std::string& what) {
        if (cur_.kind == Tok::Ident) {
            std::string n = cur_.text;
            shift();
            return n;
        }
        if (cur_.kind == Tok::Keyword)
            error("RESERVED_WORD", "'" + cur_.text + "' is reserved and cannot name " + what);
        else
            error("UNEXPECTED_TOKEN", "expected " + what + " name, got " + describe(cur_));
        shift();
        return "";
    }
    std::optional<std::int64_t> expect_int(const std::string& what) {
        if (cur_.kind == Tok::Int) {
            std::int64_t v = cur_.int_value;
            shift();
            return v;
        }
        error("UNEXPECTED_TOKEN", "expected " + what + ", got " + describe(cur_));
        return std::nullopt;
    }
    std::optional<double> expect_number(const std::string& what) {
        if (cur_.kind == Tok::Real) {
            double v = cur_.real_value;
            shift();
            return v;
        }
        if (cur_.kind == Tok::Int) {
            double v = static_cast<double>(cur_.int_value);
            shift();
            return v;
        }
        error("UNEXPECTED_TOKEN", "expected " + what + ", got " + describe(cur_));
        return std::nullopt;
    }
    static std::string describe(const Token& t) {
        switch (t.kind) {
            case Tok::End: return "end of file";
            case Tok::Ident: return "'" + t.text + "'";
            case Tok::Keyword: return "'" + t.text + "'";
            case Tok::Int: return "integer";
            case Tok::Real: return "real";
            case Tok::Str: return "string";
            case Tok::AtWord: return "'@" + t.text + "'";
            case Tok::LBrace: return "'{'";
            case Tok::RBrace: return "'}'";
            case Tok::LParen: return "'('";
            case Tok::RParen: return "')'";
            case Tok::LBracket: return "'['";
            case Tok::RBracket: return "']'";
            case Tok::Semi: return "';'";
            case Tok::Colon: return "':'";
            case Tok::Comma: return "','";
            case Tok::Star: return "'*'";
            case Tok::Equals: return "'='";
            case Tok::Less: return "'<'";
            case Tok::Arrow: return "'->'";
            case Tok::DotDot: return "'..'";
            case Tok::Error: return "'" + t.text + "'";
        }
        return "?";
    }
    void error(const std::string& code, const std::string& message) {
        error_at(cur_.pos, code, message);
    }
    void error_at(Pos pos, const std::string& code, const std::string& message) {
        file_.diagnostics.push_back(
            Diagnostic{Severity::Error, code, message, pos.line, pos.column});
    }
    // Skip to just past the next ';', stopping before '}'.
    void sync_to_semi() {
        while (cur_.kind != Tok::End && cur_.kind != Tok::RBrace) {
            if (cur_.kind == Tok::Semi) {
                shift();
                return;
            }
            shift();
        }
    }
    void sync_to_rbrace() {
        int depth = 0;
        while (cur_.kind != Tok::End) {
            if (cur_.kind == Tok::LBrace) ++depth;
            if (cur_.kind == Tok::RBrace) {
                if (depth == 0) {
                    shift();
                    return;
                }
                --depth;
            }
            shift();
        }
    }

    // -- terms and patterns --
    std::optional<TermSyntax> parse_term() {
        TermSyntax t;
        t.pos = cur_.pos;
        switch (cur_.kind) {
            case Tok::Int:
                t.kind = TermSyntax::Kind::Int;
                t.int_value = cur_.int_value;
                shift();
                return t;
            case Tok::Real:
                t.kind = TermSyntax::Kind::Real;
                t.real_value = cur_.real_value;
                shift();
                return t;
            case Tok::Str:
                t.kind = TermSyntax::Kind::Str;
                t.str_value = cur_.text;
                shift();
                return t;
            case Tok::Ident: {
                t.name = cur_.text;
                shift();
                if (accept(Tok::LParen)) {
                    t.kind = TermSyntax::Kind::Apply;
                    if (!check(Tok::RParen)) {
                        do {
                            auto arg = parse_term();
                            if (!arg) return std::nullopt;
                            t.args.push_back(std::move(*arg));
                        } while (accept(Tok::Comma));
                    }
                    if (!expect(Tok::RParen, "')'")) return std::nullopt;
                } else {
                    t.kind = TermSyntax::Kind::Ident;
                }
                return t;
            }
            default:
                error("UNEXPECTED_TOKEN", "expected a term, got " + describe(cur_));
                return std::nullopt;
        }
    }

    // Ground term for constraint patterns (no bare identifiers).
    std::optional<SignTerm> parse_ground_term() {
        switch (cur_.kind) {
            case Tok::Int: {
                SignTerm t = SignTerm::of_int(cur_.int_value);
                shift();
                return t;
            }
            case Tok::Real: {
                SignTerm t = SignTerm::of_real(cur_.real_value);
                shift();
                return t;
            }
            case Tok::Str: {
                SignTerm t = SignTerm::of_str(cur_.text);
                shift();
                return t;
            }
            case Tok::Ident: {
                std::string name = cur_.text;
                shift();
                if (!expect(Tok::LParen, "'(' in ground term")) return std::nullopt;
                SignTerm t = SignTerm::make(name);
                if (!check(Tok::RParen)) {
                    do {
                        auto arg = parse_ground_term();
                        if (!arg) return std::nullopt;
                        t.args.push_back(std::move(*arg));
                    } while (accept(Tok::Comma));
                }
                if (!expect(Tok::RParen, "')'")) return std::nullopt;
                return t;
            }
            default:
                error("UNEXPECTED_TOKEN", "expected a ground term, got " + describe(cur_));
                return std::nullopt;
        }
    }

    // -- system --
    void parse_system() {
        Pos block_pos = cur_.pos;
        shift();  // 'system'
        SystemBlock block;
        block.pos = block_pos;
        block.system.name = expect_ident("system");
        if (!expect(Tok::LBrace, "'{'")) {
            sync_to_rbrace();
            return;
        }
        SignSystem& sys = block.system;
        while (!check(Tok::RBrace) && !check(Tok::End)) {
            if (accept_keyword("data")) {
                Pos p = cur_.pos;
                std::string n = expect_ident("data-sort");
                if (!n.empty()) {
                    if (sys.find_sort(n))
                        error_at(p, "DUPLICATE_SORT", "sort " + n + " declared twice");
                    else
                        sys.sorts.push_back({n, SortKind::Data, std::nullopt});
                }
                expect(Tok::Semi, "';'");
            } else if (accept_keyword("sort")) {
                Pos p = cur_.pos;
                std::string n = expect_ident("sort");
                SortDecl decl{n, SortKind::Sign, std::nullopt};
                if (accept(Tok::LBracket)) {
                    if (accept_keyword("product"))
                        decl.boundary = Boundary::Product;
                    else if (accept_keyword("env"))
                        decl.boundary = Boundary::Environment;
                    else
                        error("UNEXPECTED_TOKEN", "expected 'product' or 'env' boundary tag");
                    expect(Tok::RBracket, "']'");
                }
                bool duplicate = !n.empty() && sys.find_sort(n);
                if (duplicate) error_at(p, "DUPLICATE_SORT", "sort " + n + " declared twice");
                if (!n.empty() && !duplicate) sys.sorts.push_back(decl);
                while (accept(Tok::Less)) {
                    Pos sp = cur_.pos;
                    std::string super = expect_ident("supersort");
                    if (super.empty()) break;
                    const SortDecl* sd = sys.find_sort(super);
                    if (!sd) {
                        error_at(sp, "UNKNOWN_SORT", "supersort " + super + " not declared yet");
                    } else if (sd->kind != SortKind::Sign) {
                        error_at(sp, "SUBSORT_NOT_SIGN", "supersort " + super + " is a data-sort");
                    } else if (!duplicate && !n.empty()) {
                        sys.subsort_edges.emplace_back(n, super);
                        if (subsort_leq(super, n, sys) && super != n) {
                            error_at(sp, "CYCLIC_SUBSORT",
                                     "edge " + n + " < " + super + " closes a subsort cycle");
                            sys.subsort_edges.pop_back();
                        }
                    }
                }
                expect(Tok::Semi, "';'");
            } else if (accept_keyword("ctor")) {
                parse_ctor(sys);
            } else if (accept_keyword("rel")) {
                Pos p = cur_.pos;
                RelationDecl decl;
                decl.name = expect_ident("relation");
                expect(Tok::LParen, "'('");
                if (!check(Tok::RParen)) {
                    do {
                        Pos sp = cur_.pos;
                        std::string s = expect_ident("argument sort");
                        if (!s.empty() && !sys.find_sort(s))
                            error_at(sp, "UNKNOWN_SORT",
                                     "relation " + decl.name + " references undeclared sort " + s);
                        decl.arg_sorts.push_back(std::move(s));
                    } while (accept(Tok::Comma));
                }
                expect(Tok::RParen, "')'");
                expect(Tok::Semi, "';'");
                if (decl.arg_sorts.empty())
                    error_at(p, "EMPTY_RELATION",
                             "relation " + decl.name + " needs at least one argument sort");
                else if (!decl.name.empty()) {
                    if (sys.find_relation(decl.name))
                        error_at(p, "DUPLICATE_REL", "relation " + decl.name + " declared twice");
                    else
                        sys.relations.push_back(std::move(decl));
                }
            } else if (accept_keyword("axiom")) {
                parse_axiom(sys);
            } else {
                error("UNEXPECTED_TOKEN", "expected a declaration, got " + describe(cur_));
                sync_to_semi();
            }
        }
        expect(Tok::RBrace, "'}'");
        file_.blocks.push_back(std::move(block));
    }

    void parse_ctor(SignSystem& sys) {
        Pos p = cur_.pos;
        ConstructorDecl decl;
        decl.name = expect_ident("constructor");
        expect(Tok::LParen, "'('");
        if (!check(Tok::RParen)) {
            do {
                Pos sp = cur_.pos;
                std::string s = expect_ident("argument sort");
                if (!s.empty() && !sys.find_sort(s))
                    error_at(sp, "UNKNOWN_SORT",
                             "constructor " + decl.name + " references undeclared sort " + s);
                decl.arg_sorts.push_back(std::move(s));
            } while (accept(Tok::Comma));
        }
        expect(Tok::RParen, "')'");
        expect(Tok::Arrow, "'->'");
        Pos rp = cur_.pos;
        decl.result_sort = expect_ident("result sort");
        if (!decl.result_sort.empty()) {
            const SortDecl* rs = sys.find_sort(decl.result_sort);
            if (!rs)
                error_at(rp, "UNKNOWN_SORT", "constructor " + decl.name +
                                                 " references undeclared sort " + decl.result_sort);
            else if (rs->kind != SortKind::Sign)
                error_at(rp, "NONSIGN_RESULT",
                         "constructor " + decl.name + " results in data-sort " + decl.result_sort);
        }
        bool have_level = false;
        while (check(Tok::AtWord)) {
            if (cur_.text == "level") {
                shift();
                if (auto v = expect_int("level")) {
                    decl.level = *v;
                    have_level = true;
                }
            } else if (cur_.text == "prio") {
                shift();
                if (auto v = expect_int("priority")) decl.priority = *v;
            } else {
                error("UNEXPECTED_TOKEN", "expected '@level' or '@prio'");
                shift();
            }
        }
        if (!have_level) error_at(p, "MISSING_LEVEL", "constructor " + decl.name + " has no @level");
        expect(Tok::Semi, "';'");
        if (decl.name.empty()) return;
        if (sys.find_constructor(decl.name))
            error_at(p, "DUPLICATE_CTOR", "constructor " + decl.name + " declared twice");
        else
            sys.constructors.push_back(std::move(decl));
    }

    void parse_axiom(SignSystem& sys) {
        Pos p = cur_.pos;
        Constraint c;
        c.name = expect_ident("axiom");
        expect(Tok::Colon, "':'");
        expect_keyword("rank");
        if (auto v = expect_int("rank")) c.rank = *v;
        if (c.rank < 0) error_at(p, "BAD_RANK", "axiom " + c.name + " has negative rank");
        expect(Tok::Colon, "':'");
        bool body_ok = true;
        if (accept_keyword("forbid") || check_keyword("require")) {
            c.op = check_keyword("require") ? Constraint::Op::Require : Constraint::Op::Forbid;
            if (c.op == Constraint::Op::Require) shift();
            Pos rp = cur_.pos;
            c.relation = expect_ident("relation");
            const RelationDecl* rel = sys.find_relation(c.relation);
            if (!c.relation.empty() && !rel)
                error_at(rp, "UNKNOWN_RELATION",
                         "axiom " + c.name + " references undeclared relation " + c.relation);
            expect(Tok::LParen, "'('");
            if (!check(Tok::RParen)) {
                do {
                    if (accept(Tok::Star)) {
                        c.pattern.push_back(PatternAtom::wildcard());
                    } else if (cur_.kind == Tok::Ident) {
                        // Variable, unless followed by '(' (a ground term).
                        std::string word = cur_.text;
                        shift();
                        if (check(Tok::LParen)) {
                            shift();
                            SignTerm t = SignTerm::make(word);
                            bool inner_ok = true;
                            if (!check(Tok::RParen)) {
                                do {
                                    auto arg = parse_ground_term();
                                    if (!arg) {
                                        inner_ok = false;
                                        break;
                                    }
                                    t.args.push_back(std::move(*arg));
                                } while (accept(Tok::Comma));
                            }
                            if (inner_ok) expect(Tok::RParen, "')'");
                            c.pattern.push_back(PatternAtom::ground(std::move(t)));
                            if (!inner_ok) {
                                body_ok = false;
                                break;
                            }
                        } else {
                            c.pattern.push_back(PatternAtom::var(std::move(word)));
                        }
                    } else if (cur_.kind == Tok::Int || cur_.kind == Tok::Real ||
                               cur_.kind == Tok::Str) {
                        auto g = parse_ground_term();
                        if (!g) {
                            body_ok = false;
                            break;
                        }
                        c.pattern.push_back(PatternAtom::ground(std::move(*g)));
                    } else {
                        error("UNEXPECTED_TOKEN", "expected a pattern atom, got " + describe(cur_));
                        body_ok = false;
                        break;
                    }
                } while (accept(Tok::Comma));
            }
            if (body_ok) expect(Tok::RParen, "')'");
            if (rel && c.pattern.size() != rel->arg_sorts.size())
                error_at(p, "ARITY_MISMATCH",
                         "axiom " + c.name + " pattern arity " + std::to_string(c.pattern.size()) +
                             " does not match relation " + c.relation + " arity " +
                             std::to_string(rel->arg_sorts.size()));
            if (rel && c.pattern.size() == rel->arg_sorts.size()) {
                for (std::size_t i = 0; i < c.pattern.size(); ++i) {
                    const auto& atom = c.pattern[i];
                    if (atom.kind != PatternAtom::Kind::Ground) continue;
                    try {
                        std::string actual = well_sorted(atom.term, sys);
                        if (!sgn::detail::sort_fits(actual, rel->arg_sorts[i], atom.term, sys))
                            error_at(p, "PATTERN_SORT",
                                     "axiom " + c.name + " atom " + std::to_string(i + 1) +
                                         " has sort " + actual + ", expected " + rel->arg_sorts[i]);
                    } catch (const Error& e) {
                        error_at(p, "PATTERN_SORT",
                                 "axiom " + c.name + " atom " + std::to_string(i + 1) + ": " +
                                     e.what());
                    }
                }
            }
        } else if (accept_keyword("atmost")) {
            c.op = Constraint::Op::AtMost;
            Pos rp = cur_.pos;
            c.relation = expect_ident("relation");
            if (!c.relation.empty() && !sys.find_relation(c.relation))
                error_at(rp, "UNKNOWN_RELATION",
                         "axiom " + c.name + " references undeclared relation " + c.relation);
            if (auto v = expect_int("count")) c.limit = *v;
            if (c.limit < 0) error_at(p, "BAD_COUNT", "axiom " + c.name + " has negative count");
        } else {
            error("UNEXPECTED_TOKEN", "expected 'forbid', 'require' or 'atmost'");
            body_ok = false;
        }
        if (!body_ok) {
            sync_to_semi();
            return;
        }
        expect(Tok::Semi, "';'");
        if (c.name.empty()) return;
        for (const auto& existing : sys.constraints)
            if (existing.name == c.name) {
                error_at(p, "DUPLICATE_CONSTRAINT", "axiom " + c.name + " declared twice");
                return;
            }
        sys.constraints.push_back(std::move(c));
    }

    // -- morphism --
    void parse_morphism() {
        Pos block_pos = cur_.pos;
        shift();
        MorphismBlock block;
        block.pos = block_pos;
        block.name = expect_ident("morphism");
        expect(Tok::Colon, "':'");
        block.source = expect_ident("source system");
        expect(Tok::Arrow, "'->'");
        block.target = expect_ident("target system");
        if (!expect(Tok::LBrace, "'{'")) {
            sync_to_rbrace();
            return;
        }
        while (!check(Tok::RBrace) && !check(Tok::End)) {
            MorphismMapEntry e;
            e.pos = cur_.pos;
            if (accept_keyword("sort"))
                e.kind = MorphismMapEntry::Kind::Sort;
            else if (accept_keyword("ctor"))
                e.kind = MorphismMapEntry::Kind::Ctor;
            else if (accept_keyword("rel"))
                e.kind = MorphismMapEntry::Kind::Rel;
            else {
                error("UNEXPECTED_TOKEN", "expected 'sort', 'ctor' or 'rel' map entry");
                sync_to_semi();
                continue;
            }
            e.from = expect_ident("source symbol");
            expect(Tok::Arrow, "'->'");
            e.to = expect_ident("target symbol");
            expect(Tok::Semi, "';'");
            if (!e.from.empty() && !e.to.empty()) block.entries.push_back(std::move(e));
        }
        expect(Tok::RBrace, "'}'");
        file_.blocks.push_back(std::move(block));
    }

    // -- config --
    void parse_config() {
        Pos block_pos = cur_.pos;
        shift();
        ConfigBlock block;
        block.pos = block_pos;
        block.name = expect_ident("config");
        expect_keyword("of");
        block.system = expect_ident("system");
        if (!expect(Tok::LBrace, "'{'")) {
            sync_to_rbrace();
            return;
        }
        while (!check(Tok::RBrace) && !check(Tok::End)) {
            ConfigEntry e;
            e.pos = cur_.pos;
            e.name = expect_ident("term or relation");
            if (e.name.empty()) {
                sync_to_semi();
                continue;
            }
            if (accept(Tok::Equals)) {
                e.kind = ConfigEntry::Kind::Term;
                auto t = parse_term();
                if (!t) {
                    sync_to_semi();
                    continue;
                }
                e.term = std::move(*t);
            } else if (accept(Tok::LParen)) {
                e.kind = ConfigEntry::Kind::Tuple;
                if (!check(Tok::RParen)) {
                    do {
                        std::string arg = expect_ident("term");
                        if (arg.empty()) break;
                        e.args.push_back(std::move(arg));
                    } while (accept(Tok::Comma));
                }
                expect(Tok::RParen, "')'");
            } else {
                error("UNEXPECTED_TOKEN", "expected '=' or '(' after " + e.name);
                sync_to_semi();
                continue;
            }
            expect(Tok::Semi, "';'");
            block.entries.push_back(std::move(e));
        }
        expect(Tok::RBrace, "'}'");
        file_.blocks.push_back(std::move(block));
    }

    // -- sequence --
    void parse_sequence() {
        Pos block_pos = cur_.pos;
        shift();
        SequenceBlock block;
        block.pos = block_pos;
        block.name = expect_ident("sequence");
        if (!expect(Tok::LBrace, "'{'")) {
            sync_to_rbrace();
            return;
        }
        while (!check(Tok::RBrace) && !check(Tok::End)) {
            if (!check_keyword("component")) {
                error("UNEXPECTED_TOKEN", "expected 'component', got " + describe(cur_));
                sync_to_rbrace();
                break;
            }
            ComponentSyntax comp;
            comp.pos = cur_.pos;
            shift();
            expect_keyword("t");
            if (auto v = expect_int("start time")) comp.t1 = *v;
            expect(Tok::DotDot, "'..'");
            if (auto v = expect_int("end time")) comp.t2 = *v;
            if (!expect(Tok::LBrace, "'{'")) {
                sync_to_rbrace();
                continue;
            }
            expect_keyword("from");
            comp.from_config = expect_ident("configuration");
            expect(Tok::Semi, "';'");
            while (!check(Tok::RBrace) && !check(Tok::End)) {
                if (accept_keyword("vary")) {
                    StepSyntax s;
                    s.pos = prev_pos_;
                    s.kind = StepSyntax::Kind::Vary;
                    expect_keyword("depth");
                    if (auto v = expect_int("depth")) s.depth = *v;
                    expect_keyword("budget");
                    if (auto v = expect_int("budget")) s.budget = *v;
                    expect(Tok::Semi, "';'");
                    comp.steps.push_back(s);
                } else if (accept_keyword("select")) {
                    StepSyntax s;
                    s.pos = prev_pos_;
                    s.kind = StepSyntax::Kind::Select;
                    s.minimal = accept_keyword("min");
                    expect(Tok::Semi, "';'");
                    comp.steps.push_back(s);
                } else if (accept_keyword("apply")) {
                    StepSyntax s;
                    s.pos = prev_pos_;
                    s.kind = StepSyntax::Kind::Apply;
                    s.morphism = expect_ident("morphism");
                    expect(Tok::Semi, "';'");
                    comp.steps.push_back(s);
                } else if (accept_keyword("branch")) {
                    BranchSyntax b;
                    b.pos = prev_pos_;
                    b.morphism = expect_ident("morphism");
                    expect_keyword("p");
                    if (auto v = expect_number("probability")) b.probability = *v;
                    expect(Tok::Arrow, "'->'");
                    b.target = expect_ident("target system");
                    expect(Tok::Semi, "';'");
                    comp.branches.push_back(std::move(b));
                } else {
                    error("UNEXPECTED_TOKEN",
                          "expected 'vary', 'select', 'apply' or 'branch', got " + describe(cur_));
                    sync_to_semi();
                }
            }
            expect(Tok::RBrace, "'}'");
            if (comp.branches.empty())
                error_at(comp.pos, "NO_BRANCHES", "component has no branches");
            block.components.push_back(std::move(comp));
        }
        expect(Tok::RBrace, "'}'");
        file_.blocks.push_back(std::move(block));
    }

    // -- scenario --
    void parse_scenario() {
        Pos block_pos = cur_.pos;
        shift();
        ScenarioBlock block;
        block.pos = block_pos;
        block.name = expect_ident("scenario");
        if (!expect(Tok::LBrace, "'{'")) {
            sync_to_rbrace();
            return;
        }
        while (!check(Tok::RBrace) && !check(Tok::End)) {
            if (accept_keyword("env")) {
                EnvDecl env;
                env.pos = prev_pos_;
                env.id = expect_ident("environment");
                expect_keyword("features");
                expect(Tok::LBracket, "'['");
                if (!check(Tok::RBracket)) {
                    do {
                        if (auto v = expect_number("feature")) env.features.push_back(*v);
                        else break;
                    } while (accept(Tok::Comma));
                }
                expect(Tok::RBracket, "']'");
                while (accept_keyword("rate")) {
                    std::string kind = expect_ident("event kind");
                    auto v = expect_number("rate");
                    if (!kind.empty() && v) env.rates.emplace_back(kind, *v);
                }
                expect(Tok::Semi, "';'");
                block.envs.push_back(std::move(env));
            } else if (accept_keyword("product")) {
                ProductDecl prod;
                prod.pos = prev_pos_;
                prod.id = expect_ident("product");
                expect_keyword("of");
                prod.config = expect_ident("configuration");
                expect_keyword("in");
                prod.env = expect_ident("environment");
                expect_keyword("manufacturer");
                prod.manufacturer = expect_ident("manufacturer");
                if (accept_keyword("params")) {
                    expect(Tok::LParen, "'('");
                    if (!check(Tok::RParen)) {
                        do {
                            std::string pname = expect_ident("parameter");
                            expect(Tok::Equals, "'='");
                            auto v = expect_number("value");
                            if (!pname.empty() && v) prod.params.emplace_back(pname, *v);
                        } while (accept(Tok::Comma));
                    }
                    expect(Tok::RParen, "')'");
                }
                expect(Tok::Semi, "';'");
                block.products.push_back(std::move(prod));
            } else if (accept_keyword("agent")) {
                AgentDecl agent;
                agent.pos = prev_pos_;
                expect_keyword("for");
                agent.product = expect_ident("product");
                expect_keyword("weber");
                if (auto v = expect_number("weber fraction")) agent.weber = *v;
                expect_keyword("window");
                if (auto v = expect_int("window")) agent.window = *v;
                while (accept_keyword("expect")) {
                    ExpectDecl e;
                    e.pos = prev_pos_;
                    if (accept_keyword("functional"))
                        e.functional = true;
                    else if (accept_keyword("env"))
                        e.functional = false;
                    else {
                        error("UNEXPECTED_TOKEN", "expected 'functional' or 'env'");
                        break;
                    }
                    e.subject = expect_ident(e.functional ? "parameter" : "event kind");
                    expect(Tok::LBracket, "'['");
                    if (auto v = expect_number("low bound")) e.low = *v;
                    expect(Tok::Comma, "','");
                    if (auto v = expect_number("high bound")) e.high = *v;
                    expect(Tok::RBracket, "']'");
                    agent.expects.push_back(std::move(e));
                }
                expect(Tok::Semi, "';'");
                block.agents.push_back(std::move(agent));
            } else if (accept_keyword("adapt")) {
                if (accept_keyword("on"))
                    block.adapt = true;
                else if (accept_keyword("off"))
                    block.adapt = false;
                else
                    error("UNEXPECTED_TOKEN", "expected 'on' or 'off'");
                expect(Tok::Semi, "';'");
            } else {
                error("UNEXPECTED_TOKEN",
                      "expected 'env', 'product', 'agent' or 'adapt', got " + describe(cur_));
                sync_to_semi();
            }
        }
        expect(Tok::RBrace, "'}'");
        file_.blocks.push_back(std::move(block));
    }

    Lexer lexer_;
    Token cur_;
    Pos prev_pos_;
    ParsedFile file_;
};

// Parses one source text. Never throws; problems land in the returned
// diagnostics.
inline ParsedFile parse(std::string_view text, std::string path = "<memory>") {
    Parser parser(text, std::move(path));
    return parser.run();
}

// --- serializer --------------------------------------------------------------

namespace ser {

inline std::string number(double v) { return sgn::detail::format_real(v); }

inline std::string term(const TermSyntax& t) {
    switch (t.kind) {
        case TermSyntax::Kind::Int: return sgn::detail::format_int(t.int_value);
        case TermSyntax::Kind::Real: return number(t.real_value);
        case TermSyntax::Kind::Str: return sgn::detail::quote_string(t.str_value);
        case TermSyntax::Kind::Ident: return t.name;
        case TermSyntax::Kind::Apply: {
            std::string out = t.name + "(";
            for (std::size_t i = 0; i < t.args.size(); ++i) {
                if (i) out += ", ";
                out += term(t.args[i]);
            }
            return out + ")";
        }
    }
    return "";
}

inline std::string pattern_atom(const PatternAtom& a) {
    switch (a.kind) {
        case PatternAtom::Kind::Wildcard: return "*";
        case PatternAtom::Kind::Variable: return a.variable;
        case PatternAtom::Kind::Ground: return to_text(a.term);
    }
    return "*";
}

inline void system(const SignSystem& sys, std::string& out) {
    out += "system " + sys.name + " {\n";
    for (const auto& s : sys.sorts) {
        if (s.kind == SortKind::Data) {
            out += "    data " + s.name + ";\n";
            continue;
        }
        out += "    sort " + s.name;
        if (s.boundary == Boundary::Product) out += " [product]";
        if (s.boundary == Boundary::Environment) out += " [env]";
        for (const auto& [lo, hi] : sys.subsort_edges)
            if (lo == s.name) out += " < " + hi;
        out += ";\n";
    }
    for (const auto& c : sys.constructors) {
        out += "    ctor " + c.name + "(";
        for (std::size_t i = 0; i < c.arg_sorts.size(); ++i) {
            if (i) out += ", ";
            out += c.arg_sorts[i];
        }
        out += ") -> " + c.result_sort + " @level " + sgn::detail::format_int(c.level);
        if (c.priority != 0) out += " @prio " + sgn::detail::format_int(c.priority);
        out += ";\n";
    }
    for (const auto& r : sys.relations) {
        out += "    rel " + r.name + "(";
        for (std::size_t i = 0; i < r.arg_sorts.size(); ++i) {
            if (i) out += ", ";
            out += r.arg_sorts[i];
        }
        out += ");\n";
    }
    for (const auto& a : sys.constraints) {
        out += "    axiom " + a.name + " : rank " + sgn::detail::format_int(a.rank) + " : ";
        switch (a.op) {
            case Constraint::Op::Forbid:
            case Constraint::Op::Require: {
                out += a.op == Constraint::Op::Forbid ? "forbid " : "require ";
                out += a.relation + "(";
                for (std::size_t i = 0; i < a.pattern.size(); ++i) {
                    if (i) out += ", ";
                    out += pattern_atom(a.pattern[i]);
                }
                out += ")";
                break;
            }
            case Constraint::Op::AtMost:
                out += "atmost " + a.relation + " " + sgn::detail::format_int(a.limit);
                break;
        }
        out += ";\n";
    }
    out += "}\n";
}

inline void morphism(const MorphismBlock& m, std::string& out) {
    out += "morphism " + m.name + " : " + m.source + " -> " + m.target + " {\n";
    for (const auto& e : m.entries) {
        switch (e.kind) {
            case MorphismMapEntry::Kind::Sort: out += "    sort "; break;
            case MorphismMapEntry::Kind::Ctor: out += "    ctor "; break;
            case MorphismMapEntry::Kind::Rel: out += "    rel "; break;
        }
        out += e.from + " -> " + e.to + ";\n";
    }
    out += "}\n";
}

inline void config(const ConfigBlock& c, std::string& out) {
    out += "config " + c.name + " of " + c.system + " {\n";
    for (const auto& e : c.entries) {
        if (e.kind == ConfigEntry::Kind::Term) {
            out += "    " + e.name + " = " + term(e.term) + ";\n";
        } else {
            out += "    " + e.name + "(";
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                out += e.args[i];
            }
            out += ");\n";
        }
    }
    out += "}\n";
}

inline void sequence(const SequenceBlock& s, std::string& out) {
    out += "sequence " + s.name + " {\n";
    for (const auto& comp : s.components) {
        out += "    component t " + sgn::detail::format_int(comp.t1) + " .. " +
               sgn::detail::format_int(comp.t2) + " {\n";
        out += "        from " + comp.from_config + ";\n";
        for (const auto& st : comp.steps) {
            switch (st.kind) {
                case StepSyntax::Kind::Vary:
                    out += "        vary depth " + sgn::detail::format_int(st.depth) + " budget " +
                           sgn::detail::format_int(st.budget) + ";\n";
                    break;
                case StepSyntax::Kind::Select:
                    out += st.minimal ? "        select min;\n" : "        select;\n";
                    break;
                case StepSyntax::Kind::Apply:
                    out += "        apply " + st.morphism + ";\n";
                    break;
            }
        }
        for (const auto& b : comp.branches)
            out += "        branch " + b.morphism + " p " + number(b.probability) + " -> " +
                   b.target + ";\n";
        out += "    }\n";
    }
    out += "}\n";
}

inline void scenario(const ScenarioBlock& sc, std::string& out) {
    out += "scenario " + sc.name + " {\n";
    for (const auto& env : sc.envs) {
        out += "    env " + env.id + " features [";
        for (std::size_t i = 0; i < env.features.size(); ++i) {
            if (i) out += ", ";
            out += number(env.features[i]);
        }
        out += "]";
        for (const auto& [k, v] : env.rates) out += " rate " + k + " " + number(v);
        out += ";\n";
    }
    for (const auto& p : sc.products) {
        out += "    product " + p.id + " of " + p.config + " in " + p.env + " manufacturer " +
               p.manufacturer;
        if (!p.params.empty()) {
            out += " params (";
            for (std::size_t i = 0; i < p.params.size(); ++i) {
                if (i) out += ", ";
                out += p.params[i].first + " = " + number(p.params[i].second);
            }
            out += ")";
        }
        out += ";\n";
    }
    for (const auto& a : sc.agents) {
        out += "    agent for " + a.product + " weber " + number(a.weber) + " window " +
               sgn::detail::format_int(a.window);
        for (const auto& e : a.expects) {
            out += e.functional ? " expect functional " : " expect env ";
            out += e.subject + " [" + number(e.low) + ", " + number(e.high) + "]";
        }
        out += ";\n";
    }
    if (sc.adapt) out += sc.adapt.value() ? "    adapt on;\n" : "    adapt off;\n";
    out += "}\n";
}

}  // namespace ser

inline std::string serialize_block(const Block& b) {
    std::string out;
    std::visit(
        [&](const auto& block) {
            using T = std::decay_t<decltype(block)>;
            if constexpr (std::is_same_v<T, SystemBlock>)
                ser::system(block.system, out);
            else if constexpr (std::is_same_v<T, MorphismBlock>)
                ser::morphism(block, out);
            else if constexpr (std::is_same_v<T, ConfigBlock>)
                ser::config(block, out);
            else if constexpr (std::is_same_v<T, SequenceBlock>)
                ser::sequence(block, out);
            else if constexpr (std::is_same_v<T, ScenarioBlock>)
                ser::scenario(block, out);
        },
        b);
    return out;
}

// Emits text that parses back to structurally equal blocks.
inline std::string serialize(const ParsedFile& file) {
    std::string out;
    for (const auto& imp : file.imports)
        out += "import " + sgn::detail::quote_string(imp.path) + ";\n";
    for (std::size_t i = 0; i < file.blocks.size(); ++i) {
        if (i || !file.imports.empty()) out += "\n";
        out += serialize_block(file.blocks[i]);
    }
    return out;
}

inline bool same_blocks(const ParsedFile& a, const ParsedFile& b) {
    return a.imports == b.imports && a.blocks == b.blocks;
}

}  // namespace sgn::dsl
