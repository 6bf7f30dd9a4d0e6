#include "elpin/ontology.hpp"

#include <cassert>
#include <cctype>
#include <sstream>
#include <unordered_set>

namespace elpin {

ConceptId SymbolTable::intern_concept(std::string_view name) {
    auto it = concept_ids_.find(std::string(name));
    if (it != concept_ids_.end()) return it->second;
    ConceptId id = static_cast<ConceptId>(concepts_.size());
    concepts_.emplace_back(name);
    concept_ids_.emplace(std::string(name), id);
    return id;
}

RoleId SymbolTable::intern_role(std::string_view name) {
    auto it = role_ids_.find(std::string(name));
    if (it != role_ids_.end()) return it->second;
    RoleId id = static_cast<RoleId>(roles_.size());
    roles_.emplace_back(name);
    role_ids_.emplace(std::string(name), id);
    return id;
}

std::optional<ConceptId> SymbolTable::find_concept(std::string_view name) const {
    auto it = concept_ids_.find(std::string(name));
    if (it == concept_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<RoleId> SymbolTable::find_role(std::string_view name) const {
    auto it = role_ids_.find(std::string(name));
    if (it == role_ids_.end()) return std::nullopt;
    return it->second;
}

ConceptRef ConceptExpr::top() {
    auto e = std::make_shared<ConceptExpr>();
    e->kind = Kind::Top;
    e->name = kTop;
    return e;
}

ConceptRef ConceptExpr::make_name(ConceptId id) {
    if (id == kTop) return top();
    auto e = std::make_shared<ConceptExpr>();
    e->kind = Kind::Name;
    e->name = id;
    return e;
}

ConceptRef ConceptExpr::conj(ConceptRef l, ConceptRef r) {
    auto e = std::make_shared<ConceptExpr>();
    e->kind = Kind::Conj;
    e->left = std::move(l);
    e->right = std::move(r);
    return e;
}

ConceptRef ConceptExpr::exists(RoleId role, ConceptRef filler) {
    auto e = std::make_shared<ConceptExpr>();
    e->kind = Kind::Exists;
    e->role = role;
    e->right = std::move(filler);
    return e;
}

bool struct_eq(const ConceptExpr& a, const ConceptExpr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ConceptExpr::Kind::Top: return true;
        case ConceptExpr::Kind::Name: return a.name == b.name;
        case ConceptExpr::Kind::Conj:
            return struct_eq(*a.left, *b.left) && struct_eq(*a.right, *b.right);
        case ConceptExpr::Kind::Exists:
            return a.role == b.role && struct_eq(*a.right, *b.right);
    }
    return false;
}

namespace {

enum class Tok : uint8_t { Name, Subsumes, Equiv, LParen, RParen, KwTop, KwAnd, KwSome, KwChain, End };

struct Token {
    Tok kind;
    std::string_view text;
    int line, col;
};

const char* tok_desc(Tok t) {
    switch (t) {
        case Tok::Name: return "name";
        case Tok::Subsumes: return "'<='";
        case Tok::Equiv: return "'=='";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::KwTop: return "'top'";
        case Tok::KwAnd: return "'and'";
        case Tok::KwSome: return "'some'";
        case Tok::KwChain: return "'o'";
        case Tok::End: return "end of input";
    }
    return "?";
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }

    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_ws();
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= src_.size()) {
            cur_.kind = Tok::End;
            cur_.text = {};
            return;
        }
        char c = src_[pos_];
        if (c == '(') { cur_ = {Tok::LParen, take(1), line_, col_}; return; }
        if (c == ')') { cur_ = {Tok::RParen, take(1), line_, col_}; return; }
        if (c == '<') {
            if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                cur_ = {Tok::Subsumes, take(2), line_, col_};
                return;
            }
            throw ParseError("unexpected '<', expected '<='", line_, col_);
        }
        if (c == '=') {
            if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                cur_ = {Tok::Equiv, take(2), line_, col_};
                return;
            }
            throw ParseError("unexpected '=', expected '=='", line_, col_);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            std::string_view word = src_.substr(start, pos_ - start);
            int col0 = col_;
            col_ += static_cast<int>(word.size());
            Tok k = Tok::Name;
            if (word == "top") k = Tok::KwTop;
            else if (word == "and") k = Tok::KwAnd;
            else if (word == "some") k = Tok::KwSome;
            else if (word == "o") k = Tok::KwChain;
            cur_ = {k, word, line_, col0};
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }

    std::string_view take(size_t n) {
        std::string_view s = src_.substr(pos_, n);
        pos_ += n;
        col_ += static_cast<int>(n);
        return s;
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++pos_;
                ++line_;
                col_ = 1;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                ++col_;
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_{Tok::End, {}, 1, 1};
};

// Unresolved statement pieces: names are kept as text until the statement
// kind (GCI vs role inclusion) is settled.
struct RawExpr {
    ConceptExpr::Kind kind;
    std::string_view name;  // Name
    std::string_view role;  // Exists
    std::unique_ptr<RawExpr> left, right;
    int line = 0, col = 0;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    Ontology parse() {
        Ontology o;
        while (lex_.peek().kind != Tok::End) statement(o);
        return o;
    }

private:
    [[noreturn]] void fail(const Token& t, const std::string& expected) {
        std::ostringstream msg;
        msg << "expected " << expected << ", found " << tok_desc(t.kind);
        if (t.kind == Tok::Name) msg << " '" << t.text << "'";
        throw ParseError(msg.str(), t.line, t.col);
    }

    Token expect(Tok k, const char* what) {
        if (lex_.peek().kind != k) fail(lex_.peek(), what);
        return lex_.next();
    }

    void statement(Ontology& o) {
        Token first = lex_.peek();

        // A statement starting with NAME followed by 'o' is a role chain.
        if (first.kind == Tok::Name) {
            Token name = lex_.next();
            if (lex_.peek().kind == Tok::KwChain) {
                role_inclusion(o, name);
                return;
            }
            concept_statement(o, std::move(name));
            return;
        }
        concept_statement(o, std::nullopt);
    }

    void role_inclusion(Ontology& o, const Token& first) {
        std::vector<Token> chain{first};
        while (lex_.peek().kind == Tok::KwChain) {
            lex_.next();
            chain.push_back(expect(Tok::Name, "role name"));
        }
        expect(Tok::Subsumes, "'<='");
        Token super = expect(Tok::Name, "role name");

        SourceAxiom ax;
        ax.id = static_cast<AxiomId>(o.axioms.size());
        ax.kind = SourceAxiom::Kind::RoleInc;
        ax.line = first.line;
        ax.col = first.col;
        for (const Token& t : chain) ax.chain.push_back(resolve_role(o, t));
        ax.super = resolve_role(o, super);
        o.axioms.push_back(std::move(ax));
    }

    // GCI / equivalence, or a 1-chain role inclusion when both sides are
    // single names already known to be roles.
    void concept_statement(Ontology& o, std::optional<Token> lead) {
        std::unique_ptr<RawExpr> lhs = concept_expr(lead ? &*lead : nullptr);
        Token op = lex_.peek();
        if (op.kind != Tok::Subsumes && op.kind != Tok::Equiv) fail(op, "'<=' or '=='");
        lex_.next();
        std::unique_ptr<RawExpr> rhs = concept_expr(nullptr);

        SourceAxiom ax;
        ax.id = static_cast<AxiomId>(o.axioms.size());
        ax.line = lhs->line;
        ax.col = lhs->col;

        if (op.kind == Tok::Subsumes && is_bare_name(*lhs) && is_bare_name(*rhs) &&
            role_seen_.count(std::string(lhs->name)) && role_seen_.count(std::string(rhs->name))) {
            ax.kind = SourceAxiom::Kind::RoleInc;
            ax.chain.push_back(*o.symbols.find_role(lhs->name));
            ax.super = *o.symbols.find_role(rhs->name);
            o.axioms.push_back(std::move(ax));
            return;
        }

        ax.kind = op.kind == Tok::Equiv ? SourceAxiom::Kind::Equiv : SourceAxiom::Kind::Gci;
        ax.lhs = resolve_concept(o, *lhs);
        ax.rhs = resolve_concept(o, *rhs);
        o.axioms.push_back(std::move(ax));
    }

    static bool is_bare_name(const RawExpr& e) { return e.kind == ConceptExpr::Kind::Name; }

    std::unique_ptr<RawExpr> concept_expr(const Token* lead) {
        std::unique_ptr<RawExpr> first = term(lead);
        if (lex_.peek().kind != Tok::KwAnd) return first;
        lex_.next();
        std::unique_ptr<RawExpr> rest = concept_expr(nullptr);  // right-nested
        auto e = std::make_unique<RawExpr>();
        e->kind = ConceptExpr::Kind::Conj;
        e->line = first->line;
        e->col = first->col;
        e->left = std::move(first);
        e->right = std::move(rest);
        return e;
    }

    std::unique_ptr<RawExpr> term(const Token* lead) {
        Token t = lead ? *lead : lex_.peek();
        if (!lead) {
            if (t.kind == Tok::KwTop) {
                lex_.next();
                auto e = std::make_unique<RawExpr>();
                e->kind = ConceptExpr::Kind::Top;
                e->line = t.line;
                e->col = t.col;
                return e;
            }
            if (t.kind == Tok::LParen) {
                lex_.next();
                // "(r some C)" or a parenthesized concept.
                if (lex_.peek().kind == Tok::Name) {
                    Token name = lex_.next();
                    if (lex_.peek().kind == Tok::KwSome) {
                        lex_.next();
                        std::unique_ptr<RawExpr> filler = concept_expr(nullptr);
                        expect(Tok::RParen, "')'");
                        auto e = std::make_unique<RawExpr>();
                        e->kind = ConceptExpr::Kind::Exists;
                        e->role = name.text;
                        e->line = name.line;
                        e->col = name.col;
                        e->right = std::move(filler);
                        return e;
                    }
                    std::unique_ptr<RawExpr> inner = concept_expr(&name);
                    expect(Tok::RParen, "')'");
                    return inner;
                }
                std::unique_ptr<RawExpr> inner = concept_expr(nullptr);
                expect(Tok::RParen, "')'");
                return inner;
            }
            if (t.kind != Tok::Name) fail(t, "concept term");
            lex_.next();
        }
        auto e = std::make_unique<RawExpr>();
        e->kind = ConceptExpr::Kind::Name;
        e->name = t.text;
        e->line = t.line;
        e->col = t.col;
        return e;
    }

    RoleId resolve_role(Ontology& o, const Token& t) {
        std::string key(t.text);
        if (concept_seen_.count(key)) {
            throw ParseError("name '" + key + "' already used as a concept", t.line, t.col);
        }
        role_seen_.insert(key);
        return o.symbols.intern_role(t.text);
    }

    RoleId resolve_role_name(Ontology& o, std::string_view name, int line, int col) {
        Token t{Tok::Name, name, line, col};
        return resolve_role(o, t);
    }

    ConceptId resolve_concept_name(Ontology& o, std::string_view name, int line, int col) {
        std::string key(name);
        if (role_seen_.count(key)) {
            throw ParseError("name '" + key + "' already used as a role", line, col);
        }
        concept_seen_.insert(key);
        return o.symbols.intern_concept(name);
    }

    ConceptRef resolve_concept(Ontology& o, const RawExpr& e) {
        switch (e.kind) {
            case ConceptExpr::Kind::Top:
                return ConceptExpr::top();
            case ConceptExpr::Kind::Name:
                return ConceptExpr::make_name(resolve_concept_name(o, e.name, e.line, e.col));
            case ConceptExpr::Kind::Conj: {
                ConceptRef l = resolve_concept(o, *e.left);
                ConceptRef r = resolve_concept(o, *e.right);
                return ConceptExpr::conj(std::move(l), std::move(r));
            }
            case ConceptExpr::Kind::Exists: {
                RoleId r = resolve_role_name(o, e.role, e.line, e.col);
                return ConceptExpr::exists(r, resolve_concept(o, *e.right));
            }
        }
        throw std::logic_error("bad expr kind");
    }

    Lexer lex_;
    std::unordered_set<std::string> concept_seen_;
    std::unordered_set<std::string> role_seen_;
};

}  // namespace

Ontology parse_ontology(std::string_view text) {
    Parser p(text);
    return p.parse();
}

std::pair<ConceptId, ConceptId> parse_query(std::string_view text, const SymbolTable& symbols) {
    Lexer lex(text);
    auto concept_operand = [&](const Token& t) -> ConceptId {
        if (t.kind == Tok::KwTop) return kTop;
        if (t.kind != Tok::Name) {
            throw ParseError("query must be of the form NAME <= NAME", t.line, t.col);
        }
        auto id = symbols.find_concept(t.text);
        if (!id) {
            throw ParseError("unknown concept name '" + std::string(t.text) + "'", t.line, t.col);
        }
        return *id;
    };
    Token sub = lex.next();
    ConceptId sub_id = concept_operand(sub);
    Token op = lex.next();
    if (op.kind != Tok::Subsumes) throw ParseError("expected '<=' in query", op.line, op.col);
    Token sup = lex.next();
    ConceptId sup_id = concept_operand(sup);
    Token end = lex.next();
    if (end.kind != Tok::End) {
        throw ParseError("query uses a complex expression; only NAME <= NAME is supported",
                         end.line, end.col);
    }
    return {sub_id, sup_id};
}

namespace {

// A conjunction in left position needs parentheses to survive the
// right-nested reparse; everything else is self-delimiting.
void render_term(const ConceptExpr& e, const SymbolTable& sy, std::string& out);

void render_rec(const ConceptExpr& e, const SymbolTable& sy, std::string& out) {
    if (e.kind == ConceptExpr::Kind::Conj) {
        render_term(*e.left, sy, out);
        out += " and ";
        render_rec(*e.right, sy, out);
    } else {
        render_term(e, sy, out);
    }
}

void render_term(const ConceptExpr& e, const SymbolTable& sy, std::string& out) {
    switch (e.kind) {
        case ConceptExpr::Kind::Top:
            out += "top";
            break;
        case ConceptExpr::Kind::Name:
            out += sy.concept_name(e.name);
            break;
        case ConceptExpr::Kind::Exists:
            out += '(';
            out += sy.role_name(e.role);
            out += " some ";
            render_rec(*e.right, sy, out);
            out += ')';
            break;
        case ConceptExpr::Kind::Conj:
            out += '(';
            render_rec(e, sy, out);
            out += ')';
            break;
    }
}

}  // namespace

std::string render_concept(const ConceptExpr& e, const SymbolTable& symbols) {
    std::string out;
    render_rec(e, symbols, out);
    return out;
}

std::string render_axiom(const Ontology& o, AxiomId id) {
    if (id < 0 || id >= static_cast<AxiomId>(o.axioms.size())) {
        throw std::out_of_range("axiom id out of range");
    }
    const SourceAxiom& ax = o.axioms[id];
    std::string out;
    switch (ax.kind) {
        case SourceAxiom::Kind::Gci:
        case SourceAxiom::Kind::Equiv:
            render_rec(*ax.lhs, o.symbols, out);
            out += ax.kind == SourceAxiom::Kind::Gci ? " <= " : " == ";
            render_rec(*ax.rhs, o.symbols, out);
            break;
        case SourceAxiom::Kind::RoleInc:
            for (size_t i = 0; i < ax.chain.size(); ++i) {
                if (i) out += " o ";
                out += o.symbols.role_name(ax.chain[i]);
            }
            out += " <= ";
            out += o.symbols.role_name(ax.super);
            break;
    }
    return out;
}

}  // namespace elpin
