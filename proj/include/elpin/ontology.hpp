#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace elpin {

using ConceptId = int32_t;
using RoleId = int32_t;
using AxiomId = int32_t;

/// Concept id reserved for the top concept.
inline constexpr ConceptId kTop = 0;

class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line, int col)
        : std::runtime_error(std::move(msg)), line(line), col(col) {}
    int line;
    int col;
};

/// Interned concept and role names. Ids are dense and follow first
/// occurrence order in the source text; concept id 0 is always "top".
class SymbolTable {
public:
    SymbolTable() { intern_concept("top"); }

    ConceptId intern_concept(std::string_view name);
    RoleId intern_role(std::string_view name);

    std::optional<ConceptId> find_concept(std::string_view name) const;
    std::optional<RoleId> find_role(std::string_view name) const;

    const std::string& concept_name(ConceptId id) const { return concepts_.at(id); }
    const std::string& role_name(RoleId id) const { return roles_.at(id); }

    int32_t concept_count() const { return static_cast<int32_t>(concepts_.size()); }
    int32_t role_count() const { return static_cast<int32_t>(roles_.size()); }

    bool has_name(std::string_view name) const {
        return concept_ids_.count(std::string(name)) != 0 ||
               role_ids_.count(std::string(name)) != 0;
    }

private:
    std::vector<std::string> concepts_;
    std::vector<std::string> roles_;
    std::unordered_map<std::string, ConceptId> concept_ids_;
    std::unordered_map<std::string, RoleId> role_ids_;
};

struct ConceptExpr;
using ConceptRef = std::shared_ptr<const ConceptExpr>;

/// Concept description tree: top | name | binary conjunction | existential
/// restriction. Parsed n-ary "and" is right-nested.
struct ConceptExpr {
    enum class Kind : uint8_t { Top, Name, Conj, Exists };

    Kind kind;
    ConceptId name = -1;  // Name
    RoleId role = -1;     // Exists
    ConceptRef left;      // Conj
    ConceptRef right;     // Conj right operand / Exists filler

    static ConceptRef top();
    static ConceptRef make_name(ConceptId id);
    static ConceptRef conj(ConceptRef l, ConceptRef r);
    static ConceptRef exists(RoleId r, ConceptRef filler);
};

bool struct_eq(const ConceptExpr& a, const ConceptExpr& b);

struct SourceAxiom {
    enum class Kind : uint8_t { Gci, Equiv, RoleInc };

    AxiomId id = -1;
    Kind kind = Kind::Gci;
    ConceptRef lhs, rhs;        // Gci / Equiv
    std::vector<RoleId> chain;  // RoleInc, length >= 1
    RoleId super = -1;          // RoleInc
    int line = 0, col = 0;
};

struct Ontology {
    SymbolTable symbols;
    std::vector<SourceAxiom> axioms;
};

/// Parses the line-oriented ontology text format ('#' comments, statements
/// "C <= D", "C == D", "r o s <= t"). Throws ParseError with position info.
Ontology parse_ontology(std::string_view text);

/// Parses a subsumption query "NAME <= NAME" against existing symbols.
std::pair<ConceptId, ConceptId> parse_query(std::string_view text, const SymbolTable& symbols);

std::string render_concept(const ConceptExpr& e, const SymbolTable& symbols);

/// Canonical text form of an axiom; reparsing the rendered ontology yields
/// structurally equal axioms.
std::string render_axiom(const Ontology& o, AxiomId id);

}  // namespace elpin
