#pragma once

#include <span>
#include <string>
#include <vector>

#include "elpin/ontology.hpp"

namespace elpin {

using NormAxiomId = int32_t;

enum class NormalForm : uint8_t {
    NF1,  // A <= B
    NF2,  // A1 and A2 <= B
    NF3,  // A <= (r some B)
    NF4,  // (r some A) <= B
    NF5,  // r <= s
    NF6,  // r1 o r2 <= s
};

/// Axiom in normal form; every concept operand is a name (possibly top or a
/// fresh name), role chains have length at most 2.
struct NormalAxiom {
    NormAxiomId id = -1;
    NormalForm form;
    ConceptId sub = -1;       // NF1-NF4 left operand (NF4: the filler)
    ConceptId sub2 = -1;      // NF2 second conjunct
    ConceptId sup = -1;       // NF1-NF4 right operand
    RoleId role = -1;         // NF3/NF4 restriction role; NF5/NF6 first chain role
    RoleId role2 = -1;        // NF6 second chain role
    RoleId super_role = -1;   // NF5/NF6 right side

    bool is_role_inclusion() const {
        return form == NormalForm::NF5 || form == NormalForm::NF6;
    }
    /// Tautological GCIs (A <= A, A <= top) take no part in pinpointing.
    bool is_trivial() const {
        return form == NormalForm::NF1 && (sub == sup || sup == kTop);
    }
};

struct NormalizedTBox {
    SymbolTable symbols;  // source symbols plus fresh names
    std::vector<NormalAxiom> axioms;
    std::vector<std::vector<AxiomId>> origin;  // normalized id -> sorted source ids
    std::vector<ConceptId> fresh_concepts;
    std::vector<RoleId> fresh_roles;
};

/// Linear-time rewriting into NF1-NF6. Equivalences are split into two GCIs
/// first; fresh concepts are named _N0, _N1, ... and fresh roles _r0, _r1, ...
/// in a single left-to-right pass.
NormalizedTBox normalize(const Ontology& o);

/// Union of the origin sets of the given normalized axioms, sorted.
std::vector<AxiomId> explain_origin(const NormalizedTBox& t, std::span<const NormAxiomId> ids);

std::string render_normal_axiom(const NormalizedTBox& t, NormAxiomId id);

}  // namespace elpin
