#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "elpin/normalize.hpp"

namespace elpin {

using AssertionId = int32_t;

/// Derived fact: Subs(A, B) for A <= B, or ExSubs(A, r, B) for
/// A <= (r some B). Deduplicated; ids are dense in derivation order.
struct Assertion {
    enum class Kind : uint8_t { Subs, ExSubs };
    Kind kind;
    ConceptId sub;
    RoleId role = -1;  // ExSubs only
    ConceptId sup;

    bool is_trivial() const {
        return kind == Kind::Subs && (sub == sup || sup == kTop);
    }
};

/// Completion rules. R0 seeds A <= A and A <= top; R1-R6 each combine one
/// normalized axiom with one or two existing assertions.
enum class Rule : uint8_t { R0, R1, R2, R3, R4, R5, R6 };

struct RuleApplication {
    Rule rule;
    AssertionId ant1 = -1;  // -1 when unused (R0 has no antecedents)
    AssertionId ant2 = -1;
    NormAxiomId axiom = -1;  // -1 for R0
    AssertionId consequent = -1;
};

/// Least fixpoint of the completion rules together with every distinct rule
/// application encountered, including rederivations of known assertions.
struct ClosureTrace {
    const NormalizedTBox* tbox = nullptr;
    std::vector<Assertion> assertions;
    std::vector<RuleApplication> applications;
    /// Normalized axiom id -> assertion id for NF1/NF3 axioms; -1 otherwise.
    std::vector<AssertionId> axiom_assertion;

    std::optional<AssertionId> find_subs(ConceptId sub, ConceptId sup) const;
    std::optional<AssertionId> find_exsubs(ConceptId sub, RoleId r, ConceptId sup) const;

    // Internal lookup tables (exposed for reuse by the encoder).
    std::unordered_map<uint64_t, AssertionId> subs_ids;
    std::unordered_map<uint64_t, AssertionId> exsubs_ids;
};

ClosureTrace classify(const NormalizedTBox& t);

/// True iff sub <= sup follows from the classified TBox. Reflexive and
/// top-bounded subsumptions hold unconditionally.
bool holds(const ClosureTrace& c, ConceptId sub, ConceptId sup);

}  // namespace elpin
