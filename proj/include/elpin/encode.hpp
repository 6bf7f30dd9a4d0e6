#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "elpin/classify.hpp"
#include "elpin/satcore.hpp"

namespace elpin {

/// Raised when a pinpointing instance is requested for a subsumption the
/// classification never derived; by the encoding's if-and-only-if property
/// such a query has no justification at all.
class QueryNotEntailed : public std::runtime_error {
public:
    explicit QueryNotEntailed(std::string msg) : std::runtime_error(std::move(msg)) {}
};

struct SelectorVar {
    enum class Binds : uint8_t { ConstTrue, Axiom, Derived };
    Binds binds;
    int32_t target = -1;  // normalized axiom id or assertion id
};

/// Definite Horn clause over selector variables: body -> head. head == 0
/// encodes the empty head (used only by instance-level query clauses).
struct HornClause {
    int32_t head;
    uint32_t body_begin;
    uint32_t body_len;
};

/// The pinpointing formula: one clause per recorded rule application, with
/// selector variables for axioms (assigned first, in normalized order) and
/// derived assertions (in first-derivation order). Selectors of NF1/NF3
/// axioms are unified with the selectors of their own assertions. Constant
/// true selectors of trivial axioms and assertions are simplified away.
struct PinpointFormula {
    const ClosureTrace* trace = nullptr;
    int32_t var_count = 0;
    std::vector<SelectorVar> selectors;        // index: var - 1
    std::vector<int32_t> axiom_selector;       // normalized axiom id -> var (0 = const true)
    std::vector<int32_t> assertion_selector;   // assertion id -> var (0 = const true)
    std::vector<HornClause> clauses;
    std::vector<int32_t> body_pool;

    std::span<const int32_t> body(const HornClause& c) const {
        return {body_pool.data() + c.body_begin, c.body_len};
    }
};

PinpointFormula build_pinpoint_formula(const ClosureTrace& c);

/// Partial-MaxSAT instance for one query: hard clauses are the formula
/// clauses plus the negated query selector, soft clauses are positive units
/// over the axiom selectors.
struct PinpointInstance {
    const PinpointFormula* formula = nullptr;
    std::vector<int32_t> hard_clauses;  // indices into formula->clauses
    std::vector<NormAxiomId> soft;      // axiom ids carrying soft units
    AssertionId query_assertion = -1;
    /// Selector of the query assertion; 0 for a trivially true query (the
    /// negated unit degenerates to the empty clause), -1 for no query clause.
    int32_t query_var = -1;
    int32_t var_count = 0;
    bool reduced = false;
};

PinpointInstance build_instance(const PinpointFormula& f, ConceptId sub, ConceptId sup);

/// Cone-of-influence restriction: keeps exactly the clauses and selectors
/// backward-reachable from the query selector through clause bodies. The
/// justification and correction sets are unchanged by the reduction.
PinpointInstance coi_reduce(const PinpointInstance& inst);

/// Classic weighted CNF text ("p wcnf <vars> <clauses> <top>"), hard clauses
/// at weight top = |soft| + 1, soft units at weight 1, with "c s<i> := ..."
/// comment lines mapping every selector.
std::string emit_wcnf(const PinpointInstance& inst);

/// Solver over the formula clauses only (no query clause).
sat::Solver formula_solver(const PinpointFormula& f);

/// Solver over the instance's hard clauses, query clause included.
sat::Solver instance_solver(const PinpointInstance& inst);

/// Text form of an assertion in the axiom grammar ("A <= B" or
/// "A <= (r some B)").
std::string render_assertion(const ClosureTrace& c, AssertionId id);

}  // namespace elpin
