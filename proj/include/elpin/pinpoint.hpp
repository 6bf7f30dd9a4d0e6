#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "elpin/encode.hpp"

namespace elpin {

class InstanceSatisfiable : public std::runtime_error {
public:
    explicit InstanceSatisfiable(std::string msg) : std::runtime_error(std::move(msg)) {}
};

/// Minimal correction subset: dropping exactly these soft axiom units makes
/// the instance satisfiable; dropping any proper subset does not.
struct Mcs {
    std::vector<NormAxiomId> axioms;  // sorted
};

/// Minimal axiom set: the instance restricted to exactly these soft units is
/// unsatisfiable and every proper subset is satisfiable.
struct Mina {
    std::vector<NormAxiomId> axioms;  // sorted
};

/// Limits checked between solver calls; zero means unlimited. Exceeding any
/// limit stops enumeration with complete = false and partial results.
struct Budget {
    double max_seconds = 0;
    uint64_t max_solver_calls = 0;
    int32_t max_mcses = 0;
};

struct EnumStats {
    uint64_t solver_calls = 0;
    uint64_t propagations = 0;
    double wall_seconds = 0;
};

struct EnumerationReport {
    std::vector<Mina> minas;  // lexicographic by sorted axiom ids
    std::vector<Mcs> mcses;   // discovery order
    bool complete = false;    // true iff no further MCS can exist
    EnumStats stats;
};

/// Deletion-based extraction of a single justification. Requires the
/// instance to be unsatisfiable under all soft units.
Mina extract_one_mina(const PinpointInstance& inst);

/// Enumerates correction sets by linear-search growing of satisfiable soft
/// subsets, blocking each found set with an all-positive clause. Terminates
/// (complete = true) when the hard clauses plus blocking clauses are
/// unsatisfiable with every soft unit dropped.
std::pair<std::vector<Mcs>, bool> enumerate_mcses(const PinpointInstance& inst,
                                                  const Budget& budget = {});

/// All inclusion-minimal hitting sets of the given family, in lexicographic
/// order. The empty family yields the single empty set.
std::vector<Mina> minimal_hitting_sets(std::span<const Mcs> mcses);

/// Full pipeline: enumerate correction sets, dualize to justifications via
/// minimal hitting sets, verify each before emission.
EnumerationReport enumerate_minas(const PinpointInstance& inst, const Budget& budget = {});

/// |m| + 1 solver calls: unsatisfiable with exactly m, satisfiable after
/// removing any single element.
bool verify_mina(const PinpointInstance& inst, const Mina& m);

/// Test oracle: re-classifies every subset of the non-trivial axioms and
/// keeps the inclusion-minimal entailing ones. Guarded to at most 20
/// non-trivial axioms.
std::vector<Mina> brute_force_minas(const NormalizedTBox& t, ConceptId sub, ConceptId sup);

/// End-to-end handling of one query including the degenerate cases.
struct QueryResult {
    enum class Kind : uint8_t { Trivial, NotEntailed, Pinpointed };
    Kind kind;
    EnumerationReport report;
};

QueryResult pinpoint_query(const ClosureTrace& trace, const PinpointFormula& formula,
                           ConceptId sub, ConceptId sup, bool use_coi = true,
                           const Budget& budget = {});

}  // namespace elpin
