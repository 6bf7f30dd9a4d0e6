#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace elpin::sat {

/// Literal over variable 1..var_count. Encoded as 2*var for the positive
/// literal and 2*var+1 for the negative one.
struct Lit {
    int32_t code = 0;

    friend bool operator==(Lit a, Lit b) { return a.code == b.code; }
    friend bool operator!=(Lit a, Lit b) { return a.code != b.code; }
    friend bool operator<(Lit a, Lit b) { return a.code < b.code; }
};

inline Lit mk_lit(int32_t var, bool positive = true) {
    return Lit{(var << 1) | (positive ? 0 : 1)};
}
inline Lit neg(Lit l) { return Lit{l.code ^ 1}; }
inline int32_t var_of(Lit l) { return l.code >> 1; }
inline bool is_pos(Lit l) { return (l.code & 1) == 0; }

enum class Status : uint8_t { Sat, Unsat };

struct SolveResult {
    Status status;
    /// Indexed by variable (1..var_count); valid when status == Sat.
    std::vector<uint8_t> model;
    /// Subset of the assumptions sufficient for unsatisfiability (not
    /// necessarily minimal); valid when status == Unsat.
    std::vector<Lit> core;

    bool is_sat() const { return status == Status::Sat; }
};

struct SolverStats {
    uint64_t solves = 0;
    uint64_t propagations = 0;
    uint64_t decisions = 0;
    uint64_t conflicts = 0;
    /// Conflicts hit after at least one non-assumption decision; stays 0 on
    /// Horn inputs, where propagation alone decides the instance.
    uint64_t search_conflicts = 0;
};

/// Conflict-driven solver with assumption literals. Branching is fixed
/// (lowest-index variable first, negative polarity) and there are no
/// restarts, so runs are deterministic given identical clause insertion
/// order and assumptions.
class Solver {
public:
    explicit Solver(int32_t var_count);

    int32_t var_count() const { return nvars_; }

    /// Clauses may be added between solves; the empty clause makes the
    /// instance trivially unsatisfiable. Throws std::out_of_range on a
    /// literal outside 1..var_count.
    void add_clause(std::span<const Lit> lits);
    void add_clause(std::initializer_list<Lit> lits) {
        add_clause(std::span<const Lit>(lits.begin(), lits.size()));
    }

    SolveResult solve_under(std::span<const Lit> assumptions = {});

    const SolverStats& stats() const { return stats_; }

    /// Problem clauses (learnt clauses excluded) in DIMACS CNF, for debugging.
    std::string to_dimacs() const;

private:
    using CRef = int32_t;
    static constexpr CRef kNoClause = -1;

    struct Watch {
        CRef cref;
        Lit blocker;
    };

    // Clause storage: [size, lit0, lit1, ...] runs in one flat arena.
    int32_t clause_size(CRef c) const { return arena_[c].code; }
    const Lit* clause_lits(CRef c) const { return &arena_[c + 1]; }
    Lit* clause_lits(CRef c) { return &arena_[c + 1]; }

    // -1 unassigned, 0 false, 1 true
    int8_t value(Lit l) const {
        int8_t v = assigns_[var_of(l)];
        return v < 0 ? v : static_cast<int8_t>(v ^ (l.code & 1));
    }

    int32_t decision_level() const { return static_cast<int32_t>(trail_lim_.size()); }

    CRef store_clause(std::span<const Lit> lits, bool learnt);
    void attach(CRef c);
    void unchecked_enqueue(Lit p, CRef reason);
    CRef propagate();
    void cancel_until(int32_t level);
    void analyze(CRef confl, std::vector<Lit>& learnt, int32_t& bt_level);
    std::vector<Lit> analyze_final(Lit failed);
    void check_lit(Lit l) const;

    int32_t nvars_;
    bool ok_ = true;
    std::vector<Lit> arena_;
    std::vector<CRef> clauses_;
    std::vector<CRef> learnts_;
    std::vector<std::vector<Watch>> watches_;  // indexed by literal code
    std::vector<int8_t> assigns_;              // indexed by var
    std::vector<int32_t> levels_;              // indexed by var
    std::vector<CRef> reasons_;                // indexed by var
    std::vector<uint8_t> seen_;                // analyze scratch
    std::vector<Lit> trail_;
    std::vector<int32_t> trail_lim_;
    size_t qhead_ = 0;
    int32_t decision_cursor_ = 1;  // lowest possibly-unassigned variable
    SolverStats stats_;
};

}  // namespace elpin::sat
