#include "elpin/pinpoint.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>

namespace elpin {

namespace {

using Clock = std::chrono::steady_clock;

struct BudgetGuard {
    explicit BudgetGuard(const Budget& b)
        : budget(b), start(Clock::now()) {}

    bool exhausted(uint64_t solver_calls) const {
        if (budget.max_solver_calls && solver_calls >= budget.max_solver_calls) return true;
        if (budget.max_seconds > 0 && elapsed() >= budget.max_seconds) return true;
        return false;
    }

    double elapsed() const {
        return std::chrono::duration<double>(Clock::now() - start).count();
    }

    const Budget& budget;
    Clock::time_point start;
};

std::vector<sat::Lit> axiom_lits(const PinpointFormula& f, std::span<const NormAxiomId> axioms) {
    std::vector<sat::Lit> lits;
    lits.reserve(axioms.size());
    for (NormAxiomId ax : axioms) lits.push_back(sat::mk_lit(f.axiom_selector[ax], true));
    return lits;
}

std::vector<NormAxiomId> core_axioms(const PinpointFormula& f, std::span<const sat::Lit> core) {
    std::vector<NormAxiomId> out;
    for (sat::Lit l : core) {
        if (!sat::is_pos(l)) continue;  // the core may include the negated query
        const SelectorVar& s = f.selectors[sat::var_of(l) - 1];
        if (s.binds == SelectorVar::Binds::Axiom) out.push_back(s.target);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void absorb(EnumStats* acc, const sat::Solver& s) {
    if (!acc) return;
    acc->solver_calls += s.stats().solves;
    acc->propagations += s.stats().propagations;
}

std::pair<std::vector<Mcs>, bool> enumerate_mcses_impl(const PinpointInstance& inst,
                                                       const Budget& budget, EnumStats* acc) {
    const PinpointFormula& f = *inst.formula;
    sat::Solver solver = instance_solver(inst);
    BudgetGuard guard(budget);
    std::vector<Mcs> mcses;
    bool complete = false;

    std::vector<uint8_t> in_mss(inst.soft.size(), 0);
    auto mss_lits = [&](size_t extra) {
        std::vector<sat::Lit> lits;
        for (size_t k = 0; k < inst.soft.size(); ++k) {
            if (in_mss[k] || k == extra) {
                lits.push_back(sat::mk_lit(f.axiom_selector[inst.soft[k]], true));
            }
        }
        return lits;
    };

    for (;;) {
        if (guard.exhausted(solver.stats().solves)) break;
        sat::SolveResult r = solver.solve_under();
        if (!r.is_sat()) {
            complete = true;
            break;
        }

        // Grow the satisfied soft units of the model into a maximal
        // satisfiable subset; blocking clauses of earlier correction sets
        // never exclude extensions of a still-unfound one.
        for (size_t k = 0; k < inst.soft.size(); ++k) {
            in_mss[k] = r.model[f.axiom_selector[inst.soft[k]]];
        }
        bool budget_hit = false;
        for (size_t k = 0; k < inst.soft.size(); ++k) {
            if (in_mss[k]) continue;
            if (guard.exhausted(solver.stats().solves)) {
                budget_hit = true;
                break;
            }
            if (solver.solve_under(mss_lits(k)).is_sat()) in_mss[k] = 1;
        }
        if (budget_hit) break;

        std::vector<NormAxiomId> mcs;
        for (size_t k = 0; k < inst.soft.size(); ++k) {
            if (!in_mss[k]) mcs.push_back(inst.soft[k]);
        }
        if (mcs.empty()) {
            // All soft units fit: the instance is satisfiable and nothing
            // needs correcting.
            complete = true;
            break;
        }
        std::vector<sat::Lit> block = axiom_lits(f, mcs);
        mcses.push_back(Mcs{std::move(mcs)});
        if (budget.max_mcses && static_cast<int32_t>(mcses.size()) >= budget.max_mcses) break;
        solver.add_clause(block);
    }
    absorb(acc, solver);
    return {std::move(mcses), complete};
}

bool verify_mina_impl(const PinpointInstance& inst, const Mina& m, EnumStats* acc) {
    const PinpointFormula& f = *inst.formula;
    sat::Solver solver = instance_solver(inst);
    bool ok = true;
    if (solver.solve_under(axiom_lits(f, m.axioms)).is_sat()) {
        ok = false;
    } else {
        for (size_t i = 0; i < m.axioms.size() && ok; ++i) {
            std::vector<NormAxiomId> reduced;
            for (size_t k = 0; k < m.axioms.size(); ++k) {
                if (k != i) reduced.push_back(m.axioms[k]);
            }
            if (!solver.solve_under(axiom_lits(f, reduced)).is_sat()) ok = false;
        }
    }
    absorb(acc, solver);
    return ok;
}

}  // namespace

Mina extract_one_mina(const PinpointInstance& inst) {
    const PinpointFormula& f = *inst.formula;
    sat::Solver solver = instance_solver(inst);

    sat::SolveResult r = solver.solve_under(axiom_lits(f, inst.soft));
    if (r.is_sat()) {
        throw InstanceSatisfiable("instance is satisfiable under all soft units");
    }
    std::vector<NormAxiomId> cand = core_axioms(f, r.core);

    // Deletion loop with core refinement: every surviving element was shown
    // necessary against a superset of the final set, which keeps it
    // necessary against the final set itself.
    size_t i = 0;
    while (i < cand.size()) {
        std::vector<NormAxiomId> test;
        test.reserve(cand.size() - 1);
        for (size_t k = 0; k < cand.size(); ++k) {
            if (k != i) test.push_back(cand[k]);
        }
        sat::SolveResult t = solver.solve_under(axiom_lits(f, test));
        if (t.is_sat()) {
            ++i;
        } else {
            NormAxiomId removed = cand[i];
            std::vector<NormAxiomId> next = core_axioms(f, t.core);
            // Entries below the removal point were already tested; both
            // vectors are sorted, so resume right after the removed id.
            i = std::lower_bound(next.begin(), next.end(), removed) - next.begin();
            cand = std::move(next);
        }
    }
    return Mina{std::move(cand)};
}

std::pair<std::vector<Mcs>, bool> enumerate_mcses(const PinpointInstance& inst,
                                                  const Budget& budget) {
    return enumerate_mcses_impl(inst, budget, nullptr);
}

namespace {

class HittingSetEnumerator {
public:
    explicit HittingSetEnumerator(std::span<const Mcs> mcses) : mcses_(mcses) {
        for (const Mcs& m : mcses_) {
            for (NormAxiomId a : m.axioms) universe_.push_back(a);
        }
        std::sort(universe_.begin(), universe_.end());
        universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());
    }

    std::vector<Mina> run() {
        std::vector<int32_t> unhit(mcses_.size());
        for (size_t k = 0; k < mcses_.size(); ++k) unhit[k] = static_cast<int32_t>(k);
        std::vector<NormAxiomId> chosen;
        std::vector<uint8_t> banned(universe_.size(), 0);
        recurse(chosen, banned, unhit);
        std::sort(out_.begin(), out_.end(),
                  [](const Mina& a, const Mina& b) { return a.axioms < b.axioms; });
        return std::move(out_);
    }

private:
    bool contains(const Mcs& m, NormAxiomId a) const {
        return std::binary_search(m.axioms.begin(), m.axioms.end(), a);
    }

    // Every element of a minimal hitting set must be the only chosen member
    // of at least one input set.
    bool is_minimal(const std::vector<NormAxiomId>& chosen) const {
        for (NormAxiomId a : chosen) {
            bool critical = false;
            for (const Mcs& m : mcses_) {
                int hits = 0;
                for (NormAxiomId c : chosen) {
                    if (contains(m, c) && ++hits > 1) break;
                }
                if (hits == 1 && contains(m, a)) {
                    critical = true;
                    break;
                }
            }
            if (!critical) return false;
        }
        return true;
    }

    bool dominated(const std::vector<NormAxiomId>& chosen) const {
        for (const Mina& m : out_) {
            if (std::includes(chosen.begin(), chosen.end(), m.axioms.begin(), m.axioms.end())) {
                return true;
            }
        }
        return false;
    }

    void recurse(std::vector<NormAxiomId>& chosen, std::vector<uint8_t>& banned,
                 const std::vector<int32_t>& unhit) {
        if (unhit.empty()) {
            std::vector<NormAxiomId> sorted = chosen;
            std::sort(sorted.begin(), sorted.end());
            if (is_minimal(sorted)) out_.push_back(Mina{std::move(sorted)});
            return;
        }
        // A superset of an already-emitted set can only complete to
        // non-minimal candidates.
        {
            std::vector<NormAxiomId> sorted = chosen;
            std::sort(sorted.begin(), sorted.end());
            if (dominated(sorted)) return;
        }

        // Pivot: non-banned element hitting the most un-hit sets.
        size_t best = universe_.size();
        int best_count = 0;
        for (size_t ui = 0; ui < universe_.size(); ++ui) {
            if (banned[ui]) continue;
            int count = 0;
            for (int32_t mi : unhit) {
                if (contains(mcses_[mi], universe_[ui])) ++count;
            }
            if (count > best_count) {
                best_count = count;
                best = ui;
            }
        }
        if (best == universe_.size()) return;  // some set can no longer be hit
        NormAxiomId pivot = universe_[best];

        std::vector<int32_t> still;
        for (int32_t mi : unhit) {
            if (!contains(mcses_[mi], pivot)) still.push_back(mi);
        }
        chosen.push_back(pivot);
        banned[best] = 1;
        recurse(chosen, banned, still);
        chosen.pop_back();
        recurse(chosen, banned, unhit);
        banned[best] = 0;
    }

    std::span<const Mcs> mcses_;
    std::vector<NormAxiomId> universe_;
    std::vector<Mina> out_;
};

}  // namespace

std::vector<Mina> minimal_hitting_sets(std::span<const Mcs> mcses) {
    if (mcses.empty()) return {Mina{{}}};
    return HittingSetEnumerator(mcses).run();
}

bool verify_mina(const PinpointInstance& inst, const Mina& m) {
    return verify_mina_impl(inst, m, nullptr);
}

EnumerationReport enumerate_minas(const PinpointInstance& inst, const Budget& budget) {
    BudgetGuard guard(budget);
    EnumerationReport report;
    auto [mcses, complete] = enumerate_mcses_impl(inst, budget, &report.stats);
    report.mcses = std::move(mcses);
    report.complete = complete;

    if (report.mcses.empty()) {
        if (complete) {
            // Distinguish a satisfiable instance (no justification) from
            // hard-alone unsatisfiability (empty justification).
            sat::Solver solver = instance_solver(inst);
            bool sat = solver.solve_under(axiom_lits(*inst.formula, inst.soft)).is_sat();
            absorb(&report.stats, solver);
            if (!sat) report.minas.push_back(Mina{{}});
        }
    } else {
        std::vector<Mina> candidates = minimal_hitting_sets(report.mcses);
        for (Mina& m : candidates) {
            if (verify_mina_impl(inst, m, &report.stats)) report.minas.push_back(std::move(m));
        }
        // With a complete correction-set family, hitting-set duality makes
        // every candidate a verified justification.
        assert(!report.complete || report.minas.size() == candidates.size());
    }
    report.stats.wall_seconds = guard.elapsed();
    return report;
}

std::vector<Mina> brute_force_minas(const NormalizedTBox& t, ConceptId sub, ConceptId sup) {
    std::vector<NormAxiomId> nontrivial;
    for (const NormalAxiom& ax : t.axioms) {
        if (!ax.is_trivial()) nontrivial.push_back(ax.id);
    }
    if (nontrivial.size() > 20) {
        throw std::invalid_argument("brute-force oracle limited to 20 non-trivial axioms");
    }

    NormalizedTBox scratch;
    scratch.symbols = t.symbols;

    uint32_t n = static_cast<uint32_t>(nontrivial.size());
    std::vector<uint32_t> entailing;
    std::vector<uint8_t> entails(1u << n, 0);
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        scratch.axioms.clear();
        for (uint32_t b = 0; b < n; ++b) {
            if (mask & (1u << b)) {
                NormalAxiom ax = t.axioms[nontrivial[b]];
                ax.id = static_cast<NormAxiomId>(scratch.axioms.size());
                scratch.axioms.push_back(ax);
            }
        }
        ClosureTrace trace = classify(scratch);
        if (holds(trace, sub, sup)) {
            entails[mask] = 1;
            entailing.push_back(mask);
        }
    }

    // Entailment is monotone, so a subset is minimal exactly when no
    // single-element removal still entails.
    std::vector<Mina> out;
    for (uint32_t mask : entailing) {
        bool minimal = true;
        for (uint32_t b = 0; b < n && minimal; ++b) {
            if ((mask & (1u << b)) && entails[mask & ~(1u << b)]) minimal = false;
        }
        if (!minimal) continue;
        Mina m;
        for (uint32_t b = 0; b < n; ++b) {
            if (mask & (1u << b)) m.axioms.push_back(nontrivial[b]);
        }
        out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end(),
              [](const Mina& a, const Mina& b) { return a.axioms < b.axioms; });
    return out;
}

QueryResult pinpoint_query(const ClosureTrace& trace, const PinpointFormula& formula,
                           ConceptId sub, ConceptId sup, bool use_coi, const Budget& budget) {
    QueryResult result;
    if (sub == sup || sup == kTop) {
        result.kind = QueryResult::Kind::Trivial;
        result.report.minas.push_back(Mina{{}});
        result.report.complete = true;
        return result;
    }
    if (!holds(trace, sub, sup)) {
        result.kind = QueryResult::Kind::NotEntailed;
        result.report.complete = true;
        return result;
    }
    PinpointInstance inst = build_instance(formula, sub, sup);
    if (use_coi) {
        PinpointInstance reduced = coi_reduce(inst);
        result.report = enumerate_minas(reduced, budget);
    } else {
        result.report = enumerate_minas(inst, budget);
    }
    result.kind = QueryResult::Kind::Pinpointed;
    return result;
}

}  // namespace elpin
