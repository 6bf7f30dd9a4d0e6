#include "elpin/satcore.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace elpin::sat {

Solver::Solver(int32_t var_count) : nvars_(var_count) {
    if (var_count < 0) throw std::out_of_range("negative variable count");
    watches_.resize(2 * (nvars_ + 1));
    assigns_.assign(nvars_ + 1, -1);
    levels_.assign(nvars_ + 1, 0);
    reasons_.assign(nvars_ + 1, kNoClause);
    seen_.assign(nvars_ + 1, 0);
}

void Solver::check_lit(Lit l) const {
    int32_t v = var_of(l);
    if (v < 1 || v > nvars_) throw std::out_of_range("literal out of range");
}

Solver::CRef Solver::store_clause(std::span<const Lit> lits, bool learnt) {
    CRef c = static_cast<CRef>(arena_.size());
    arena_.push_back(Lit{static_cast<int32_t>(lits.size())});
    arena_.insert(arena_.end(), lits.begin(), lits.end());
    (learnt ? learnts_ : clauses_).push_back(c);
    return c;
}

void Solver::attach(CRef c) {
    const Lit* lits = clause_lits(c);
    assert(clause_size(c) >= 2);
    watches_[lits[0].code].push_back({c, lits[1]});
    watches_[lits[1].code].push_back({c, lits[0]});
}

void Solver::add_clause(std::span<const Lit> lits) {
    for (Lit l : lits) check_lit(l);
    if (!ok_) return;
    cancel_until(0);

    // Sort, drop duplicates and tautologies, strip root-level falsified
    // literals, skip root-level satisfied clauses.
    std::vector<Lit> cl(lits.begin(), lits.end());
    std::sort(cl.begin(), cl.end());
    cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
    std::vector<Lit> kept;
    for (size_t i = 0; i < cl.size(); ++i) {
        if (i + 1 < cl.size() && cl[i + 1] == neg(cl[i])) return;  // tautology
        if (value(cl[i]) == 1) return;
        if (value(cl[i]) == 0) continue;
        kept.push_back(cl[i]);
    }
    if (kept.empty()) {
        ok_ = false;
        return;
    }
    if (kept.size() == 1) {
        unchecked_enqueue(kept[0], kNoClause);
        if (propagate() != kNoClause) ok_ = false;
        return;
    }
    attach(store_clause(kept, false));
}

void Solver::unchecked_enqueue(Lit p, CRef reason) {
    int32_t v = var_of(p);
    assert(assigns_[v] == -1);
    assigns_[v] = is_pos(p) ? 1 : 0;
    levels_[v] = decision_level();
    reasons_[v] = reason;
    trail_.push_back(p);
    ++stats_.propagations;
}

Solver::CRef Solver::propagate() {
    while (qhead_ < trail_.size()) {
        Lit p = trail_[qhead_++];
        std::vector<Watch>& ws = watches_[neg(p).code];
        size_t i = 0, j = 0;
        while (i < ws.size()) {
            Watch w = ws[i];
            if (value(w.blocker) == 1) {
                ws[j++] = ws[i++];
                continue;
            }
            CRef c = w.cref;
            Lit* lits = clause_lits(c);
            Lit false_lit = neg(p);
            if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
            assert(lits[1] == false_lit);
            ++i;

            Lit first = lits[0];
            if (value(first) == 1) {
                ws[j++] = {c, first};
                continue;
            }
            int32_t sz = clause_size(c);
            bool rewatched = false;
            for (int32_t k = 2; k < sz; ++k) {
                if (value(lits[k]) != 0) {
                    std::swap(lits[1], lits[k]);
                    watches_[lits[1].code].push_back({c, first});
                    rewatched = true;
                    break;
                }
            }
            if (rewatched) continue;

            if (value(first) == 0) {
                // Conflict: keep the remaining watches before returning.
                ws[j++] = {c, first};
                while (i < ws.size()) ws[j++] = ws[i++];
                ws.resize(j);
                qhead_ = trail_.size();
                return c;
            }
            ws[j++] = {c, first};
            unchecked_enqueue(first, c);
        }
        ws.resize(j);
    }
    return kNoClause;
}

void Solver::cancel_until(int32_t level) {
    if (decision_level() <= level) return;
    size_t bound = trail_lim_[level];
    for (size_t k = trail_.size(); k-- > bound;) {
        int32_t v = var_of(trail_[k]);
        assigns_[v] = -1;
        reasons_[v] = kNoClause;
        if (v < decision_cursor_) decision_cursor_ = v;
    }
    trail_.resize(bound);
    trail_lim_.resize(level);
    qhead_ = bound;
}

// First-UIP conflict analysis; no clause minimization.
void Solver::analyze(CRef confl, std::vector<Lit>& learnt, int32_t& bt_level) {
    learnt.clear();
    learnt.push_back(Lit{0});  // room for the asserting literal
    int32_t counter = 0;
    Lit p{0};
    size_t idx = trail_.size();

    CRef reason = confl;
    for (;;) {
        assert(reason != kNoClause);
        const Lit* lits = clause_lits(reason);
        int32_t sz = clause_size(reason);
        for (int32_t k = (p.code == 0 ? 0 : 1); k < sz; ++k) {
            Lit q = lits[k];
            int32_t v = var_of(q);
            if (seen_[v] || levels_[v] == 0) continue;
            seen_[v] = 1;
            if (levels_[v] >= decision_level()) {
                ++counter;
            } else {
                learnt.push_back(q);
            }
        }
        while (!seen_[var_of(trail_[idx - 1])]) --idx;
        p = trail_[idx - 1];
        --idx;
        seen_[var_of(p)] = 0;
        --counter;
        if (counter == 0) break;
        reason = reasons_[var_of(p)];
        // The asserting side of a learnt reason starts at position 1; for a
        // trail literal the clause's first literal is the literal itself.
    }
    learnt[0] = neg(p);

    bt_level = 0;
    if (learnt.size() > 1) {
        size_t max_i = 1;
        for (size_t k = 2; k < learnt.size(); ++k) {
            if (levels_[var_of(learnt[k])] > levels_[var_of(learnt[max_i])]) max_i = k;
        }
        std::swap(learnt[1], learnt[max_i]);
        bt_level = levels_[var_of(learnt[1])];
    }
    for (size_t k = 1; k < learnt.size(); ++k) seen_[var_of(learnt[k])] = 0;
}

std::vector<Lit> Solver::analyze_final(Lit failed) {
    // Walks the implication trail back from a failed assumption, collecting
    // the assumption literals it depends on. Reason-less trail literals above
    // level 0 are assumption decisions, so they come back in the polarity the
    // caller handed in.
    std::vector<Lit> core{failed};
    if (decision_level() == 0) return core;
    seen_[var_of(failed)] = 1;
    for (size_t k = trail_.size(); k-- > static_cast<size_t>(trail_lim_[0]);) {
        int32_t v = var_of(trail_[k]);
        if (!seen_[v]) continue;
        if (reasons_[v] == kNoClause) {
            core.push_back(trail_[k]);
        } else {
            const Lit* lits = clause_lits(reasons_[v]);
            int32_t sz = clause_size(reasons_[v]);
            for (int32_t m = 1; m < sz; ++m) {
                if (levels_[var_of(lits[m])] > 0) seen_[var_of(lits[m])] = 1;
            }
        }
        seen_[v] = 0;
    }
    seen_[var_of(failed)] = 0;
    return core;
}

SolveResult Solver::solve_under(std::span<const Lit> assumptions) {
    ++stats_.solves;
    for (Lit a : assumptions) check_lit(a);
    if (!ok_) return {Status::Unsat, {}, {}};
    cancel_until(0);
    decision_cursor_ = 1;

    int32_t n_assumps = static_cast<int32_t>(assumptions.size());
    std::vector<Lit> learnt;

    for (;;) {
        CRef confl = propagate();
        if (confl != kNoClause) {
            ++stats_.conflicts;
            if (decision_level() == 0) {
                ok_ = false;
                return {Status::Unsat, {}, {}};
            }
            if (decision_level() > n_assumps) ++stats_.search_conflicts;
            int32_t bt = 0;
            analyze(confl, learnt, bt);
            cancel_until(bt);
            if (learnt.size() == 1) {
                unchecked_enqueue(learnt[0], kNoClause);
            } else {
                CRef c = store_clause(learnt, true);
                attach(c);
                unchecked_enqueue(learnt[0], c);
            }
            continue;
        }

        if (decision_level() < n_assumps) {
            Lit p = assumptions[decision_level()];
            if (value(p) == 1) {
                trail_lim_.push_back(static_cast<int32_t>(trail_.size()));
                continue;
            }
            if (value(p) == 0) {
                std::vector<Lit> core = analyze_final(p);
                std::sort(core.begin(), core.end());
                core.erase(std::unique(core.begin(), core.end()), core.end());
                cancel_until(0);
                return {Status::Unsat, {}, std::move(core)};
            }
            trail_lim_.push_back(static_cast<int32_t>(trail_.size()));
            unchecked_enqueue(p, kNoClause);
            continue;
        }

        while (decision_cursor_ <= nvars_ && assigns_[decision_cursor_] != -1) {
            ++decision_cursor_;
        }
        if (decision_cursor_ > nvars_) {
            std::vector<uint8_t> model(nvars_ + 1, 0);
            for (int32_t v = 1; v <= nvars_; ++v) model[v] = assigns_[v] == 1;
            cancel_until(0);
            return {Status::Sat, std::move(model), {}};
        }
        ++stats_.decisions;
        trail_lim_.push_back(static_cast<int32_t>(trail_.size()));
        unchecked_enqueue(mk_lit(decision_cursor_, false), kNoClause);
    }
}

std::string Solver::to_dimacs() const {
    std::ostringstream out;
    out << "p cnf " << nvars_ << ' ' << clauses_.size() << '\n';
    for (CRef c : clauses_) {
        const Lit* lits = clause_lits(c);
        for (int32_t k = 0; k < clause_size(c); ++k) {
            out << (is_pos(lits[k]) ? var_of(lits[k]) : -var_of(lits[k])) << ' ';
        }
        out << "0\n";
    }
    return out.str();
}

}  // namespace elpin::sat
