#include "oracles.hpp"

#include <algorithm>
#include <cstdlib>

namespace elpin::test {

FactSet naive_closure(const NormalizedTBox& t) {
    FactSet facts;
    auto subs = [](ConceptId a, ConceptId b) { return Fact{false, a, -1, b}; };
    auto exsubs = [](ConceptId a, RoleId r, ConceptId b) { return Fact{true, a, r, b}; };

    std::set<ConceptId> occurring;
    for (const NormalAxiom& ax : t.axioms) {
        for (ConceptId c : {ax.sub, ax.sub2, ax.sup}) {
            if (c >= 0) occurring.insert(c);
        }
    }
    for (ConceptId c : occurring) {
        facts.insert(subs(c, c));
        facts.insert(subs(c, kTop));
    }
    for (const NormalAxiom& ax : t.axioms) {
        if (ax.form == NormalForm::NF1) facts.insert(subs(ax.sub, ax.sup));
        if (ax.form == NormalForm::NF3) facts.insert(exsubs(ax.sub, ax.role, ax.sup));
    }

    bool changed = true;
    while (changed) {
        changed = false;
        FactSet next = facts;
        auto add = [&](const Fact& f) {
            if (next.insert(f).second) changed = true;
        };
        for (const NormalAxiom& ax : t.axioms) {
            for (const Fact& f1 : facts) {
                auto [ex1, x1, r1, y1] = f1;
                switch (ax.form) {
                    case NormalForm::NF1:
                        if (!ex1 && y1 == ax.sub) add(subs(x1, ax.sup));
                        break;
                    case NormalForm::NF2:
                        if (!ex1 && y1 == ax.sub &&
                            facts.count(subs(x1, ax.sub2))) {
                            add(subs(x1, ax.sup));
                        }
                        break;
                    case NormalForm::NF3:
                        if (!ex1 && y1 == ax.sub) add(exsubs(x1, ax.role, ax.sup));
                        break;
                    case NormalForm::NF4:
                        if (ex1 && r1 == ax.role && facts.count(subs(y1, ax.sub))) {
                            add(subs(x1, ax.sup));
                        }
                        break;
                    case NormalForm::NF5:
                        if (ex1 && r1 == ax.role) add(exsubs(x1, ax.super_role, y1));
                        break;
                    case NormalForm::NF6:
                        if (ex1 && r1 == ax.role) {
                            for (const Fact& f2 : facts) {
                                auto [ex2, x2, r2, y2] = f2;
                                if (ex2 && r2 == ax.role2 && x2 == y1) {
                                    add(exsubs(x1, ax.super_role, y2));
                                }
                            }
                        }
                        break;
                }
            }
        }
        facts = std::move(next);
    }
    return facts;
}

bool naive_holds(const FactSet& facts, ConceptId sub, ConceptId sup) {
    if (sub == sup || sup == kTop) return true;
    return facts.count(Fact{false, sub, -1, sup}) != 0;
}

FactSet trace_facts(const ClosureTrace& c) {
    FactSet out;
    for (const Assertion& a : c.assertions) {
        out.insert(Fact{a.kind == Assertion::Kind::ExSubs, a.sub, a.role, a.sup});
    }
    return out;
}

namespace {

bool clause_satisfied(const CnfClause& cl, const std::vector<int8_t>& assign) {
    for (int lit : cl) {
        int v = std::abs(lit);
        if (assign[v] == (lit > 0 ? 1 : 0)) return true;
    }
    return false;
}

}  // namespace

bool tt_satisfiable(int n_vars, const std::vector<CnfClause>& clauses,
                    const std::vector<int>& assumptions) {
    for (uint32_t bits = 0; bits < (1u << n_vars); ++bits) {
        std::vector<int8_t> assign(n_vars + 1, 0);
        for (int v = 1; v <= n_vars; ++v) assign[v] = (bits >> (v - 1)) & 1;
        bool ok = true;
        for (int a : assumptions) {
            if (assign[std::abs(a)] != (a > 0 ? 1 : 0)) {
                ok = false;
                break;
            }
        }
        for (size_t i = 0; ok && i < clauses.size(); ++i) {
            ok = clause_satisfied(clauses[i], assign);
        }
        if (ok) return true;
    }
    return false;
}

namespace {

// assign: -1 unassigned, 0 false, 1 true
bool dpll(const std::vector<CnfClause>& clauses, std::vector<int8_t>& assign) {
    // Unit propagation by repeated full scans.
    bool changed = true;
    std::vector<std::pair<int, int8_t>> trail;
    auto undo = [&]() {
        for (auto [v, _] : trail) assign[v] = -1;
    };
    while (changed) {
        changed = false;
        for (const CnfClause& cl : clauses) {
            int unassigned = 0;
            int last = 0;
            bool sat = false;
            for (int lit : cl) {
                int v = std::abs(lit);
                if (assign[v] == -1) {
                    ++unassigned;
                    last = lit;
                } else if (assign[v] == (lit > 0 ? 1 : 0)) {
                    sat = true;
                    break;
                }
            }
            if (sat) continue;
            if (unassigned == 0) {
                undo();
                return false;
            }
            if (unassigned == 1) {
                int v = std::abs(last);
                assign[v] = last > 0 ? 1 : 0;
                trail.push_back({v, assign[v]});
                changed = true;
            }
        }
    }
    int branch = 0;
    for (size_t v = 1; v < assign.size(); ++v) {
        if (assign[v] == -1) {
            branch = static_cast<int>(v);
            break;
        }
    }
    if (branch == 0) return true;
    for (int8_t val : {int8_t{0}, int8_t{1}}) {
        assign[branch] = val;
        if (dpll(clauses, assign)) return true;
        assign[branch] = -1;
    }
    undo();
    return false;
}

}  // namespace

bool dpll_satisfiable(int n_vars, const std::vector<CnfClause>& clauses,
                      const std::vector<int>& assumptions) {
    std::vector<int8_t> assign(n_vars + 1, -1);
    for (int a : assumptions) {
        int v = std::abs(a);
        int8_t want = a > 0 ? 1 : 0;
        if (assign[v] != -1 && assign[v] != want) return false;
        assign[v] = want;
    }
    for (const CnfClause& cl : clauses) {
        if (cl.empty()) return false;
    }
    return dpll(clauses, assign);
}

}  // namespace elpin::test
