#include "elpin/encode.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <unordered_map>

namespace elpin {

namespace {

uint64_t clause_hash(int32_t head, std::span<const int32_t> body) {
    uint64_t h = 1469598103934665603ull ^ static_cast<uint64_t>(head);
    for (int32_t v : body) {
        h ^= static_cast<uint64_t>(v);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

PinpointFormula build_pinpoint_formula(const ClosureTrace& c) {
    const NormalizedTBox& t = *c.tbox;
    PinpointFormula f;
    f.trace = &c;
    f.axiom_selector.assign(t.axioms.size(), 0);
    f.assertion_selector.assign(c.assertions.size(), 0);

    auto new_var = [&](SelectorVar::Binds binds, int32_t target) {
        f.selectors.push_back({binds, target});
        return ++f.var_count;
    };

    // Axiom selectors first, in normalized order. An NF1/NF3 axiom shares
    // one variable with its own assertion.
    for (const NormalAxiom& ax : t.axioms) {
        if (ax.is_trivial()) continue;
        int32_t v = new_var(SelectorVar::Binds::Axiom, ax.id);
        f.axiom_selector[ax.id] = v;
        AssertionId reg = c.axiom_assertion[ax.id];
        if (reg >= 0 && f.assertion_selector[reg] == 0) f.assertion_selector[reg] = v;
    }
    // Remaining non-trivial assertions, in first-derivation order.
    for (AssertionId a = 0; a < static_cast<AssertionId>(c.assertions.size()); ++a) {
        if (c.assertions[a].is_trivial()) continue;
        if (f.assertion_selector[a] == 0) {
            f.assertion_selector[a] = new_var(SelectorVar::Binds::Derived, a);
        }
    }

    std::unordered_map<uint64_t, std::vector<int32_t>> dedup;
    std::vector<int32_t> body;
    auto add_clause = [&](int32_t head, std::vector<int32_t>& b) {
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        if (std::binary_search(b.begin(), b.end(), head)) return;  // tautology
        uint64_t h = clause_hash(head, b);
        auto& bucket = dedup[h];
        for (int32_t idx : bucket) {
            const HornClause& other = f.clauses[idx];
            if (other.head == head && std::equal(b.begin(), b.end(), f.body(other).begin(),
                                                 f.body(other).end())) {
                return;
            }
        }
        HornClause cl;
        cl.head = head;
        cl.body_begin = static_cast<uint32_t>(f.body_pool.size());
        cl.body_len = static_cast<uint32_t>(b.size());
        f.body_pool.insert(f.body_pool.end(), b.begin(), b.end());
        bucket.push_back(static_cast<int32_t>(f.clauses.size()));
        f.clauses.push_back(cl);
    };

    // A duplicated NF1/NF3 axiom whose assertion selector is already taken
    // links to it by implication instead of merging.
    for (const NormalAxiom& ax : t.axioms) {
        AssertionId reg = c.axiom_assertion[ax.id];
        if (reg < 0) continue;
        int32_t av = f.axiom_selector[ax.id];
        int32_t sv = f.assertion_selector[reg];
        if (av != 0 && sv != av) {
            body.assign(1, av);
            add_clause(sv, body);
        }
    }

    for (const RuleApplication& app : c.applications) {
        int32_t head = f.assertion_selector[app.consequent];
        if (head == 0) continue;  // trivially true consequent
        body.clear();
        if (app.ant1 >= 0 && f.assertion_selector[app.ant1] != 0) {
            body.push_back(f.assertion_selector[app.ant1]);
        }
        if (app.ant2 >= 0 && f.assertion_selector[app.ant2] != 0) {
            body.push_back(f.assertion_selector[app.ant2]);
        }
        if (app.axiom >= 0 && f.axiom_selector[app.axiom] != 0) {
            body.push_back(f.axiom_selector[app.axiom]);
        }
        add_clause(head, body);
    }
    return f;
}

PinpointInstance build_instance(const PinpointFormula& f, ConceptId sub, ConceptId sup) {
    const ClosureTrace& c = *f.trace;
    PinpointInstance inst;
    inst.formula = &f;
    inst.var_count = f.var_count;

    if (sub == sup || sup == kTop) {
        // Trivially true query: its selector is constant true, so the negated
        // query unit is the empty clause.
        inst.query_var = 0;
        if (auto a = c.find_subs(sub, sup)) inst.query_assertion = *a;
    } else {
        auto a = c.find_subs(sub, sup);
        if (!a) {
            throw QueryNotEntailed("subsumption was not derived; no justification exists");
        }
        inst.query_assertion = *a;
        inst.query_var = f.assertion_selector[*a];
        assert(inst.query_var > 0);
    }

    inst.hard_clauses.resize(f.clauses.size());
    for (size_t i = 0; i < f.clauses.size(); ++i) {
        inst.hard_clauses[i] = static_cast<int32_t>(i);
    }
    for (NormAxiomId ax = 0; ax < static_cast<NormAxiomId>(f.axiom_selector.size()); ++ax) {
        if (f.axiom_selector[ax] != 0) inst.soft.push_back(ax);
    }
    return inst;
}

PinpointInstance coi_reduce(const PinpointInstance& inst) {
    const PinpointFormula& f = *inst.formula;
    PinpointInstance out;
    out.formula = inst.formula;
    out.query_assertion = inst.query_assertion;
    out.query_var = inst.query_var;
    out.var_count = inst.var_count;
    out.reduced = true;
    if (inst.query_var <= 0) return out;  // empty cone

    std::vector<std::vector<int32_t>> by_head(f.var_count + 1);
    for (int32_t idx : inst.hard_clauses) {
        by_head[f.clauses[idx].head].push_back(idx);
    }
    std::vector<uint8_t> marked_var(f.var_count + 1, 0);
    std::vector<uint8_t> kept(f.clauses.size(), 0);
    std::vector<int32_t> stack{inst.query_var};
    marked_var[inst.query_var] = 1;
    while (!stack.empty()) {
        int32_t v = stack.back();
        stack.pop_back();
        for (int32_t idx : by_head[v]) {
            if (kept[idx]) continue;
            kept[idx] = 1;
            for (int32_t b : f.body(f.clauses[idx])) {
                if (!marked_var[b]) {
                    marked_var[b] = 1;
                    stack.push_back(b);
                }
            }
        }
    }
    for (int32_t idx : inst.hard_clauses) {
        if (kept[idx]) out.hard_clauses.push_back(idx);
    }
    for (NormAxiomId ax : inst.soft) {
        if (marked_var[f.axiom_selector[ax]]) out.soft.push_back(ax);
    }
    return out;
}

std::string render_assertion(const ClosureTrace& c, AssertionId id) {
    if (id < 0 || id >= static_cast<AssertionId>(c.assertions.size())) {
        throw std::out_of_range("assertion id out of range");
    }
    const Assertion& a = c.assertions[id];
    const SymbolTable& sy = c.tbox->symbols;
    if (a.kind == Assertion::Kind::Subs) {
        return sy.concept_name(a.sub) + " <= " + sy.concept_name(a.sup);
    }
    return sy.concept_name(a.sub) + " <= (" + sy.role_name(a.role) + " some " +
           sy.concept_name(a.sup) + ")";
}

std::string emit_wcnf(const PinpointInstance& inst) {
    std::ostringstream out;
    const PinpointFormula* f = inst.formula;
    int64_t top = static_cast<int64_t>(inst.soft.size()) + 1;
    size_t n_hard = inst.hard_clauses.size() + (inst.query_var >= 0 ? 1 : 0);
    size_t n_clauses = n_hard + inst.soft.size();

    if (f != nullptr) {
        for (int32_t v = 1; v <= f->var_count; ++v) {
            const SelectorVar& s = f->selectors[v - 1];
            out << "c s" << v << " := ";
            if (s.binds == SelectorVar::Binds::Axiom) {
                out << render_normal_axiom(*f->trace->tbox, s.target);
            } else {
                out << render_assertion(*f->trace, s.target);
            }
            out << '\n';
        }
    }
    out << "p wcnf " << inst.var_count << ' ' << n_clauses << ' ' << top << '\n';
    for (int32_t idx : inst.hard_clauses) {
        const HornClause& cl = f->clauses[idx];
        out << top;
        for (int32_t b : f->body(cl)) out << " -" << b;
        if (cl.head != 0) out << ' ' << cl.head;
        out << " 0\n";
    }
    if (inst.query_var > 0) {
        out << top << " -" << inst.query_var << " 0\n";
    } else if (inst.query_var == 0) {
        out << top << " 0\n";  // negated constant-true query
    }
    for (NormAxiomId ax : inst.soft) {
        out << "1 " << f->axiom_selector[ax] << " 0\n";
    }
    return out.str();
}

sat::Solver formula_solver(const PinpointFormula& f) {
    sat::Solver s(f.var_count);
    std::vector<sat::Lit> lits;
    for (const HornClause& cl : f.clauses) {
        lits.clear();
        for (int32_t b : f.body(cl)) lits.push_back(sat::mk_lit(b, false));
        if (cl.head != 0) lits.push_back(sat::mk_lit(cl.head, true));
        s.add_clause(lits);
    }
    return s;
}

sat::Solver instance_solver(const PinpointInstance& inst) {
    const PinpointFormula& f = *inst.formula;
    sat::Solver s(inst.var_count);
    std::vector<sat::Lit> lits;
    for (int32_t idx : inst.hard_clauses) {
        const HornClause& cl = f.clauses[idx];
        lits.clear();
        for (int32_t b : f.body(cl)) lits.push_back(sat::mk_lit(b, false));
        if (cl.head != 0) lits.push_back(sat::mk_lit(cl.head, true));
        s.add_clause(lits);
    }
    if (inst.query_var > 0) {
        s.add_clause({sat::mk_lit(inst.query_var, false)});
    } else if (inst.query_var == 0) {
        s.add_clause(std::span<const sat::Lit>{});
    }
    return s;
}

}  // namespace elpin
