#include "elpin/classify.hpp"

#include <cassert>
#include <stdexcept>

namespace elpin {

namespace {

constexpr int kIdBits = 21;  // three ids packed into one 64-bit key
constexpr int32_t kIdLimit = 1 << kIdBits;

uint64_t pack2(int32_t a, int32_t b) {
    return (static_cast<uint64_t>(a) << kIdBits) | static_cast<uint64_t>(b);
}

uint64_t pack3(int32_t a, int32_t b, int32_t c) {
    return (((static_cast<uint64_t>(a) << kIdBits) | static_cast<uint64_t>(b)) << kIdBits) |
           static_cast<uint64_t>(c);
}

class Classifier {
public:
    explicit Classifier(const NormalizedTBox& t) : t_(t) {
        if (t.symbols.concept_count() >= kIdLimit || t.symbols.role_count() >= kIdLimit) {
            throw std::length_error("symbol table too large to classify");
        }
        trace_.tbox = &t;
        trace_.axiom_assertion.assign(t.axioms.size(), -1);
        build_axiom_indexes();
    }

    ClosureTrace run() {
        register_axiom_assertions();
        seed_reflexive();
        saturate();
        return std::move(trace_);
    }

private:
    struct Nf2Entry { ConceptId other; ConceptId sup; NormAxiomId ax; };
    struct Nf3Entry { RoleId role; ConceptId sup; NormAxiomId ax; };
    struct Nf4ByFiller { RoleId role; ConceptId sup; NormAxiomId ax; };
    struct Nf4ByRole { ConceptId filler; ConceptId sup; NormAxiomId ax; };
    struct Nf6Entry { RoleId other; RoleId sup; NormAxiomId ax; };

    void build_axiom_indexes() {
        int nc = t_.symbols.concept_count();
        int nr = t_.symbols.role_count();
        nf1_by_sub_.resize(nc);
        nf2_by_first_.resize(nc);
        nf2_by_second_.resize(nc);
        nf3_by_sub_.resize(nc);
        nf4_by_filler_.resize(nc);
        nf4_by_role_.resize(nr);
        nf5_by_sub_.resize(nr);
        nf6_by_first_.resize(nr);
        nf6_by_second_.resize(nr);

        auto touch = [&](ConceptId c) {
            if (c >= 0 && !occurs_[c]) occurs_[c] = true;
        };
        occurs_.assign(nc, false);

        for (const NormalAxiom& ax : t_.axioms) {
            switch (ax.form) {
                case NormalForm::NF1:
                    nf1_by_sub_[ax.sub].push_back({ax.sup, ax.id});
                    break;
                case NormalForm::NF2:
                    nf2_by_first_[ax.sub].push_back({ax.sub2, ax.sup, ax.id});
                    if (ax.sub2 != ax.sub) {
                        nf2_by_second_[ax.sub2].push_back({ax.sub, ax.sup, ax.id});
                    }
                    break;
                case NormalForm::NF3:
                    nf3_by_sub_[ax.sub].push_back({ax.role, ax.sup, ax.id});
                    break;
                case NormalForm::NF4:
                    nf4_by_filler_[ax.sub].push_back({ax.role, ax.sup, ax.id});
                    nf4_by_role_[ax.role].push_back({ax.sub, ax.sup, ax.id});
                    break;
                case NormalForm::NF5:
                    nf5_by_sub_[ax.role].push_back({ax.super_role, ax.id});
                    break;
                case NormalForm::NF6:
                    nf6_by_first_[ax.role].push_back({ax.role2, ax.super_role, ax.id});
                    nf6_by_second_[ax.role2].push_back({ax.role, ax.super_role, ax.id});
                    break;
            }
            touch(ax.sub);
            touch(ax.sub2);
            touch(ax.sup);
        }
    }

    // NF1/NF3 axioms are assertions themselves; give them the first ids so
    // the encoder can unify axiom and assertion selectors.
    void register_axiom_assertions() {
        for (const NormalAxiom& ax : t_.axioms) {
            if (ax.form == NormalForm::NF1) {
                trace_.axiom_assertion[ax.id] = intern_subs(ax.sub, ax.sup);
            } else if (ax.form == NormalForm::NF3) {
                trace_.axiom_assertion[ax.id] = intern_exsubs(ax.sub, ax.role, ax.sup);
            }
        }
    }

    void seed_reflexive() {
        int nc = t_.symbols.concept_count();
        for (ConceptId c = 0; c < nc; ++c) {
            if (!occurs_[c]) continue;
            record(Rule::R0, -1, -1, -1, intern_subs(c, c));
            if (c != kTop) record(Rule::R0, -1, -1, -1, intern_subs(c, kTop));
        }
    }

    void saturate() {
        // The assertion list doubles as the FIFO worklist: an assertion is
        // processed exactly once, and "already processed" is id <= cursor.
        // Indexes are updated at processing time, so each rule instance
        // fires exactly once, when its last antecedent is processed.
        for (AssertionId cur = 0; cur < static_cast<AssertionId>(trace_.assertions.size());
             ++cur) {
            Assertion a = trace_.assertions[cur];
            if (a.kind == Assertion::Kind::Subs) {
                process_subs(cur, a);
            } else {
                exsubs_by_source_role_[pack2(a.sub, a.role)].push_back({a.sup, cur});
                exsubs_by_target_role_[pack2(a.sup, a.role)].push_back({a.sub, cur});
                process_exsubs(cur, a);
            }
        }
    }

    void process_subs(AssertionId cur, const Assertion& a) {
        ConceptId x = a.sub, b = a.sup;

        // R1: Subs(X,A) + (A <= B)  =>  Subs(X,B)
        for (const auto& [sup, ax] : nf1_by_sub_[b]) {
            record(Rule::R1, cur, -1, ax, intern_subs(x, sup));
        }
        // R2: Subs(X,A1) + Subs(X,A2) + (A1 and A2 <= B)  =>  Subs(X,B)
        for (const Nf2Entry& e : nf2_by_first_[b]) {
            if (auto partner = processed_subs(x, e.other, cur)) {
                record(Rule::R2, cur, *partner, e.ax, intern_subs(x, e.sup));
            }
        }
        for (const Nf2Entry& e : nf2_by_second_[b]) {
            if (auto partner = processed_subs(x, e.other, cur)) {
                record(Rule::R2, *partner, cur, e.ax, intern_subs(x, e.sup));
            }
        }
        // R3: Subs(X,A) + (A <= (r some B))  =>  ExSubs(X,r,B)
        for (const Nf3Entry& e : nf3_by_sub_[b]) {
            record(Rule::R3, cur, -1, e.ax, intern_exsubs(x, e.role, e.sup));
        }
        // R4 (as second antecedent): ExSubs(W,r,X) + Subs(X,A) +
        // ((r some A) <= B)  =>  Subs(W,B)
        for (const Nf4ByFiller& e : nf4_by_filler_[b]) {
            auto it = exsubs_by_target_role_.find(pack2(x, e.role));
            if (it == exsubs_by_target_role_.end()) continue;
            for (const auto& [w, id] : it->second) {
                if (id > cur) continue;
                record(Rule::R4, id, cur, e.ax, intern_subs(w, e.sup));
            }
        }
    }

    void process_exsubs(AssertionId cur, const Assertion& a) {
        ConceptId x = a.sub, y = a.sup;
        RoleId r = a.role;

        // R4 (as first antecedent): ExSubs(X,r,Y) + Subs(Y,A) + ((r some A) <= B)
        for (const Nf4ByRole& e : nf4_by_role_[r]) {
            if (auto partner = processed_subs(y, e.filler, cur)) {
                record(Rule::R4, cur, *partner, e.ax, intern_subs(x, e.sup));
            }
        }
        // R5: ExSubs(X,r,Y) + (r <= s)  =>  ExSubs(X,s,Y)
        for (const auto& [sup, ax] : nf5_by_sub_[r]) {
            record(Rule::R5, cur, -1, ax, intern_exsubs(x, sup, y));
        }
        // R6 with cur as left part: ExSubs(X,r,Y) + ExSubs(Y,r2,Z) +
        // (r o r2 <= s)  =>  ExSubs(X,s,Z)
        for (const Nf6Entry& e : nf6_by_first_[r]) {
            auto it = exsubs_by_source_role_.find(pack2(y, e.other));
            if (it == exsubs_by_source_role_.end()) continue;
            for (const auto& [z, id] : it->second) {
                if (id > cur) continue;
                record(Rule::R6, cur, id, e.ax, intern_exsubs(x, e.sup, z));
            }
        }
        // R6 with cur as right part; the (cur, cur) pairing is covered above.
        for (const Nf6Entry& e : nf6_by_second_[r]) {
            auto it = exsubs_by_target_role_.find(pack2(x, e.other));
            if (it == exsubs_by_target_role_.end()) continue;
            for (const auto& [w, id] : it->second) {
                if (id >= cur) continue;
                record(Rule::R6, id, cur, e.ax, intern_exsubs(w, e.sup, y));
            }
        }
    }

    std::optional<AssertionId> processed_subs(ConceptId sub, ConceptId sup, AssertionId cur) {
        auto it = trace_.subs_ids.find(pack2(sub, sup));
        if (it == trace_.subs_ids.end() || it->second > cur) return std::nullopt;
        return it->second;
    }

    AssertionId intern_subs(ConceptId sub, ConceptId sup) {
        auto [it, inserted] = trace_.subs_ids.try_emplace(
            pack2(sub, sup), static_cast<AssertionId>(trace_.assertions.size()));
        if (inserted) {
            trace_.assertions.push_back({Assertion::Kind::Subs, sub, -1, sup});
        }
        return it->second;
    }

    AssertionId intern_exsubs(ConceptId sub, RoleId r, ConceptId sup) {
        auto [it, inserted] = trace_.exsubs_ids.try_emplace(
            pack3(sub, r, sup), static_cast<AssertionId>(trace_.assertions.size()));
        if (inserted) {
            trace_.assertions.push_back({Assertion::Kind::ExSubs, sub, r, sup});
        }
        return it->second;
    }

    void record(Rule rule, AssertionId ant1, AssertionId ant2, NormAxiomId ax,
                AssertionId consequent) {
        trace_.applications.push_back({rule, ant1, ant2, ax, consequent});
    }

    const NormalizedTBox& t_;
    ClosureTrace trace_;
    std::vector<bool> occurs_;

    std::vector<std::vector<std::pair<ConceptId, NormAxiomId>>> nf1_by_sub_;
    std::vector<std::vector<Nf2Entry>> nf2_by_first_;
    std::vector<std::vector<Nf2Entry>> nf2_by_second_;
    std::vector<std::vector<Nf3Entry>> nf3_by_sub_;
    std::vector<std::vector<Nf4ByFiller>> nf4_by_filler_;
    std::vector<std::vector<Nf4ByRole>> nf4_by_role_;
    std::vector<std::vector<std::pair<RoleId, NormAxiomId>>> nf5_by_sub_;
    std::vector<std::vector<Nf6Entry>> nf6_by_first_;
    std::vector<std::vector<Nf6Entry>> nf6_by_second_;

    std::unordered_map<uint64_t, std::vector<std::pair<ConceptId, AssertionId>>>
        exsubs_by_source_role_;
    std::unordered_map<uint64_t, std::vector<std::pair<ConceptId, AssertionId>>>
        exsubs_by_target_role_;
};

}  // namespace

std::optional<AssertionId> ClosureTrace::find_subs(ConceptId sub, ConceptId sup) const {
    auto it = subs_ids.find(pack2(sub, sup));
    if (it == subs_ids.end()) return std::nullopt;
    return it->second;
}

std::optional<AssertionId> ClosureTrace::find_exsubs(ConceptId sub, RoleId r,
                                                     ConceptId sup) const {
    auto it = exsubs_ids.find(pack3(sub, r, sup));
    if (it == exsubs_ids.end()) return std::nullopt;
    return it->second;
}

ClosureTrace classify(const NormalizedTBox& t) { return Classifier(t).run(); }

bool holds(const ClosureTrace& c, ConceptId sub, ConceptId sup) {
    if (sub == sup || sup == kTop) return true;
    return c.find_subs(sub, sup).has_value();
}

}  // namespace elpin
