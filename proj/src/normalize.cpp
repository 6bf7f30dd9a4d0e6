#include "elpin/normalize.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace elpin {

namespace {

bool is_name_like(const ConceptExpr& e) {
    return e.kind == ConceptExpr::Kind::Top || e.kind == ConceptExpr::Kind::Name;
}

class Normalizer {
public:
    explicit Normalizer(const Ontology& o) : src_(o) { out_.symbols = o.symbols; }

    NormalizedTBox run() {
        for (const SourceAxiom& ax : src_.axioms) {
            cur_origin_ = ax.id;
            switch (ax.kind) {
                case SourceAxiom::Kind::Gci:
                    gci(*ax.lhs, *ax.rhs);
                    break;
                case SourceAxiom::Kind::Equiv:
                    gci(*ax.lhs, *ax.rhs);
                    gci(*ax.rhs, *ax.lhs);
                    break;
                case SourceAxiom::Kind::RoleInc:
                    role_inclusion(ax);
                    break;
            }
        }
        return std::move(out_);
    }

private:
    void gci(const ConceptExpr& lhs, const ConceptExpr& rhs) {
        // Split conjunctions on the right first: X <= A and B.
        if (rhs.kind == ConceptExpr::Kind::Conj) {
            gci(lhs, *rhs.left);
            gci(lhs, *rhs.right);
            return;
        }
        if (rhs.kind == ConceptExpr::Kind::Exists) {
            ConceptId l = name_of_neg(lhs);
            ConceptId f = name_of_pos(*rhs.right);
            emit_nf3(l, rhs.role, f);
            return;
        }
        // rhs is a name or top.
        ConceptId sup = rhs.name;
        switch (lhs.kind) {
            case ConceptExpr::Kind::Top:
            case ConceptExpr::Kind::Name:
                emit_nf1(lhs.name, sup);
                return;
            case ConceptExpr::Kind::Exists: {
                ConceptId f = name_of_neg(*lhs.right);
                emit_nf4(lhs.role, f, sup);
                return;
            }
            case ConceptExpr::Kind::Conj: {
                ConceptId a = name_of_neg(*lhs.left);
                ConceptId b = name_of_neg(*lhs.right);
                emit_nf2(a, b, sup);
                return;
            }
        }
    }

    // Names a subexpression in negative (left-hand) position: X <= F.
    ConceptId name_of_neg(const ConceptExpr& e) {
        if (is_name_like(e)) return e.name;
        ConceptId f = fresh_concept();
        ConceptExpr fe;
        fe.kind = ConceptExpr::Kind::Name;
        fe.name = f;
        gci(e, fe);
        return f;
    }

    // Names a subexpression in positive (right-hand) position: F <= X.
    ConceptId name_of_pos(const ConceptExpr& e) {
        if (is_name_like(e)) return e.name;
        ConceptId f = fresh_concept();
        ConceptExpr fe;
        fe.kind = ConceptExpr::Kind::Name;
        fe.name = f;
        gci(fe, e);
        return f;
    }

    void role_inclusion(const SourceAxiom& ax) {
        const std::vector<RoleId>& chain = ax.chain;
        if (chain.size() == 1) {
            emit_nf5(chain[0], ax.super);
            return;
        }
        // Fold long chains left to right: r1 o r2 <= u, u o r3 <= ...
        RoleId acc = chain[0];
        for (size_t i = 1; i + 1 < chain.size(); ++i) {
            RoleId f = fresh_role();
            emit_nf6(acc, chain[i], f);
            acc = f;
        }
        emit_nf6(acc, chain.back(), ax.super);
    }

    ConceptId fresh_concept() {
        for (;;) {
            std::string name = "_N" + std::to_string(next_concept_++);
            if (!out_.symbols.has_name(name)) {
                ConceptId id = out_.symbols.intern_concept(name);
                out_.fresh_concepts.push_back(id);
                return id;
            }
        }
    }

    RoleId fresh_role() {
        for (;;) {
            std::string name = "_r" + std::to_string(next_role_++);
            if (!out_.symbols.has_name(name)) {
                RoleId id = out_.symbols.intern_role(name);
                out_.fresh_roles.push_back(id);
                return id;
            }
        }
    }

    NormalAxiom& emit(NormalForm form) {
        NormalAxiom ax;
        ax.id = static_cast<NormAxiomId>(out_.axioms.size());
        ax.form = form;
        out_.axioms.push_back(ax);
        out_.origin.push_back({cur_origin_});
        return out_.axioms.back();
    }

    void emit_nf1(ConceptId a, ConceptId b) {
        NormalAxiom& ax = emit(NormalForm::NF1);
        ax.sub = a;
        ax.sup = b;
    }
    void emit_nf2(ConceptId a, ConceptId b, ConceptId c) {
        NormalAxiom& ax = emit(NormalForm::NF2);
        ax.sub = a;
        ax.sub2 = b;
        ax.sup = c;
    }
    void emit_nf3(ConceptId a, RoleId r, ConceptId b) {
        NormalAxiom& ax = emit(NormalForm::NF3);
        ax.sub = a;
        ax.role = r;
        ax.sup = b;
    }
    void emit_nf4(RoleId r, ConceptId a, ConceptId b) {
        NormalAxiom& ax = emit(NormalForm::NF4);
        ax.role = r;
        ax.sub = a;
        ax.sup = b;
    }
    void emit_nf5(RoleId r, RoleId s) {
        NormalAxiom& ax = emit(NormalForm::NF5);
        ax.role = r;
        ax.super_role = s;
    }
    void emit_nf6(RoleId r1, RoleId r2, RoleId s) {
        NormalAxiom& ax = emit(NormalForm::NF6);
        ax.role = r1;
        ax.role2 = r2;
        ax.super_role = s;
    }

    const Ontology& src_;
    NormalizedTBox out_;
    AxiomId cur_origin_ = -1;
    int next_concept_ = 0;
    int next_role_ = 0;
};

}  // namespace

NormalizedTBox normalize(const Ontology& o) { return Normalizer(o).run(); }

std::vector<AxiomId> explain_origin(const NormalizedTBox& t, std::span<const NormAxiomId> ids) {
    std::vector<AxiomId> out;
    for (NormAxiomId id : ids) {
        if (id < 0 || id >= static_cast<NormAxiomId>(t.axioms.size())) {
            throw std::out_of_range("normalized axiom id out of range");
        }
        out.insert(out.end(), t.origin[id].begin(), t.origin[id].end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string render_normal_axiom(const NormalizedTBox& t, NormAxiomId id) {
    if (id < 0 || id >= static_cast<NormAxiomId>(t.axioms.size())) {
        throw std::out_of_range("normalized axiom id out of range");
    }
    const NormalAxiom& ax = t.axioms[id];
    const SymbolTable& sy = t.symbols;
    auto cname = [&](ConceptId c) -> const std::string& { return sy.concept_name(c); };
    switch (ax.form) {
        case NormalForm::NF1:
            return cname(ax.sub) + " <= " + cname(ax.sup);
        case NormalForm::NF2:
            return cname(ax.sub) + " and " + cname(ax.sub2) + " <= " + cname(ax.sup);
        case NormalForm::NF3:
            return cname(ax.sub) + " <= (" + sy.role_name(ax.role) + " some " + cname(ax.sup) + ")";
        case NormalForm::NF4:
            return "(" + sy.role_name(ax.role) + " some " + cname(ax.sub) + ") <= " + cname(ax.sup);
        case NormalForm::NF5:
            return sy.role_name(ax.role) + " <= " + sy.role_name(ax.super_role);
        case NormalForm::NF6:
            return sy.role_name(ax.role) + " o " + sy.role_name(ax.role2) + " <= " +
                   sy.role_name(ax.super_role);
    }
    throw std::logic_error("bad normal form");
}

}  // namespace elpin
