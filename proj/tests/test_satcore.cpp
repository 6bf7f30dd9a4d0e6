#include <random>

#include "doctest.h"
#include "elpin/satcore.hpp"
#include "oracles.hpp"

using namespace elpin;
using sat::Lit;
using sat::mk_lit;

namespace {

// Bridges DIMACS-style signed ints to solver literals.
std::vector<Lit> lits(const std::vector<int>& ls) {
    std::vector<Lit> out;
    for (int l : ls) out.push_back(mk_lit(std::abs(l), l > 0));
    return out;
}

void add(sat::Solver& s, const std::vector<int>& clause) { s.add_clause(lits(clause)); }

std::vector<test::CnfClause> random_cnf(std::mt19937& rng, int n_vars, int n_clauses,
                                        int max_len) {
    std::uniform_int_distribution<int> len_d(1, max_len);
    std::uniform_int_distribution<int> var_d(1, n_vars);
    std::uniform_int_distribution<int> sign_d(0, 1);
    std::vector<test::CnfClause> out;
    for (int i = 0; i < n_clauses; ++i) {
        test::CnfClause cl;
        int len = len_d(rng);
        for (int k = 0; k < len; ++k) cl.push_back(var_d(rng) * (sign_d(rng) ? 1 : -1));
        out.push_back(cl);
    }
    return out;
}

}  // namespace

TEST_CASE("empty clause makes everything unsat with an empty core") {
    sat::Solver s(3);
    s.add_clause(std::span<const Lit>{});
    auto r = s.solve_under(lits({1, 2}));
    CHECK(!r.is_sat());
    CHECK(r.core.empty());
}

TEST_CASE("no clauses, one assumption") {
    sat::Solver s(2);
    auto r = s.solve_under(lits({1}));
    REQUIRE(r.is_sat());
    CHECK(r.model[1] == 1);
}

TEST_CASE("contradictory units are unsat independent of assumptions") {
    sat::Solver s(2);
    add(s, {1});
    add(s, {-1});
    auto r = s.solve_under(lits({2}));
    CHECK(!r.is_sat());
    CHECK(r.core.empty());
}

TEST_CASE("failed assumption against a root unit yields a singleton core") {
    sat::Solver s(2);
    add(s, {-1});
    auto r = s.solve_under(lits({1}));
    REQUIRE(!r.is_sat());
    REQUIRE(r.core.size() == 1);
    CHECK(r.core[0] == mk_lit(1, true));
}

TEST_CASE("contradictory assumptions core contains both") {
    sat::Solver s(2);
    auto r = s.solve_under(lits({1, 2, -1}));
    REQUIRE(!r.is_sat());
    CHECK(r.core.size() == 2);
}

TEST_CASE("literal bounds are checked") {
    sat::Solver s(2);
    CHECK_THROWS_AS(add(s, {3}), std::out_of_range);
    std::vector<Lit> bad{mk_lit(3, true)};
    CHECK_THROWS_AS(s.solve_under(bad), std::out_of_range);
}

TEST_CASE("solver is reusable across solves") {
    sat::Solver s(3);
    add(s, {-1, 2});
    add(s, {-2, 3});
    auto r1 = s.solve_under(lits({1}));
    REQUIRE(r1.is_sat());
    CHECK(r1.model[3] == 1);
    auto r2 = s.solve_under(lits({1, -3}));
    REQUIRE(!r2.is_sat());
    auto r3 = s.solve_under(lits({-3}));
    CHECK(r3.is_sat());
    auto r4 = s.solve_under();
    CHECK(r4.is_sat());
}

TEST_CASE("deterministic repeat runs") {
    auto run = [] {
        sat::Solver s(6);
        add(s, {1, 2, 3});
        add(s, {-1, 4});
        add(s, {-2, -4});
        add(s, {5, 6});
        auto r = s.solve_under(lits({-3}));
        REQUIRE(r.is_sat());
        return r.model;
    };
    CHECK(run() == run());
}

TEST_CASE("core soundness: re-solving under the core stays unsat") {
    std::mt19937 rng(7);
    int checked = 0;
    for (int iter = 0; iter < 400; ++iter) {
        int n_vars = 6;
        auto cnf = random_cnf(rng, n_vars, 10, 3);
        std::vector<int> assumptions;
        std::uniform_int_distribution<int> sign_d(0, 1);
        for (int v = 1; v <= n_vars; ++v) {
            if (sign_d(rng)) assumptions.push_back(sign_d(rng) ? v : -v);
        }
        sat::Solver s(n_vars);
        for (const auto& cl : cnf) add(s, cl);
        auto r = s.solve_under(lits(assumptions));
        if (r.is_sat()) continue;
        ++checked;
        auto core_ints = r.core;
        auto r2 = s.solve_under(core_ints);
        CHECK(!r2.is_sat());
        for (Lit l : r.core) {
            CHECK(std::find(assumptions.begin(), assumptions.end(),
                            (sat::is_pos(l) ? 1 : -1) * sat::var_of(l)) != assumptions.end());
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("exhaustive agreement with the truth table on small formulas") {
    // All 81 clause shapes over 4 variables (each variable positive,
    // negative, or absent), paired exhaustively.
    std::vector<test::CnfClause> shapes;
    for (int code = 0; code < 81; ++code) {
        test::CnfClause cl;
        int c = code;
        for (int v = 1; v <= 4; ++v) {
            int d = c % 3;
            c /= 3;
            if (d == 1) cl.push_back(v);
            if (d == 2) cl.push_back(-v);
        }
        shapes.push_back(cl);
    }
    for (size_t i = 0; i < shapes.size(); ++i) {
        for (size_t j = i; j < shapes.size(); ++j) {
            std::vector<test::CnfClause> cnf{shapes[i], shapes[j]};
            sat::Solver s(4);
            add(s, shapes[i]);
            add(s, shapes[j]);
            bool expect = test::tt_satisfiable(4, cnf);
            CHECK(s.solve_under().is_sat() == expect);
        }
    }
}

TEST_CASE("random instances against the DPLL oracle, with assumptions") {
    std::mt19937 rng(42);
    for (int iter = 0; iter < 1500; ++iter) {
        int n_vars = 3 + iter % 10;
        auto cnf = random_cnf(rng, n_vars, 4 + iter % 18, 3);
        std::vector<int> assumptions;
        std::uniform_int_distribution<int> d(0, 5);
        for (int v = 1; v <= n_vars; ++v) {
            int k = d(rng);
            if (k == 0) assumptions.push_back(v);
            if (k == 1) assumptions.push_back(-v);
        }
        sat::Solver s(n_vars);
        for (const auto& cl : cnf) add(s, cl);
        bool expect = test::dpll_satisfiable(n_vars, cnf, assumptions);
        auto r = s.solve_under(lits(assumptions));
        CAPTURE(iter);
        CHECK(r.is_sat() == expect);
        if (r.is_sat()) {
            // The model must satisfy every clause and assumption.
            for (const auto& cl : cnf) {
                bool sat_cl = false;
                for (int l : cl) {
                    if (r.model[std::abs(l)] == (l > 0 ? 1 : 0)) sat_cl = true;
                }
                CHECK(sat_cl);
            }
            for (int a : assumptions) CHECK(r.model[std::abs(a)] == (a > 0 ? 1 : 0));
        }
    }
}

TEST_CASE("Horn inputs are decided by propagation alone") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 200; ++iter) {
        int n_vars = 12;
        std::vector<test::CnfClause> cnf;
        std::uniform_int_distribution<int> var_d(1, n_vars);
        std::uniform_int_distribution<int> len_d(1, 4);
        std::uniform_int_distribution<int> head_d(0, 3);
        for (int i = 0; i < 20; ++i) {
            test::CnfClause cl;
            int len = len_d(rng);
            for (int k = 0; k < len; ++k) cl.push_back(-var_d(rng));
            if (head_d(rng) != 0) cl[0] = -cl[0];  // at most one positive literal
            cnf.push_back(cl);
        }
        sat::Solver s(n_vars);
        for (const auto& cl : cnf) add(s, cl);
        std::vector<int> assumptions;
        for (int v = 1; v <= n_vars; ++v) {
            if (var_d(rng) <= 4) assumptions.push_back(v);
        }
        s.solve_under(lits(assumptions));
        CHECK(s.stats().search_conflicts == 0);
    }
}
