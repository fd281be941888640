#include <doctest.h>

#include "oracles.hpp"

#include <pp10/proof.hpp>
#include <pp10/sat.hpp>

#include <random>
#include <set>
#include <sstream>

using namespace pp10;
using sat::Solver;
using sat::Status;

namespace {

Cnf pigeonhole(int pigeons, int holes)
{
    auto var = [&](int p, int h) { return p * holes + h + 1; };
    Cnf cnf(pigeons * holes);
    for (int p = 0; p < pigeons; ++p) {
        Clause c;
        for (int h = 0; h < holes; ++h)
            c.push_back(Literal::positive(var(p, h)));
        cnf.push_back(c, Provenance::External);
    }
    for (int h = 0; h < holes; ++h)
        for (int p = 0; p < pigeons; ++p)
            for (int q = p + 1; q < pigeons; ++q) {
                Clause c{Literal::negative(var(p, h)), Literal::negative(var(q, h))};
                cnf.push_back(c, Provenance::External);
            }
    return cnf;
}

Cnf random_instance(std::mt19937_64 &rng, int max_vars)
{
    int n = std::uniform_int_distribution<int>(3, max_vars)(rng);
    double ratio = std::uniform_real_distribution<double>(2.5, 6.0)(rng);
    auto cnf = oracle::random_cnf(rng, n, static_cast<int>(ratio * n), 2, 4);
    if (std::uniform_int_distribution<int>(0, 9)(rng) == 0) {
        Literal unit(std::uniform_int_distribution<int>(1, n)(rng));
        cnf.push_back(std::span(&unit, 1), Provenance::External);
    }
    return cnf;
}

std::uint32_t to_mask(const std::vector<bool> &model, int n)
{
    std::uint32_t m = 0;
    for (int v = 1; v <= n; ++v)
        if (model[static_cast<std::size_t>(v)])
            m |= 1u << (v - 1);
    return m;
}

Cnf with_units(Cnf cnf, std::span<const Literal> units)
{
    for (auto l : units)
        cnf.push_back(std::span(&l, 1), Provenance::External);
    return cnf;
}

} // namespace

TEST_CASE("solver agrees with the truth table on 10000 random formulas")
{
    std::mt19937_64 rng(1);
    int sat_count = 0, unsat_count = 0;
    for (int i = 0; i < 10000; ++i) {
        auto cnf = random_instance(rng, 20);
        bool expected = false;
        for (std::uint32_t m = 0; m < (1u << cnf.num_vars()) && !expected; ++m)
            expected = oracle::eval(cnf, m);

        std::ostringstream proof;
        Solver s;
        s.attach_proof(proof);
        s.load(cnf);
        auto r = s.solve();
        CAPTURE(i);
        if (expected) {
            ++sat_count;
            REQUIRE(r.status == Status::Sat);
            REQUIRE(oracle::eval(cnf, to_mask(r.model, cnf.num_vars())));
        }
        else {
            ++unsat_count;
            REQUIRE(r.status == Status::Unsat);
            auto report = proof::check_drup(cnf, proof::parse_drup(proof.str()));
            INFO(report.reason);
            REQUIRE(report.verified());
        }
    }
    MESSAGE("sat " << sat_count << " unsat " << unsat_count);
    CHECK(sat_count > 1000);
    CHECK(unsat_count > 1000);
}

TEST_CASE("assumptions and cores")
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 1500; ++i) {
        auto cnf = random_instance(rng, 14);
        int n = cnf.num_vars();
        Solver s;
        s.load(cnf);
        // the same solver answers several assumption sets in a row
        for (int round = 0; round < 4; ++round) {
            std::vector<Literal> assumptions;
            int k = std::uniform_int_distribution<int>(1, 4)(rng);
            for (int a = 0; a < k; ++a) {
                int v = std::uniform_int_distribution<int>(1, n)(rng);
                assumptions.push_back(std::uniform_int_distribution<int>(0, 1)(rng) ? Literal::positive(v)
                                                                                  : Literal::negative(v));
            }
            auto constrained = with_units(cnf, assumptions);
            bool expected = !oracle::truth_table(constrained).empty();
            auto r = s.solve(assumptions);
            CAPTURE(i);
            CAPTURE(round);
            if (expected) {
                REQUIRE(r.status == Status::Sat);
                REQUIRE(oracle::eval(constrained, to_mask(r.model, n)));
                continue;
            }
            REQUIRE(r.status != Status::Sat);
            if (r.status == Status::Unsat) {
                REQUIRE(oracle::truth_table(cnf).empty());
                continue;
            }
            for (auto l : r.core)
                REQUIRE(std::find(assumptions.begin(), assumptions.end(), l) != assumptions.end());
            REQUIRE(oracle::truth_table(with_units(cnf, r.core)).empty());
        }
    }
}

TEST_CASE("self-blocking enumeration matches the oracle on 2000 formulas")
{
    std::mt19937_64 rng(3);
    std::size_t total_models = 0;
    for (int i = 0; i < 2000; ++i) {
        auto cnf = random_instance(rng, 15);
        int n = cnf.num_vars();
        int k = std::uniform_int_distribution<int>(0, n)(rng);
        std::vector<int> projection;
        for (int v = 1; v <= k; ++v)
            projection.push_back(v);

        std::ostringstream proof;
        auto result = sat::enumerate(cnf, sat::self_blocking_hook(projection), {}, &proof);

        std::set<std::uint32_t> got;
        for (auto &pm : result.models) {
            std::uint32_t m = 0;
            for (auto l : pm)
                if (!l.negated())
                    m |= 1u << (l.var() - 1);
            got.insert(m);
        }
        CAPTURE(i);
        REQUIRE(got.size() == result.models.size());
        REQUIRE(got == oracle::projected_models(cnf, k));
        total_models += got.size();

        // the proof is checked against the formula plus everything injected
        Cnf extended = cnf;
        for (auto &c : result.injected)
            extended.push_back(c, Provenance::Blocking);
        auto report = proof::check_drup(extended, proof::parse_drup(proof.str()));
        INFO(report.reason);
        REQUIRE(report.verified());
    }
    CHECK(total_models > 0);
}

TEST_CASE("callback contract")
{
    Cnf cnf(3);
    Clause c{Literal(1), Literal(2)};
    cnf.push_back(c, Provenance::External);

    sat::EnumerationHook none{{1, 2}, [](const sat::ProjectedModel &, const std::vector<bool> &) {
                                  return std::vector<Clause>{};
                              }};
    CHECK_THROWS_AS(sat::enumerate(cnf, none), sat::CallbackContract);

    sat::EnumerationHook satisfied{{1, 2}, [](const sat::ProjectedModel &pm, const std::vector<bool> &) {
                                       return std::vector<Clause>{Clause{pm[0]}};
                                   }};
    CHECK_THROWS_AS(sat::enumerate(cnf, satisfied), sat::CallbackContract);

    CHECK_THROWS_AS(sat::enumerate(cnf, sat::self_blocking_hook({4})), std::invalid_argument);
}

TEST_CASE("pigeonhole proofs verify")
{
    for (int holes = 2; holes <= 6; ++holes) {
        auto cnf = pigeonhole(holes + 1, holes);
        std::ostringstream proof;
        Solver s;
        s.attach_proof(proof);
        s.load(cnf);
        CHECK(s.solve().status == Status::Unsat);
        std::istringstream in(proof.str());
        CHECK(proof::check_drup(cnf, in).verified());
        CHECK(s.stats().proof_additions > 0);
    }
}

TEST_CASE("resource limits")
{
    auto cnf = pigeonhole(10, 9);
    sat::SolverConfig cfg;
    cfg.conflict_budget = 600;
    Solver s(cfg);
    s.load(cnf);
    CHECK_THROWS_AS(s.solve(), sat::ResourceLimit);
    CHECK(s.stats().conflicts >= 600);
    CHECK(s.stats().conflicts < 600 + 1024);

    sat::SolverConfig timed;
    timed.time_budget_seconds = 0.2;
    Solver t(timed);
    t.load(pigeonhole(12, 11));
    CHECK_THROWS_AS(t.solve(), sat::ResourceLimit);
}

TEST_CASE("same seed, same run")
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        auto cnf = random_instance(rng, 20);
        sat::SolverConfig cfg;
        cfg.random_var_freq = 0.05;
        Solver a(cfg), b(cfg);
        std::ostringstream pa, pb;
        a.attach_proof(pa);
        b.attach_proof(pb);
        a.load(cnf);
        b.load(cnf);
        auto ra = a.solve(), rb = b.solve();
        CHECK(ra.status == rb.status);
        CHECK(ra.model == rb.model);
        CHECK(pa.str() == pb.str());
        CHECK(a.stats().conflicts == b.stats().conflicts);
    }
}

TEST_CASE("proof must be attached first")
{
    Solver s;
    Clause c{Literal(1)};
    s.add_clause(c);
    std::ostringstream out;
    CHECK_THROWS_AS(s.attach_proof(out), std::logic_error);
}

TEST_CASE("edge formulas")
{
    SUBCASE("empty formula")
    {
        Solver s;
        CHECK(s.solve().status == Status::Sat);
    }
    SUBCASE("empty clause")
    {
        Solver s;
        CHECK_FALSE(s.add_clause({}));
        CHECK(s.solve().status == Status::Unsat);
    }
    SUBCASE("tautologies and repeats")
    {
        Cnf cnf(2);
        Clause taut{Literal(1), Literal(-1)}, rep{Literal(2), Literal(2)}, neg{Literal(-2)};
        cnf.push_back(taut, Provenance::External);
        cnf.push_back(rep, Provenance::External);
        Solver s;
        s.load(cnf);
        auto r = s.solve();
        REQUIRE(r.status == Status::Sat);
        CHECK(r.model[2]);
        cnf.push_back(neg, Provenance::External);
        std::ostringstream proof;
        Solver u;
        u.attach_proof(proof);
        u.load(cnf);
        CHECK(u.solve().status == Status::Unsat);
        CHECK(proof::check_drup(cnf, proof::parse_drup(proof.str())).verified());
    }
    SUBCASE("contradictory assumptions")
    {
        Solver s;
        s.reserve_vars(3);
        std::vector<Literal> a{Literal(2), Literal(-2)};
        auto r = s.solve(a);
        CHECK(r.status == Status::UnsatUnderAssumptions);
        CHECK_FALSE(r.core.empty());
        CHECK(s.solve().status == Status::Sat);
    }
}
