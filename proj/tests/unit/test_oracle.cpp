#include "brute_force.hpp"
#include "random_diagrams.hpp"

#include "riskrjt/generators.hpp"
#include "riskrjt/oracle.hpp"
#include "riskrjt/risk.hpp"
#include "riskrjt/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace riskrjt;

TEST_SUITE("risk") {
    TEST_CASE("predicate grammar") {
        const auto d = gen_pigfarm({});
        const auto p = parse_predicate(d, "H1=ill & D1=treat | H4=ill");
        REQUIRE(p.clauses.size() == 2);
        CHECK(p.clauses[0].size() == 2);
        CHECK(p.scope() == std::vector<NodeId>{d.id("H1"), d.id("D1"), d.id("H4")});
        CHECK(to_string(d, p) == "H1=ill&D1=treat|H4=ill");
        std::vector<int> s(d.size(), 0);
        CHECK_FALSE(p.holds(s));
        s[d.id("H4").index()] = 1;
        CHECK(p.holds(s));
        CHECK_THROWS_AS(parse_predicate(d, ""), Error);
        CHECK_THROWS_AS(parse_predicate(d, "H1"), Error);
        CHECK_THROWS_AS(parse_predicate(d, "H1=sick"), Error);
        CHECK_THROWS_AS(parse_predicate(d, "Q=ill"), Error);
    }

    TEST_CASE("constraint specs") {
        const auto d = gen_pigfarm({});
        const auto c = parse_chance(d, "P(H1=ill|H2=ill|H3=ill|H4=ill)<=0.4@H4");
        CHECK(c.bound == Bound::AtMost);
        CHECK(c.p == 0.4);
        CHECK(c.cluster == d.id("H4"));
        CHECK(parse_chance(d, "P(H4=healthy)>=0.5").bound == Bound::AtLeast);
        CHECK_THROWS_AS(parse_chance(d, "H4=healthy<=0.5"), Error);
        CHECK_THROWS_AS(parse_chance(d, "P(H4=healthy)<0.5"), Error);
        CHECK_THROWS_AS(parse_chance(d, "P(H4=healthy)<=1.5"), Error);
        CHECK_THROWS_AS(parse_chance(d, "P(H4=healthy)<=abc"), Error);

        const auto l = parse_logical(d, "D1=treat&D2=treat");
        CHECK(l.forbidden.clauses.size() == 1);
        CHECK_FALSE(l.cluster);

        const auto b = parse_budget(d, nlohmann::json::parse(R"({"costs": {"D1": {"treat": 100}, "D2": {"treat": 100}},
                                                                 "limit": 100})"));
        CHECK(b.limit == 100);
        std::vector<int> s(d.size(), 1);
        CHECK_FALSE(b.exceeds(s));
        s[d.id("D1").index()] = 0;
        s[d.id("D2").index()] = 0;
        CHECK(b.cost(s) == 200);
        CHECK(b.exceeds(s));
        CHECK_THROWS_AS(parse_budget(d, nlohmann::json::parse(R"({"costs": {}, "limit": 1})")), Error);
        CHECK_THROWS_AS(parse_budget(d, nlohmann::json::parse(R"({"costs": {"D1": {"zap": 1}}, "limit": 1})")), Error);

        CHECK(parse_objective("meu").kind == Objective::Kind::Meu);
        CHECK(parse_objective("cvar:0.15").alpha == 0.15);
        CHECK_THROWS_AS(parse_objective("cvar:0"), Error);
        CHECK_THROWS_AS(parse_objective("mean"), Error);
        const auto cb = parse_cvar_bound("0.2:500");
        CHECK(cb.alpha == 0.2);
        CHECK(cb.threshold == 500);
        CHECK_THROWS_AS(parse_cvar_bound("0.2"), Error);
    }
}

TEST_SUITE("sweep") {
    TEST_CASE("serial and parallel sweeps give identical vectors") {
        auto make = []() -> ScoreFn {
            return [](std::uint64_t i) {
                if (i % 17 == 3) return std::numeric_limits<double>::quiet_NaN();
                return std::sin(static_cast<double>(i)) * 100.0;
            };
        };
        const auto serial = sweep(5000, ExecutionPolicy::Serial, make);
        const auto parallel = sweep(5000, ExecutionPolicy::Parallel, make, 4);
        REQUIRE(serial.size() == parallel.size());
        for (std::size_t k = 0; k < serial.size(); ++k) {
            if (std::isnan(serial[k])) {
                CHECK(std::isnan(parallel[k]));
            } else {
                CHECK(serial[k] == parallel[k]);
            }
        }
    }

    TEST_CASE("exceptions from workers propagate") {
        auto make = []() -> ScoreFn {
            return [](std::uint64_t i) -> double {
                if (i == 77) throw Error("boom");
                return 0.0;
            };
        };
        CHECK_THROWS_AS(sweep(200, ExecutionPolicy::Parallel, make, 4), Error);
        CHECK_THROWS_AS(sweep(200, ExecutionPolicy::Serial, make), Error);
    }

    TEST_CASE("best index and ties") {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const std::vector<double> scores{1.0, nan, 3.0, 3.0 + 1e-12, 2.0, 3.0 - 1e-6};
        const auto b = select_best(scores);
        REQUIRE(b.index);
        CHECK(*b.index == 2);
        CHECK(b.ties == std::vector<std::uint64_t>{2, 3});
        CHECK_FALSE(select_best(std::vector<double>{nan, nan}).index);
        CHECK_FALSE(select_best(std::vector<double>{}).index);
    }
}

TEST_SUITE("oracle") {
    TEST_CASE("oracle maximum equals an independent brute-force maximum") {
        for (std::uint64_t seed = 1; seed <= 25; ++seed) {
            testing::RandomDiagramSpec spec;
            spec.max_nodes = 7;
            spec.max_parents = 2;
            const auto d = testing::random_diagram(seed, spec);
            if (strategy_count(d) > 4096) continue;
            const auto r = oracle_optimize(d, {});
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& s : enumerate_strategies(d)) best = std::max(best, testing::brute_expected(d, s));
            REQUIRE(r.feasible);
            CHECK(std::abs(r.objective - best) < 1e-9);
            CHECK(r.evaluated == strategy_count(d));
        }
    }

    TEST_CASE("pig farm sweep is the same serially and in parallel") {
        const auto d = gen_pigfarm({});
        OracleOptions serial;
        serial.policy = ExecutionPolicy::Serial;
        serial.keep_log = true;
        OracleOptions parallel;
        parallel.threads = 4;
        for (const char* obj : {"meu", "cvar:0.15", "cvar:1"}) {
            Problem prob;
            prob.objective = parse_objective(obj);
            prob.constraints.push_back(parse_chance(d, "P(H1=ill|H2=ill|H3=ill|H4=ill)<=0.4"));
            const auto a = oracle_optimize(d, prob, serial);
            const auto b = oracle_optimize(d, prob, parallel);
            CAPTURE(obj);
            REQUIRE(a.feasible);
            CHECK(a.objective == b.objective);
            CHECK(a.best == b.best);
            CHECK(a.argmax == b.argmax);
            CHECK(a.log.size() == 64);
            CHECK(b.log.empty());
        }
    }

    TEST_CASE("constraint semantics in the evaluation") {
        const auto d = gen_pigfarm({});
        const auto never = constant_strategy(d, 1);
        Problem prob;
        prob.constraints.push_back(parse_chance(d, "P(H4=ill)<=0.4"));
        prob.constraints.push_back(parse_logical(d, "D1=treat"));
        prob.constraints.push_back(parse_budget(d, nlohmann::json::parse(R"({"costs": {"D1": {"treat": 100}}, "limit": 0})")));
        prob.constraints.push_back(parse_cvar_bound("1:600"));
        const auto e = evaluate_problem(d, never, prob);
        REQUIRE(e.constraint_values.size() == 4);
        CHECK(e.constraint_values[0] == doctest::Approx(1.0 - 0.5277));
        CHECK(e.constraint_values[1] == 0.0);
        CHECK(e.constraint_values[2] == 0.0);
        CHECK(e.constraint_values[3] == doctest::Approx(669.39));
        CHECK_FALSE(e.feasible);  // P(H4=ill) = 0.4723
        CHECK(e.objective == doctest::Approx(669.39));

        Problem ok;
        ok.constraints.push_back(parse_logical(d, "D1=treat"));
        ok.constraints.push_back(parse_cvar_bound("1:669.39"));
        CHECK(evaluate_problem(d, never, ok).feasible);
        ok.constraints.push_back(parse_cvar_bound("1:669.4"));
        CHECK_FALSE(evaluate_problem(d, never, ok).feasible);

        Problem impossible;
        impossible.constraints.push_back(parse_chance(d, "P(H1=ill)<=0.05"));
        const auto r = oracle_optimize(d, impossible);
        CHECK_FALSE(r.feasible);
        CHECK(r.evaluated == 64);
    }
}
