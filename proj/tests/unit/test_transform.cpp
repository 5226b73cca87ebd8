#include "brute_force.hpp"
#include "random_diagrams.hpp"

#include "riskrjt/generators.hpp"
#include "riskrjt/inference.hpp"
#include "riskrjt/transform.hpp"

#include <doctest.h>

using namespace riskrjt;

TEST_SUITE("transform") {
    TEST_CASE("two value nodes merge into tuple states with summed utilities") {
        auto d = DiagramBuilder()
                     .chance("A", {"a0", "a1"}, {}, {0.4, 0.6})
                     .decision("D", {"x", "y"}, {"A"})
                     .value("U", {"u0", "u1"}, {"A"}, {1, 0, 0, 1}, {0, 1})
                     .value("W", {"w0", "w1"}, {"D"}, {0.5, 0.5, 0.2, 0.8}, {0, 2})
                     .build();
        const auto r = merge_value_nodes(d);
        const auto& m = r.diagram;
        CHECK(validate_diagram(m).empty());
        REQUIRE(m.size() == 3);
        const NodeId v = m.id("Vbar");
        CHECK(m.kind(v) == NodeKind::Value);
        CHECK(m.utility(v) == std::vector<double>{0, 2, 1, 3});
        CHECK(m.state_count(v) == 4);
        REQUIRE(m.parents(v).size() == 2);
        CHECK(m.name(m.parents(v)[0]) == "A");
        CHECK(m.name(m.parents(v)[1]) == "D");
        // P(U=u1, W=w1 | A=a1, D=y) = 1 * 0.8
        CHECK(m.probability(v, 3, 3) == doctest::Approx(0.8));
        CHECK(r.map.components == std::vector<std::string>{"U", "W"});
        CHECK(r.map.component_states(2) == std::vector<int>{1, 0});
        const std::vector<int> tuple{1, 1};
        CHECK(r.map.merged_state(tuple) == 3);
    }

    TEST_CASE("a single value node is left as is") {
        auto d = DiagramBuilder()
                     .chance("A", {"a0", "a1"}, {}, {0.4, 0.6})
                     .value("V", {"lo", "hi"}, {"A"}, {1, 0, 0, 1}, {3, 5})
                     .build();
        const auto r = merge_value_nodes(d);
        CHECK(r.diagram == d);
        CHECK(r.map.merged == "V");
    }

    TEST_CASE("merge errors") {
        auto none = DiagramBuilder().chance("A", {"a"}, {}, {1.0}).build();
        CHECK_THROWS_AS(merge_value_nodes(none), Error);

        PigFarmSpec spec;
        spec.periods = 6;
        MergeOptions tight;
        tight.state_cap = 64;
        CHECK_THROWS_AS(merge_value_nodes(gen_pigfarm(spec), tight), CapExceeded);
    }

    TEST_CASE("merged pig farm keeps the never-treat distribution") {
        const auto d = gen_pigfarm({});
        const auto m = merge_value_nodes(d).diagram;
        CHECK(m.size() == 11);
        CHECK(m.state_count(m.id("Vbar")) == 16);
        const auto never = constant_strategy(d, 1);
        const auto a = testing::brute_distribution(d, never);
        const auto b = testing::brute_distribution(m, constant_strategy(m, 1));
        REQUIRE(a.size() == b.size());
        for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
            CHECK(ia->first == ib->first);
            CHECK(ia->second == doctest::Approx(ib->second).epsilon(1e-12));
        }
    }

    TEST_CASE("merge preserves utility distributions on random diagrams") {
        for (std::uint64_t seed = 100; seed < 140; ++seed) {
            const auto d = testing::random_diagram(seed);
            const auto m = merge_value_nodes(d).diagram;
            REQUIRE(validate_diagram(m).empty());
            UniformSource rng(seed);
            for (int k = 0; k < 3; ++k) {
                const auto s = testing::random_strategy(d, rng);
                const auto a = evaluate_strategy(d, s);
                const auto b = evaluate_strategy(m, s);
                REQUIRE(a.size() == b.size());
                for (std::size_t i = 0; i < a.size(); ++i) {
                    CHECK(a.atoms()[i].utility == b.atoms()[i].utility);
                    CHECK(std::abs(a.atoms()[i].probability - b.atoms()[i].probability) <= 1e-12);
                }
            }
        }
    }
}
