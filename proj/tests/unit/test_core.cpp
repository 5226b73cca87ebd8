#include "random_diagrams.hpp"

#include "riskrjt/config_index.hpp"
#include "riskrjt/diagram.hpp"
#include "riskrjt/diagram_io.hpp"
#include "riskrjt/generators.hpp"
#include "riskrjt/strategy.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace riskrjt;

namespace {

bool has_rule(const std::vector<Violation>& v, const std::string& rule) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.rule == rule; });
}

}  // namespace

TEST_SUITE("id-core") {
    TEST_CASE("config indexer is a bijection with the last digit fastest") {
        ConfigIndexer ix({NodeId{0u}, NodeId{1u}, NodeId{2u}}, {2, 3, 2});
        CHECK(ix.total() == 12);
        CHECK(ix.strides()[0] == 6);
        CHECK(ix.strides()[2] == 1);
        const std::vector<int> t{1, 2, 0};
        CHECK(ix.index(t) == 10);
        for (std::uint64_t k = 0; k < ix.total(); ++k) {
            auto digits = ix.decode(k);
            CHECK(ix.index(digits) == k);
            for (std::size_t p = 0; p < 3; ++p) CHECK(ix.digit(k, p) == digits[p]);
        }
        const std::vector<int> bad{2, 0, 0};
        CHECK_THROWS_AS((void)ix.index(bad), std::out_of_range);
        CHECK(ConfigIndexer(std::vector<std::size_t>{}).total() == 1);
    }

    TEST_CASE("builder and validator") {
        auto d = DiagramBuilder()
                     .chance("A", {"a0", "a1"}, {}, {0.3, 0.7})
                     .decision("D", {"x", "y"}, {"A"})
                     .value("V", {"lo", "hi"}, {"D"}, {1, 0, 0, 1}, {-1, 2})
                     .build();
        CHECK(validate_diagram(d).empty());
        CHECK(d.probability(d.id("A"), 0, 1) == doctest::Approx(0.7));
        CHECK(d.state_index(d.id("D"), "y") == 1);
        CHECK_THROWS_AS((void)d.id("Z"), Error);
        CHECK_THROWS_AS((void)d.state_index(d.id("A"), "zz"), Error);

        auto bad_sum = DiagramBuilder().chance("A", {"a", "b"}, {}, {0.3, 0.6}).build();
        CHECK(has_rule(validate_diagram(bad_sum), "cpt-row-sum"));
        CHECK(validate_diagram(renormalized(bad_sum)).empty());

        auto bad_size = DiagramBuilder().chance("A", {"a", "b"}, {}, {1.0}).build();
        CHECK(has_rule(validate_diagram(bad_size), "cpt-size"));

        auto cyc = DiagramBuilder()
                       .chance("A", {"a", "b"}, {"B"}, {1, 0, 0, 1})
                       .chance("B", {"a", "b"}, {"A"}, {1, 0, 0, 1})
                       .build();
        const auto v = validate_diagram(cyc);
        REQUIRE(has_rule(v, "cycle"));
        CHECK_THROWS_AS(topological_order(cyc), Error);

        auto from_value = DiagramBuilder()
                              .value("V", {"u"}, {}, {1.0}, {0.0})
                              .chance("A", {"a"}, {"V"}, {1.0})
                              .build();
        CHECK(has_rule(validate_diagram(from_value), "value-parent"));

        CHECK_THROWS_AS(DiagramBuilder().chance("A", {"a"}, {"nope"}, {1.0}).build(), Error);
        CHECK_THROWS_AS(DiagramBuilder().chance("A", {"a"}, {}, {1.0}).chance("A", {"a"}, {}, {1.0}).build(), Error);
    }

    TEST_CASE("topological order keeps declaration order when possible") {
        auto d = DiagramBuilder()
                     .chance("B", {"b"}, {"A"}, {1.0})
                     .chance("A", {"a"}, {}, {1.0})
                     .chance("C", {"c"}, {}, {1.0})
                     .build();
        auto order = topological_order(d);
        REQUIRE(order.size() == 3);
        CHECK(d.name(order[0]) == "A");
        CHECK(d.name(order[1]) == "B");
        CHECK(d.name(order[2]) == "C");
        CHECK(is_topological_order(d, order));
        std::vector<NodeId> wrong{d.id("B"), d.id("A"), d.id("C")};
        CHECK_FALSE(is_topological_order(d, wrong));
        CHECK(parse_node_list(d, "C, A") == std::vector<NodeId>{d.id("C"), d.id("A")});
    }

    TEST_CASE("diagram JSON round trip") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto d = testing::random_diagram(seed);
            CHECK(read_diagram(write_diagram(d)) == d);
        }
        const auto pig = gen_pigfarm({});
        CHECK(read_diagram(write_diagram(pig)) == pig);
        CHECK_THROWS_AS(read_diagram("{\"nodes\": 3}"), Error);
        CHECK_THROWS_AS(read_diagram("not json"), Error);
    }

    TEST_CASE("strategy counts") {
        PigFarmSpec pig;
        CHECK(strategy_count(gen_pigfarm(pig)) == 64);
        pig.periods = 1;
        CHECK(strategy_count(gen_pigfarm(pig)) == 4);
        NMonitoringSpec mon;
        CHECK(strategy_count(gen_nmonitoring(mon)) == 16);

        Caps tight;
        tight.strategies = 10;
        pig.periods = 3;
        CHECK_THROWS_AS(enumerate_strategies(gen_pigfarm(pig), tight), CapExceeded);
    }

    TEST_CASE("strategy space enumerates each strategy once in lexicographic order") {
        const auto d = gen_pigfarm({});
        const auto space = enumerate_strategies(d);
        std::set<Strategy> seen;
        Strategy prev;
        std::uint64_t k = 0;
        for (const auto& s : space) {
            check_feasible(d, s);
            if (k > 0) CHECK(prev < s);
            CHECK(space.index_of(s) == k);
            seen.insert(s);
            prev = s;
            ++k;
        }
        CHECK(seen.size() == 64);

        Strategy broken = constant_strategy(d, 0);
        broken.rules[0].choice[0] = 5;
        CHECK_THROWS_AS(check_feasible(d, broken), Error);
        broken.rules.pop_back();
        CHECK_THROWS_AS(check_feasible(d, broken), Error);
    }

    TEST_CASE("strategy JSON round trip") {
        const auto d = gen_pigfarm({});
        const auto space = enumerate_strategies(d);
        for (std::uint64_t k = 0; k < space.size(); k += 7) {
            const auto s = space.at(k);
            CHECK(strategy_from_json(d, strategy_to_json(d, s)) == s);
        }
    }
}
