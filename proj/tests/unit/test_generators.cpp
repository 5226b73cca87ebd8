#include "riskrjt/diagram_io.hpp"
#include "riskrjt/generators.hpp"
#include "riskrjt/junction_tree.hpp"

#include <doctest.h>

#include <cmath>

using namespace riskrjt;

TEST_SUITE("generators") {
    TEST_CASE("pig farm layout") {
        PigFarmSpec spec;
        spec.periods = 1;
        const auto one = gen_pigfarm(spec);
        REQUIRE(one.size() == 6);
        const char* names[] = {"H1", "T1", "D1", "V1", "H2", "V2"};
        for (std::size_t k = 0; k < 6; ++k) CHECK(one.name(NodeId{k}) == names[k]);
        CHECK(validate_diagram(one).empty());

        const auto three = gen_pigfarm({});
        CHECK(three.size() == 14);
        CHECK(validate_diagram(three).empty());
        const NodeId h2 = three.id("H2");
        REQUIRE(three.parents(h2).size() == 2);
        // P(H2 = healthy | H1 = ill, D1 = treat)
        CHECK(three.probability(h2, 2, 0) == doctest::Approx(0.5));
        CHECK(three.probability(three.id("T1"), 0, 0) == doctest::Approx(0.2));
        CHECK(three.probability(three.id("T1"), 1, 0) == doctest::Approx(0.9));
        CHECK(three.utility(three.id("V4")) == std::vector<double>{1000, 300});
        CHECK(three.utility(three.id("V2")) == std::vector<double>{-100, 0});
        spec.periods = 0;
        CHECK_THROWS_AS(gen_pigfarm(spec), Error);
    }

    TEST_CASE("seeded pig farms are reproducible and perturbed") {
        PigFarmSpec spec;
        spec.seed = 42;
        const auto a = gen_pigfarm(spec);
        const auto b = gen_pigfarm(spec);
        CHECK(a == b);
        CHECK(write_diagram(a) == write_diagram(b));
        CHECK(validate_diagram(a).empty());
        const auto base = gen_pigfarm({});
        CHECK_FALSE(a == base);
        spec.seed = 43;
        CHECK_FALSE(gen_pigfarm(spec) == a);
        for (NodeId v : a.nodes_of(NodeKind::Value)) CHECK(a.utility(v) == base.utility(v));
        // Noise is nonnegative and at most 0.3 before renormalization, so each
        // entry moves by less than 0.3.
        for (NodeId n : a.nodes_of(NodeKind::Chance)) {
            for (std::size_t k = 0; k < a.cpt(n).size(); ++k) CHECK(std::abs(a.cpt(n)[k] - base.cpt(n)[k]) < 0.3);
        }
    }

    TEST_CASE("uniform source is fixed by the seed") {
        UniformSource a(7);
        UniformSource b(7);
        for (int k = 0; k < 100; ++k) {
            const double x = a.next();
            CHECK(x == b.next());
            CHECK(x >= 0.0);
            CHECK(x < 1.0);
        }
        std::mt19937_64 raw(7);
        UniformSource c(7);
        CHECK(c.next() == static_cast<double>(raw() >> 11) * 0x1.0p-53);
    }

    TEST_CASE("n-monitoring layout") {
        for (int n = 1; n <= 4; ++n) {
            NMonitoringSpec spec;
            spec.monitors = n;
            const auto d = gen_nmonitoring(spec);
            CHECK(d.size() == static_cast<std::size_t>(2 * n + 3));
            CHECK(validate_diagram(d).empty());
            CHECK(d.name(NodeId{0u}) == "L");
            CHECK(d.name(NodeId{d.size() - 1}) == "T");
            CHECK(d.parents(d.id("F")).size() == static_cast<std::size_t>(n) + 1);
            CHECK(gen_nmonitoring(spec) == d);
        }
        NMonitoringSpec a;
        NMonitoringSpec b;
        b.seed = 2;
        CHECK_FALSE(gen_nmonitoring(a) == gen_nmonitoring(b));
    }

    TEST_CASE("n-monitoring tables are monotone") {
        NMonitoringSpec spec;
        spec.monitors = 2;
        spec.load_states = 3;
        spec.action_states = 3;
        const auto d = gen_nmonitoring(spec);
        const NodeId f = d.id("F");
        const auto pix = d.parent_indexer(f);
        // Failure is state 0. Raising the load raises it, raising any
        // fortification lowers it.
        for (std::uint64_t c = 0; c < pix.total(); ++c) {
            auto digits = pix.decode(c);
            for (std::size_t pos = 0; pos < digits.size(); ++pos) {
                if (digits[pos] + 1 >= static_cast<int>(pix.radices()[pos])) continue;
                auto up = digits;
                ++up[pos];
                const double before = d.probability(f, c, 0);
                const double after = d.probability(f, pix.index(up), 0);
                if (pos == 0) {
                    CHECK(after >= before);
                } else {
                    CHECK(after <= before);
                }
            }
        }
    }

    TEST_CASE("instance references") {
        CHECK(load_instance("pigfarm:2").size() == 10);
        CHECK(load_instance("pigfarm:2:5") == load_instance("pigfarm:2:5"));
        CHECK(load_instance("nmonitoring:3").size() == 9);
        CHECK_THROWS_AS(load_instance("pigfarm:x"), Error);
        CHECK_THROWS_AS(load_instance("/nonexistent/file.json"), Error);
    }
}
