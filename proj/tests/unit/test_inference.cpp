#include "brute_force.hpp"
#include "random_diagrams.hpp"

#include "riskrjt/generators.hpp"
#include "riskrjt/inference.hpp"

#include <doctest.h>

#include <cmath>

using namespace riskrjt;

namespace {

// Health chain under a fixed action, by hand: p' = p*stay + (1-p)*recover.
double healthy_after(int periods, double p0, double stay, double recover) {
    double p = p0;
    for (int k = 0; k < periods; ++k) p = p * stay + (1.0 - p) * recover;
    return p;
}

}  // namespace

TEST_SUITE("inference") {
    TEST_CASE("significant-digit rounding") {
        CHECK(round_significant(0.1 + 0.2) == 0.3);
        CHECK(round_significant(1234.5678901234567) == 1234.56789012);
        CHECK(round_significant(0.0) == 0.0);
        CHECK(round_significant(-2.0000000000001) == -2.0);
    }

    TEST_CASE("distribution aggregation") {
        const auto d = UtilityDistribution::from_pairs({{1.0, 0.25}, {0.1 + 0.2, 0.25}, {0.3, 0.5}, {7.0, 1e-17}});
        REQUIRE(d.size() == 2);
        CHECK(d.atoms()[0].utility == 0.3);
        CHECK(d.atoms()[0].probability == 0.75);
        CHECK(d.total_probability() == doctest::Approx(1.0));
        CHECK(d.expected() == doctest::Approx(0.475));
        CHECK(d.mass_below(1.0) == 0.75);
        CHECK(d.mass_below(0.3) == 0.0);
        CHECK(distribution_to_text(d) == "0.3 0.75\n1 0.25\n");
    }

    TEST_CASE("never-treat pig farm matches the hand recursion") {
        const auto d = gen_pigfarm({});
        const auto never = constant_strategy(d, 1);
        const double h4 = healthy_after(3, 0.9, 0.8, 0.1);
        CHECK(h4 == doctest::Approx(0.5277).epsilon(1e-12));
        const double eu_hand = 1000.0 * h4 + 300.0 * (1.0 - h4);
        CHECK(eu_hand == doctest::Approx(669.39).epsilon(1e-12));
        CHECK(std::abs(expected_utility(d, never) - eu_hand) < 1e-9);
        CHECK(std::abs(testing::brute_expected(d, never) - eu_hand) < 1e-9);

        const std::vector<NodeId> h4_scope{d.id("H4")};
        const auto m = joint_marginal(d, never, h4_scope);
        CHECK(std::abs(m[0] - h4) < 1e-12);

        const std::vector<NodeId> pair{d.id("H1"), d.id("H2")};
        const auto joint = joint_marginal(d, never, pair);
        REQUIRE(joint.size() == 4);
        CHECK(std::abs(joint[0] - 0.72) < 1e-12);
        CHECK(std::abs(joint[1] - 0.18) < 1e-12);
        CHECK(std::abs(joint[2] - 0.01) < 1e-12);
        CHECK(std::abs(joint[3] - 0.09) < 1e-12);
    }

    TEST_CASE("always-treat keeps the chance of any illness below 0.4") {
        const auto d = gen_pigfarm({});
        const auto always = constant_strategy(d, 0);
        double any_ill = 0.0;
        testing::brute_joint(d, always, [&](std::span<const int> s, double p) {
            bool ill = false;
            for (const char* h : {"H1", "H2", "H3", "H4"}) ill = ill || s[d.id(h).index()] == 1;
            if (ill) any_ill += p;
        });
        // Healthy throughout: 0.9 at the start, then 0.9 per treated period.
        const double hand = 1.0 - std::pow(0.9, 4);
        CHECK(std::abs(any_ill - hand) < 1e-12);
        CHECK(any_ill < 0.4);
        const std::vector<NodeId> hs{d.id("H1"), d.id("H2"), d.id("H3"), d.id("H4")};
        const auto m = joint_marginal(d, always, hs);
        CHECK(std::abs((1.0 - m[0]) - any_ill) < 1e-12);
    }

    TEST_CASE("enumerator agrees with the odometer on random diagrams") {
        for (std::uint64_t seed = 1; seed <= 30; ++seed) {
            const auto d = testing::random_diagram(seed);
            UniformSource rng(seed + 99);
            const auto s = testing::random_strategy(d, rng);
            const auto lib = evaluate_strategy(d, s);
            const auto brute = testing::brute_distribution(d, s);
            REQUIRE(lib.size() == brute.size());
            std::size_t k = 0;
            for (auto [u, p] : brute) {
                CHECK(lib.atoms()[k].utility == doctest::Approx(u));
                CHECK(std::abs(lib.atoms()[k].probability - p) < 1e-12);
                ++k;
            }
            CHECK(std::abs(lib.total_probability() - 1.0) < 1e-12);
        }
    }

    TEST_CASE("joint state cap") {
        PigFarmSpec spec;
        spec.periods = 3;
        Caps tight;
        tight.joint_states = 100;
        CHECK_THROWS_AS(JointEnumerator(gen_pigfarm(spec), tight), CapExceeded);
    }

    TEST_CASE("CVaR of small distributions") {
        const auto d = UtilityDistribution::from_pairs({{-10, 0.1}, {0, 0.3}, {5, 0.6}});
        auto c = cvar_of_distribution(d, 0.1);
        CHECK(c.var == -10);
        CHECK(c.cvar == doctest::Approx(-10));
        c = cvar_of_distribution(d, 0.25);
        CHECK(c.var == 0);
        CHECK(c.cvar == doctest::Approx((-10 * 0.1 + 0 * 0.15) / 0.25));
        c = cvar_of_distribution(d, 1.0);
        CHECK(c.cvar == doctest::Approx(d.expected()));
        CHECK(c.var == 5);
        c = cvar_of_distribution(d, 0.4);
        CHECK(c.var == 0);
        CHECK(c.cvar == doctest::Approx(-2.5));
        CHECK_THROWS_AS(cvar_of_distribution(d, 0.0), Error);
        CHECK_THROWS_AS(cvar_of_distribution(d, 1.5), Error);

        std::map<double, double> m{{-10, 0.1}, {0, 0.3}, {5, 0.6}};
        for (double a : {0.05, 0.1, 0.2, 0.4, 0.41, 0.7, 1.0}) {
            CHECK(cvar_of_distribution(d, a).cvar == doctest::Approx(testing::brute_cvar(m, a)).epsilon(1e-12));
        }
    }

    TEST_CASE("tail weights") {
        const std::vector<double> u{-10, 0, 5};
        const std::vector<double> p{0.1, 0.3, 0.6};
        auto tw = tail_weights(u, p, 0.25);
        CHECK(tw.var_atom == 1);
        CHECK(tw.weights[0] == doctest::Approx(0.1));
        CHECK(tw.weights[1] == doctest::Approx(0.15));
        CHECK(tw.weights[2] == 0.0);
        tw = tail_weights(u, p, 0.4);
        CHECK(tw.var_atom == 1);
        CHECK(tw.weights[1] == doctest::Approx(0.3));
        tw = tail_weights(u, p, 1.0);
        CHECK(tw.var_atom == 2);
        CHECK(tw.weights[2] == doctest::Approx(0.6));
        // Atoms with zero mass before the quantile are skipped.
        const std::vector<double> q{0.0, 0.5, 0.5};
        tw = tail_weights(u, q, 0.3);
        CHECK(tw.var_atom == 1);
        CHECK(tw.weights[0] == 0.0);
    }
}
