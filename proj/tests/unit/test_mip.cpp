#include "random_diagrams.hpp"

#include "riskrjt/diagram_io.hpp"
#include "riskrjt/generators.hpp"
#include "riskrjt/junction_tree.hpp"
#include "riskrjt/lp_format.hpp"
#include "riskrjt/mip_builder.hpp"
#include "riskrjt/mip_model.hpp"
#include "riskrjt/transform.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace riskrjt;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::string kGolden = RISKRJT_TEST_DIR "/golden/";
const std::string kData = RISKRJT_TEST_DIR "/data/";

MipModel pig_model(int periods, bool merge, const Problem& prob = {}, const BuildOptions& opts = {}) {
    PigFarmSpec spec;
    spec.periods = periods;
    auto d = gen_pigfarm(spec);
    if (merge) d = merge_value_nodes(d).diagram;
    return build_model(prob, build_rjt(d), d, opts);
}

}  // namespace

TEST_SUITE("mip") {
    TEST_CASE("model container checks") {
        MipModel m;
        const VarId x = m.add_variable("x", Domain::Continuous);
        const VarId b = m.add_variable("b", Domain::Binary, -3, 7);
        CHECK(m.variable(b).lower == 0.0);
        CHECK(m.variable(b).upper == 1.0);
        CHECK_THROWS_AS(m.add_variable("x", Domain::Continuous), Error);
        CHECK_THROWS_AS(m.add_variable("", Domain::Continuous), Error);
        CHECK_THROWS_AS(m.add_constraint({{{1.0, VarId{9}}}, Sense::Equal, 0, "f", "t", {}}), Error);
        CHECK_THROWS_AS(m.add_constraint({{{NAN, x}}, Sense::Equal, 0, "f", "t", {}}), Error);
        CHECK_THROWS_AS(m.add_constraint({{{1.0, x}, {2.0, x}}, Sense::Equal, 0, "f", "t", {}}), Error);
        m.add_constraint({{{1.0, x}, {1.0, b}}, Sense::LessEqual, 1.0, "f", "t", {}});
        m.add_constraint({{{1.0, x}}, Sense::LessEqual, 0.0, "g", "ind", Indicator{b, 1}});
        m.set_objective({{2.0, x}});
        CHECK(m.find("b") == b);
        CHECK_FALSE(m.find("zz"));

        std::vector<double> v{0.5, 0.0};
        CHECK(m.objective_value(v) == 1.0);
        CHECK(check_assignment(m, v, 1e-9).empty());
        v = {0.5, 1.0};
        auto bad = check_assignment(m, v, 1e-9);
        REQUIRE(bad.size() == 2);
        CHECK(bad[0].row == 0);
        CHECK(bad[0].amount == doctest::Approx(0.5));
        CHECK(bad[1].row == 1);
        v = {0.0, 0.5};
        bad = check_assignment(m, v, 1e-9);
        REQUIRE(bad.size() == 1);
        CHECK(bad[0].row == 2 + 1);  // binary off {0,1}

        const auto st = model_stats(m);
        CHECK(st.variables == 2);
        CHECK(st.binary == 1);
        CHECK(st.constraints == 2);
        CHECK(st.nonzeros == 3);
        CHECK(st.rows("f") == 1);
    }

    TEST_CASE("LP text for a single chance node") {
        const auto d = load_diagram(kData + "single_chance.json");
        const auto model = build_model({}, build_rjt(d), d);
        const std::string lp = export_lp(model);
        CHECK(lp == slurp(kGolden + "single_chance.lp"));
        CHECK(std::count(lp.begin(), lp.end(), '\n') == 10);
    }

    TEST_CASE("pig farm N=2 LP snapshot") {
        CHECK(export_lp(pig_model(2, false)) == slurp(kGolden + "pigfarm2_meu.lp"));
    }

    TEST_CASE("number formatting") {
        CHECK(format_number(0.1) == "0.1");
        CHECK(format_number(-0.0) == "0");
        CHECK(format_number(1e-20) == "1e-20");
        CHECK(format_number(1000) == "1000");
        CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    }

    TEST_CASE("long rows wrap") {
        const auto lp = export_lp(pig_model(3, true));
        std::istringstream in(lp);
        std::string line;
        bool continued = false;
        while (std::getline(in, line)) {
            CHECK(line.size() <= 200);
            continued = continued || line.starts_with("  ");
        }
        CHECK(continued);
    }

    TEST_CASE("local consistency row counts") {
        for (int n = 2; n <= 5; ++n) {
            CHECK(model_stats(pig_model(n, false)).rows("consistency") == static_cast<std::size_t>(12 * n + 2));
        }
        const std::size_t merged[] = {38, 86, 182, 374};
        for (int n = 2; n <= 5; ++n) {
            CHECK(model_stats(pig_model(n, true)).rows("consistency") == merged[n - 2]);
        }
    }

    TEST_CASE("variables and families of the base model") {
        PigFarmSpec spec;
        auto d = merge_value_nodes(gen_pigfarm(spec)).diagram;
        const auto t = build_rjt(d);
        const auto model = build_model({}, t, d);
        const auto& vb = model.catalog().cluster(d.id("Vbar").value);
        CHECK(vb.configs.total() == 256);
        const auto st = model_stats(model);
        CHECK(st.binary == 12);
        CHECK(st.rows("decision-sum") == 6);
        CHECK(st.rows("normalization") == d.size());
        // Two big-M rows per decision cluster configuration.
        std::size_t dec_rows = 0;
        for (const auto& b : model.catalog().decisions) dec_rows += 2 * model.catalog().cluster(b.decision).configs.total();
        CHECK(st.rows("decision-coupling") == dec_rows);

        BuildOptions ind;
        ind.indicator_rows = true;
        const auto mi = build_model({}, t, d, ind);
        std::size_t with_ind = 0;
        for (const auto& r : mi.constraints()) with_ind += r.indicator ? 1 : 0;
        CHECK(with_ind == dec_rows);
        CHECK(export_lp(mi).find("= 1 ->") != std::string::npos);
        CHECK(export_lp(mi).find("= 0 ->") != std::string::npos);
    }

    TEST_CASE("CVaR block") {
        Problem prob;
        prob.objective = Objective::cvar(0.15);
        const auto model = pig_model(3, true, prob);
        REQUIRE(model.catalog().cvar);
        const auto& cv = *model.catalog().cvar;
        // Utilities: 1000 or 300 at the end, minus 0..3 injections of 100.
        const std::vector<double> want{0, 100, 200, 300, 700, 800, 900, 1000};
        CHECK(cv.utilities == want);
        CHECK(cv.epsilon == 50);
        CHECK(cv.big_m == 1050);
        const auto st = model_stats(model);
        CHECK(st.rows("cvar") == 9 * want.size() + 1);
        CHECK(st.free == 1);
        CHECK(model.find("eta"));
        CHECK(model.find("rhobar_7"));
        CHECK(model.find("lambar_0"));
        double obj_rhobar = 0.0;
        for (const auto& t : model.objective()) {
            CHECK(model.variable(t.var).name.starts_with("rhobar_"));
            obj_rhobar += t.coef;
        }
        CHECK(obj_rhobar == doctest::Approx((0 + 100 + 200 + 300 + 700 + 800 + 900 + 1000) / 0.15));

        std::size_t cfgs = 0;
        for (const auto& c : cv.configs) cfgs += c.size();
        CHECK(cfgs == 256);

        Problem both = prob;
        both.constraints.push_back(CvarBoundSpec{0.15, 200});
        const auto m2 = pig_model(3, true, both);
        CHECK(model_stats(m2).rows("cvar-bound") == 1);
        CHECK(model_stats(m2).rows("cvar") == 9 * want.size() + 1);

        CHECK_THROWS_AS(pig_model(3, false, prob), Error);
    }

    TEST_CASE("single utility value gets epsilon 1") {
        auto d = DiagramBuilder()
                     .decision("D", {"a", "b"}, {})
                     .value("V", {"only"}, {"D"}, {1, 1}, {5})
                     .build();
        Problem prob;
        prob.objective = Objective::cvar(0.5);
        const auto model = build_model(prob, build_rjt(d), d);
        CHECK(model.catalog().cvar->epsilon == 1.0);
        CHECK(model.catalog().cvar->big_m == 1.0);
    }

    TEST_CASE("cluster choice for constraints") {
        const auto d = gen_pigfarm({});
        const auto t = build_rjt(d);
        const std::vector<NodeId> pair{d.id("H3"), d.id("D3")};
        CHECK(choose_cluster(t, d, pair) == d.id("D3"));
        const std::vector<NodeId> hd{d.id("H4"), d.id("D3")};
        CHECK(choose_cluster(t, d, hd) == d.id("H4"));
        const std::vector<NodeId> h4{d.id("H4")};
        CHECK(choose_cluster(t, d, h4, d.id("V4")) == d.id("V4"));
        CHECK_THROWS_AS(choose_cluster(t, d, h4, d.id("V1")), Error);
        const std::vector<NodeId> all{d.id("H1"), d.id("H2"), d.id("H3"), d.id("H4")};
        try {
            (void)choose_cluster(t, d, all);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("modify") != std::string::npos);
        }
        const auto m = modify_rjt(t, all);
        CHECK(choose_cluster(m, d, all) == d.id("H4"));
    }

    TEST_CASE("risk rows") {
        const auto d = gen_pigfarm({});
        const std::vector<NodeId> hs{d.id("H1"), d.id("H2"), d.id("H3"), d.id("H4")};
        const auto t = modify_rjt(build_rjt(d), hs);
        Problem prob;
        prob.constraints.push_back(parse_chance(d, "P(H1=ill|H2=ill|H3=ill|H4=ill)<=0.4"));
        prob.constraints.push_back(parse_logical(d, "D3=treat&H3=healthy"));
        prob.constraints.push_back(
            parse_budget(d, nlohmann::json::parse(R"({"costs": {"D3": {"treat": 100}}, "limit": 50})")));
        const auto model = build_model(prob, t, d);
        const auto st = model_stats(model);
        CHECK(st.rows("chance") == 1);
        CHECK(st.rows("logical") == 1);
        CHECK(st.rows("budget") == 1);
        for (const auto& r : model.constraints()) {
            if (r.family != "chance") continue;
            CHECK(r.sense == Sense::LessEqual);
            CHECK(r.rhs == 0.4);
            // Every C_H4 configuration except all-healthy.
            CHECK(r.terms.size() == 32 - 2);
        }
    }

    TEST_CASE("tree and diagram must agree") {
        const auto d = gen_pigfarm({});
        auto order = topological_order(d);
        auto t = build_rjt(d);
        t.set_parent(d.id("V4"), std::nullopt);
        CHECK_THROWS_AS(build_base_model(t, d), Error);
        auto bad = DiagramBuilder().chance("A-1", {"a"}, {}, {1.0}).build();
        CHECK_THROWS_AS(build_base_model(build_rjt(bad), bad), Error);
        BuildOptions tight;
        tight.caps.cluster_states = 4;
        CHECK_THROWS_AS(build_base_model(build_rjt(d), d, tight), CapExceeded);
    }
}
