#include "riskrjt/generators.hpp"

#include "riskrjt/config_index.hpp"
#include "riskrjt/diagram_io.hpp"

#include <algorithm>
#include <charconv>

namespace riskrjt {

namespace {

std::string idx(const char* prefix, int i) { return prefix + std::to_string(i); }

void perturb(std::vector<double>& cpt, std::size_t width, UniformSource& rng, double noise) {
    for (std::size_t row = 0; row * width < cpt.size(); ++row) {
        double sum = 0.0;
        for (std::size_t k = 0; k < width; ++k) {
            cpt[row * width + k] += rng.next(0.0, noise);
            sum += cpt[row * width + k];
        }
        for (std::size_t k = 0; k < width; ++k) cpt[row * width + k] /= sum;
    }
}

}  // namespace

InfluenceDiagram gen_pigfarm(const PigFarmSpec& spec) {
    if (spec.periods < 1) throw Error("pig farm needs at least one period");
    const int n = spec.periods;
    const std::vector<std::string> health{"healthy", "ill"};
    const std::vector<std::string> test{"positive", "negative"};
    const std::vector<std::string> action{"treat", "no-treat"};

    std::vector<double> prior{1.0 - spec.prior_ill, spec.prior_ill};
    // Rows: healthy, ill.
    std::vector<double> test_cpt{1.0 - spec.specificity, spec.specificity, spec.sensitivity,
                                 1.0 - spec.sensitivity};
    // Rows over (H_i, D_i): (healthy, treat), (healthy, no-treat), (ill, treat), (ill, no-treat).
    std::vector<double> transition{1.0 - spec.healthy_treated_falls_ill, spec.healthy_treated_falls_ill,
                                   1.0 - spec.healthy_untreated_falls_ill, spec.healthy_untreated_falls_ill,
                                   spec.ill_treated_recovers, 1.0 - spec.ill_treated_recovers,
                                   spec.ill_untreated_recovers, 1.0 - spec.ill_untreated_recovers};

    std::optional<UniformSource> rng;
    if (spec.seed) rng.emplace(*spec.seed);
    auto chance_table = [&](std::vector<double> cpt) {
        if (rng) perturb(cpt, 2, *rng, spec.noise);
        return cpt;
    };

    DiagramBuilder b;
    b.chance("H1", health, {}, chance_table(prior));
    for (int i = 1; i <= n; ++i) {
        b.chance(idx("T", i), test, {idx("H", i)}, chance_table(test_cpt));
        b.decision(idx("D", i), action, {idx("T", i)});
        b.value(idx("V", i), {"treated", "untreated"}, {idx("D", i)}, {1, 0, 0, 1},
                {-spec.injection_cost, 0.0});
        b.chance(idx("H", i + 1), health, {idx("H", i), idx("D", i)}, chance_table(transition));
    }
    b.value(idx("V", n + 1), {"healthy", "ill"}, {idx("H", n + 1)}, {1, 0, 0, 1},
            {spec.price_healthy, spec.price_ill});
    return b.build();
}

InfluenceDiagram gen_nmonitoring(const NMonitoringSpec& spec) {
    if (spec.monitors < 1) throw Error("N-monitoring needs at least one monitor");
    if (spec.load_states < 1 || spec.report_states < 1 || spec.action_states < 1) {
        throw Error("N-monitoring state counts must be positive");
    }
    const int n = spec.monitors;
    const auto nl = static_cast<std::size_t>(spec.load_states);
    const auto nr = static_cast<std::size_t>(spec.report_states);
    const auto na = static_cast<std::size_t>(spec.action_states);
    UniformSource rng(spec.seed);

    auto labels = [](const char* stem, std::size_t k) {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < k; ++i) out.push_back(stem + std::to_string(i));
        return out;
    };

    DiagramBuilder b;
    std::vector<double> load(nl);
    double total = 0.0;
    for (auto& p : load) total += (p = 0.1 + rng.next());
    for (auto& p : load) p /= total;
    b.chance("L", labels("load", nl), {}, load);

    auto matching = [](std::size_t level, std::size_t from, std::size_t to) {
        return from <= 1 ? 0 : (level * (to - 1) + (from - 1) / 2) / (from - 1);
    };

    std::vector<double> costs;
    std::vector<double> protection;
    for (int i = 1; i <= n; ++i) {
        std::vector<double> report(nl * nr);
        for (std::size_t l = 0; l < nl; ++l) {
            double sum = 0.0;
            for (std::size_t r = 0; r < nr; ++r) {
                double w = 0.1 + rng.next();
                if (r == matching(l, nl, nr)) w += spec.report_accuracy;
                report[l * nr + r] = w;
                sum += w;
            }
            for (std::size_t r = 0; r < nr; ++r) report[l * nr + r] /= sum;
        }
        b.chance(idx("R", i), labels("report", nr), {"L"}, report);
        b.decision(idx("A", i), labels("level", na), {idx("R", i)});
        costs.push_back(rng.next(spec.cost_low, spec.cost_high));
        protection.push_back(rng.next(0.3, 0.8));
    }

    // Base failure probability, increasing in the load.
    std::vector<double> base(nl);
    for (auto& p : base) p = rng.next(0.2, 0.9);
    std::sort(base.begin(), base.end());

    std::vector<std::string> f_parents{"L"};
    std::vector<std::size_t> radices{nl};
    for (int i = 1; i <= n; ++i) {
        f_parents.push_back(idx("A", i));
        radices.push_back(na);
    }
    const ConfigIndexer fix(radices);
    std::vector<double> failure(fix.total() * 2);
    std::vector<int> digits(radices.size());
    for (std::uint64_t c = 0; c < fix.total(); ++c) {
        fix.decode_into(c, digits);
        double p = base[static_cast<std::size_t>(digits[0])];
        for (int i = 0; i < n; ++i) {
            const double level = na <= 1 ? 0.0 : static_cast<double>(digits[i + 1]) / static_cast<double>(na - 1);
            p *= 1.0 - protection[i] * level;
        }
        failure[c * 2] = p;
        failure[c * 2 + 1] = 1.0 - p;
    }
    b.chance("F", {"fail", "intact"}, f_parents, failure);

    // T copies (A_1..A_N, F) into one outcome state.
    std::vector<std::string> t_parents(f_parents.begin() + 1, f_parents.end());
    t_parents.push_back("F");
    std::vector<std::size_t> t_radices(n, na);
    t_radices.push_back(2);
    const ConfigIndexer tix(t_radices);
    std::vector<std::string> t_states;
    std::vector<double> t_cpt(tix.total() * tix.total(), 0.0);
    std::vector<double> utility(tix.total());
    std::vector<int> t_digits(t_radices.size());
    for (std::uint64_t c = 0; c < tix.total(); ++c) {
        tix.decode_into(c, t_digits);
        std::string label;
        double u = t_digits[n] == 1 ? spec.reward : 0.0;
        for (int i = 0; i < n; ++i) {
            label += "level" + std::to_string(t_digits[i]) + "-";
            u -= costs[i] * t_digits[i];
        }
        label += t_digits[n] == 1 ? "intact" : "fail";
        t_states.push_back(label);
        t_cpt[c * tix.total() + c] = 1.0;
        utility[c] = u;
    }
    b.value("T", t_states, t_parents, t_cpt, utility);
    return b.build();
}

InfluenceDiagram load_instance(const std::string& ref) {
    auto parse_int = [&](std::string_view s) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw Error("malformed instance '" + ref + "'");
        return v;
    };
    for (const char* family : {"pigfarm:", "nmonitoring:"}) {
        const std::string_view f(family);
        if (!ref.starts_with(f)) continue;
        std::string_view rest = std::string_view(ref).substr(f.size());
        const auto colon = rest.find(':');
        const auto n = static_cast<int>(parse_int(rest.substr(0, colon)));
        std::optional<std::uint64_t> seed;
        if (colon != std::string_view::npos) seed = parse_int(rest.substr(colon + 1));
        if (f == "pigfarm:") {
            PigFarmSpec spec;
            spec.periods = n;
            spec.seed = seed;
            return gen_pigfarm(spec);
        }
        NMonitoringSpec spec;
        spec.monitors = n;
        if (seed) spec.seed = *seed;
        return gen_nmonitoring(spec);
    }
    return load_diagram(ref);
}

}  // namespace riskrjt
