#include "riskrjt/diagram_io.hpp"

#include <fstream>
#include <sstream>

namespace riskrjt {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json diagram_to_json(const InfluenceDiagram& d) {
    ordered_json nodes = ordered_json::array();
    ordered_json cpts = ordered_json::object();
    ordered_json utilities = ordered_json::object();
    for (NodeId id : d.ids()) {
        const Node& n = d.node(id);
        ordered_json parents = ordered_json::array();
        for (NodeId p : n.parents) parents.push_back(d.name(p));
        nodes.push_back({{"name", n.name},
                         {"kind", std::string(to_string(n.kind))},
                         {"states", n.states},
                         {"parents", parents}});
        if (n.kind != NodeKind::Decision) cpts[n.name] = d.cpt(id);
        if (n.kind == NodeKind::Value) utilities[n.name] = d.utility(id);
    }
    return {{"nodes", nodes}, {"cpts", cpts}, {"utilities", utilities}};
}

InfluenceDiagram diagram_from_json(const json& j) {
    try {
        DiagramBuilder b;
        const json empty = json::object();
        const json& cpts = j.contains("cpts") ? j.at("cpts") : empty;
        const json& utilities = j.contains("utilities") ? j.at("utilities") : empty;
        for (const auto& n : j.at("nodes")) {
            auto name = n.at("name").get<std::string>();
            auto kind = parse_node_kind(n.at("kind").get<std::string>());
            auto states = n.at("states").get<std::vector<std::string>>();
            auto parents = n.contains("parents") ? n.at("parents").get<std::vector<std::string>>()
                                                 : std::vector<std::string>{};
            std::vector<double> cpt;
            if (cpts.contains(name)) cpt = cpts.at(name).get<std::vector<double>>();
            switch (kind) {
                case NodeKind::Chance:
                    b.chance(name, states, parents, cpt);
                    break;
                case NodeKind::Decision:
                    b.decision(name, states, parents);
                    break;
                case NodeKind::Value: {
                    std::vector<double> u;
                    if (utilities.contains(name)) u = utilities.at(name).get<std::vector<double>>();
                    b.value(name, states, parents, cpt, u);
                    break;
                }
            }
        }
        return b.build();
    } catch (const json::exception& e) {
        throw Error(std::string("malformed diagram file: ") + e.what());
    }
}

std::string write_diagram(const InfluenceDiagram& d) { return diagram_to_json(d).dump(2) + "\n"; }

InfluenceDiagram read_diagram(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("diagram is not valid JSON: ") + e.what());
    }
    return diagram_from_json(j);
}

InfluenceDiagram load_diagram(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open diagram file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return read_diagram(buf.str());
}

void save_diagram(const InfluenceDiagram& d, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << write_diagram(d);
}

ordered_json strategy_to_json(const InfluenceDiagram& d, const Strategy& s) {
    ordered_json out = ordered_json::object();
    for (const auto& rule : s.rules) {
        ordered_json labels = ordered_json::array();
        for (int c : rule.choice) labels.push_back(d.node(rule.decision).states.at(c));
        out[d.name(rule.decision)] = labels;
    }
    return out;
}

Strategy strategy_from_json(const InfluenceDiagram& d, const json& j) {
    Strategy s;
    for (NodeId dec : d.nodes_of(NodeKind::Decision)) {
        if (!j.contains(d.name(dec))) throw Error("strategy file lacks decision '" + d.name(dec) + "'");
        DecisionRule rule{dec, {}};
        for (const auto& label : j.at(d.name(dec))) {
            rule.choice.push_back(d.state_index(dec, label.get<std::string>()));
        }
        s.rules.push_back(std::move(rule));
    }
    check_feasible(d, s);
    return s;
}

}  // namespace riskrjt
