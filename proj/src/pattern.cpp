#include "ubqc/pattern.hpp"

namespace ubqc {

MeasurementPattern pattern_skeleton(const BrickworkGraph& g, std::set<Site> z_sites) {
    MeasurementPattern p;
    p.graph = g;
    p.output_column = g.n();
    p.z_basis_sites = std::move(z_sites);

    FlowDeps deps = compute_flow_deps(g);
    auto prune = [&](const std::map<Site, std::set<Site>>& in) {
        std::map<Site, std::set<Site>> out;
        for (const auto& [site, sources] : in) {
            if (p.is_z_site(site)) continue;
            std::set<Site> kept;
            for (Site s : sources)
                if (!p.is_z_site(s)) kept.insert(s);
            if (!kept.empty()) out[site] = std::move(kept);
        }
        return out;
    };
    p.xdeps = prune(deps.xdeps);
    p.zdeps = prune(deps.zdeps);
    return p;
}

nlohmann::json MeasurementPattern::to_json() const {
    nlohmann::json j;
    j["n"] = graph.n();
    j["m"] = graph.m();

    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : graph.edges()) edges.push_back({a.x, a.y, b.x, b.y});
    j["edges"] = edges;

    nlohmann::json jphi = nlohmann::json::array();
    for (const auto& [s, a] : phi)
        if (a.eighths() != 0) jphi.push_back({s.x, s.y, a.eighths()});
    j["phi"] = jphi;

    auto dump_deps = [](const std::map<Site, std::set<Site>>& m) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& [site, srcs] : m) {
            nlohmann::json lst = nlohmann::json::array();
            for (Site s : srcs) lst.push_back({s.x, s.y});
            out.push_back({{"site", {site.x, site.y}}, {"deps", lst}});
        }
        return out;
    };
    j["xdeps"] = dump_deps(xdeps);
    j["zdeps"] = dump_deps(zdeps);

    nlohmann::json zb = nlohmann::json::array();
    for (Site s : z_basis_sites) zb.push_back({s.x, s.y});
    j["z_basis_sites"] = zb;
    return j;
}

MeasurementPattern MeasurementPattern::from_json(const nlohmann::json& j) {
    MeasurementPattern p;
    int n = j.at("n").get<int>();
    int m = j.at("m").get<int>();
    p.graph = BrickworkGraph(n, m);
    p.output_column = n;
    for (const auto& e : j.at("phi"))
        p.phi[{e.at(0).get<int>(), e.at(1).get<int>()}] = Angle(e.at(2).get<int>());
    auto load_deps = [](const nlohmann::json& in, std::map<Site, std::set<Site>>& out) {
        for (const auto& rec : in) {
            Site site{rec.at("site").at(0).get<int>(), rec.at("site").at(1).get<int>()};
            for (const auto& d : rec.at("deps"))
                out[site].insert({d.at(0).get<int>(), d.at(1).get<int>()});
        }
    };
    load_deps(j.at("xdeps"), p.xdeps);
    load_deps(j.at("zdeps"), p.zdeps);
    for (const auto& s : j.at("z_basis_sites"))
        p.z_basis_sites.insert({s.at(0).get<int>(), s.at(1).get<int>()});
    return p;
}

} // namespace ubqc
