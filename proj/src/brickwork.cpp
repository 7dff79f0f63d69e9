#include "ubqc/brickwork.hpp"

namespace ubqc {

BrickworkGraph::BrickworkGraph(int n, int m) : n_(n), m_(m) {
    if (m < 2 || m % 2 != 0) throw DimensionError("brickwork needs even m >= 2");
    if (n < 1) throw DimensionError("brickwork needs n >= 1");

    for (int y = 1; y < m; ++y) {
        const int base = (y % 2 == 1) ? 3 : 11;
        for (int lo = base; lo + 2 <= n - 1; lo += kSlotCols) {
            verticals_[lo].insert(y);
            verticals_[lo + 2].insert(y);
        }
    }
}

bool BrickworkGraph::has_vertical(int x, int y_upper) const {
    auto it = verticals_.find(x);
    return it != verticals_.end() && it->second.count(y_upper) != 0;
}

bool BrickworkGraph::has_edge(Site a, Site b) const {
    if (a > b) std::swap(a, b);
    if (a.y == b.y && b.x == a.x + 1 && a.x >= 0 && b.x <= n_) return true;
    if (a.x == b.x && b.y == a.y + 1) return has_vertical(a.x, a.y);
    return false;
}

std::vector<Site> BrickworkGraph::neighbors(Site s) const {
    std::vector<Site> out;
    if (s.x > 0) out.push_back({s.x - 1, s.y});
    if (s.x < n_) out.push_back({s.x + 1, s.y});
    if (s.y > 1 && has_vertical(s.x, s.y - 1)) out.push_back({s.x, s.y - 1});
    if (s.y < m_ && has_vertical(s.x, s.y)) out.push_back({s.x, s.y + 1});
    return out;
}

std::vector<std::pair<Site, Site>> BrickworkGraph::edges() const {
    std::vector<std::pair<Site, Site>> out;
    for (int y = 1; y <= m_; ++y)
        for (int x = 0; x < n_; ++x)
            out.push_back({{x, y}, {x + 1, y}});
    for (const auto& [x, rows] : verticals_)
        for (int y : rows) out.push_back({{x, y}, {x, y + 1}});
    return out;
}

BrickworkGraph build_brickwork(int n, int m) { return BrickworkGraph(n, m); }

FlowDeps compute_flow_deps(const BrickworkGraph& g) {
    FlowDeps d;
    for (int y = 1; y <= g.m(); ++y) {
        for (int x = 0; x < g.n(); ++x) {
            Site s{x, y};
            Site f{x + 1, y};
            d.xdeps[f].insert(s);
            for (Site u : g.neighbors(f))
                if (u != s) d.zdeps[u].insert(s);
        }
    }
    return d;
}

} // namespace ubqc
