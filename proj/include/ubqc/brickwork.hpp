#pragma once

#include <compare>
#include <map>
#include <set>
#include <vector>

#include "ubqc/errors.hpp"

namespace ubqc {

// A site of the brickwork graph: column x in 0..n, row y in 1..m.
struct Site {
    int x = 0;
    int y = 0;
    auto operator<=>(const Site&) const = default;
};

// Brickwork resource graph. Column 0 holds the inputs, column n the outputs.
// Horizontal edges join every ((x,y),(x+1,y)). Vertical edges come in brick
// pairs two columns apart so that a brick region measured at zero angles acts
// as the identity on both wires:
//   rows (y,y+1), y odd:  columns 16t+3 and 16t+5
//   rows (y,y+1), y even: columns 16t+11 and 16t+13
// A pair is placed only when both columns fit strictly inside the measured
// region (<= n-1), so the output column never carries vertical edges.
class BrickworkGraph {
  public:
    BrickworkGraph() = default;
    BrickworkGraph(int n, int m);

    int n() const { return n_; }
    int m() const { return m_; }

    bool has_edge(Site a, Site b) const;
    bool has_vertical(int x, int y_upper) const;
    std::vector<Site> neighbors(Site s) const;
    std::vector<std::pair<Site, Site>> edges() const;

    static constexpr int kSlotCols = 16;

  private:
    int n_ = 0;
    int m_ = 0;
    // vertical edges keyed by column -> set of upper rows y (edge (x,y)-(x,y+1))
    std::map<int, std::set<int>> verticals_;
};

BrickworkGraph build_brickwork(int n, int m);

struct FlowDeps {
    std::map<Site, std::set<Site>> xdeps;
    std::map<Site, std::set<Site>> zdeps;
};

// Dependency sets from the flow f(x,y) = (x+1,y): the outcome at (x,y) is an
// X-dependency of f(x,y) and a Z-dependency of every neighbour of f(x,y)
// except (x,y) itself. Output-column sites carry dependency sets too; they
// form the terminal byproduct frame.
FlowDeps compute_flow_deps(const BrickworkGraph& g);

} // namespace ubqc
