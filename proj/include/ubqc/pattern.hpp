#pragma once

#include <map>
#include <set>

#include "ubqc/angle.hpp"
#include "ubqc/brickwork.hpp"

#include <json.hpp>

namespace ubqc {

// phi'_{x,y} = (-1)^{sX} * phi + sZ * pi
inline Angle actual_angle(Angle phi, int sX, int sZ) {
    return phi.signed_by(sX).plus_pi_if(sZ);
}

// Column-0 special case: phi'_{0,y} = (-1)^{kX} * phi.
inline Angle special_input_angle(Angle phi, int kX) { return phi.signed_by(kX); }

// Measurement pattern on a brickwork graph. phi defaults to 0 where absent.
// z_basis_sites are measured in the computational basis on the regular
// ancilla schedule; their outcomes feed no dependency set.
struct MeasurementPattern {
    BrickworkGraph graph;
    std::map<Site, Angle> phi;
    std::map<Site, std::set<Site>> xdeps;
    std::map<Site, std::set<Site>> zdeps;
    std::set<Site> z_basis_sites;
    int output_column = 0;

    Angle phi_at(Site s) const {
        auto it = phi.find(s);
        return it == phi.end() ? Angle(0) : it->second;
    }
    const std::set<Site>& xdeps_at(Site s) const { return deps_at(xdeps, s); }
    const std::set<Site>& zdeps_at(Site s) const { return deps_at(zdeps, s); }
    bool is_z_site(Site s) const { return z_basis_sites.count(s) != 0; }

    nlohmann::json to_json() const;
    static MeasurementPattern from_json(const nlohmann::json& j);

  private:
    static const std::set<Site>& deps_at(const std::map<Site, std::set<Site>>& m, Site s) {
        static const std::set<Site> empty;
        auto it = m.find(s);
        return it == m.end() ? empty : it->second;
    }
};

// Builds the pattern skeleton for a graph: flow deps pruned around the given
// Z-basis sites (a Z measurement neither receives nor contributes
// corrections) and empty angle table.
MeasurementPattern pattern_skeleton(const BrickworkGraph& g, std::set<Site> z_sites = {});

} // namespace ubqc
