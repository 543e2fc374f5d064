#include "crlab/disc.hpp"

#include <algorithm>
#include <cmath>

namespace crlab {

SetOracle graph_oracle(const GraphSurface& surface) {
    GraphSurface s = surface;
    return SetOracle{
        "graph:" + kind_name(s.kind),
        [s](const CVector& p) { return s.graph_residual(p) + s.box_excess(p); },
    };
}

SetOracle graph_oracle_boxed(const GraphSurface& surface, double box_c) {
    GraphSurface s = surface;
    return SetOracle{
        "graph:" + kind_name(s.kind) + ":box",
        [s, box_c](const CVector& p) {
            double excess = 0.0;
            for (Eigen::Index i = 0; i < p.size(); ++i)
                excess = std::max(excess, std::abs(p[i]) - box_c);
            return s.graph_residual(p) + std::max(0.0, excess);
        },
    };
}

double boundary_residual(const AnalyticDisc& disc, const SetOracle& target, int m) {
    if (m < 16) throw DomainError("boundary_residual: need at least 16 samples");
    double worst = 0.0;
    for (const CVector& p : disc.boundary_samples(m)) worst = std::max(worst, target(p));
    return worst;
}

}  // namespace crlab
