#pragma once

#include "flatcount/covering.hpp"

#include <functional>

namespace flatcount {

struct SaddleConnection {
    Vec2 holonomy;  // canonical representative of {v, -v}
    Scalar length2;
    int from_vclass = -1, to_vclass = -1;
};

struct BoundaryChain {
    std::vector<int> vertices;   // cyclic; vertices[i] -> vertices[i+1] along segments[i]
    std::vector<Vec2> segments;  // straight saddle-connection segments, in the seed frame
    bool all_poles = false;
};

struct Cylinder {
    Vec2 direction;  // canonical direction-class representative
    Scalar circumference2;
    Scalar area;
    Scalar height2;
    std::array<BoundaryChain, 2> chains;
    std::vector<int> pole_set;  // P(C): poles of the unique all-pole boundary, when defined
    bool both_sides_poles = false;
    std::vector<std::string> core_markings;  // transparent marked points on the core curve
    int lifted_from = -1;                    // lineage index for lift_cylinders output
    int lift_copies = 1;
    bool merged_lift = false;
};

/// Complete list of saddle connections with |holonomy| <= bound, one record per
/// orientation pair, sorted by (squared length, direction, endpoints).
std::vector<SaddleConnection> saddle_connections(const FlatSurface& s, const Scalar& bound);

/// Complete list of maximal cylinders of circumference <= bound (closed
/// inequality).  Deterministic order, independent of `threads`.
std::vector<Cylinder> cylinders_up_to(const FlatSurface& s, const Scalar& bound, int threads = 1);

/// Cylinder decomposition in one direction, circumference <= bound.
std::vector<Cylinder> cylinders_in_direction(const FlatSurface& s, const Vec2& dir, const Scalar& bound);

using CylinderFilter = std::function<bool(const Cylinder&)>;

/// N(X, L) restricted by the filter: (1/Area) * sum of filtered cylinder areas.
Scalar weighted_count(const FlatSurface& s, const Scalar& L, const CylinderFilter& filter, int threads = 1);

/// Profile (1_P(p1), 1_P(p2)) of a cylinder on a single-zero quadratic surface.
std::pair<int, int> profile_of(const Cylinder& c, int p1, int p2);

/// True if some boundary chain contains a single saddle connection joining a and b.
bool chain_joins(const Cylinder& c, int a, int b);

/// Lifts base cylinders through a degree-2 cover: trivial monodromy gives two
/// lifts, nontrivial one lift of doubled circumference.  Orientation covers of
/// single-zero bases produce the merged maximal cylinder through the two
/// Weierstrass points over P(C).
std::vector<Cylinder> lift_cylinders(const CoveringMap& cover, const std::vector<Cylinder>& base_cylinders);

}  // namespace flatcount
