#pragma once

#include "flatcount/triangulation.hpp"

#include <memory>

namespace flatcount {

struct CoverError : std::runtime_error {
    explicit CoverError(const std::string& what) : std::runtime_error(what) {}
};

/// Degree-2 covering with sheet tracking.  `total_raw` is the direct two-copy
/// construction; `total` is the enumeration-ready triangulation (for orientation
/// covers, angle-2pi vertices over poles are removed into transparent markings).
struct CoveringMap {
    std::shared_ptr<const FlatSurface> base_surface;
    std::shared_ptr<const Triangulation> base;
    std::shared_ptr<const Triangulation> total_raw;
    std::shared_ptr<const Triangulation> total;
    std::shared_ptr<const FlatSurface> total_surface;

    bool orientation = false;
    std::vector<int> ram;  // ramification locus, base vertex classes

    std::vector<int> deck_image;          // raw tri -> raw tri
    std::vector<Transition> deck_chart;   // raw chart -> image chart
    std::vector<std::pair<int, int>> origin;  // raw tri -> (base tri, sheet)

    /// Names of the preimages of each base vertex class (one entry if ramified
    /// or merged, two if split).  Eliminated flat preimages keep their name as
    /// a transparent marking on `total`.
    std::vector<std::vector<std::string>> lifted_names;

    bool is_ramified_at(int base_vclass) const {
        for (int r : ram)
            if (r == base_vclass) return true;
        return false;
    }
};

CoveringMap orientation_double_cover(std::shared_ptr<const FlatSurface> base);

/// Double cover ramified at two distinct points (vertex-class names or marking
/// names).  The cut path defaults to a shortest edge path in the triangulation.
CoveringMap ramified_double_cover(std::shared_ptr<const FlatSurface> base, const std::string& point_a,
                                  const std::string& point_b);

/// Same, but along an explicit simple edge path given as triangulation slots
/// (consecutive edges sharing vertices; endpoints become the ramification locus).
CoveringMap ramified_double_cover_along(std::shared_ptr<const FlatSurface> base,
                                        std::shared_ptr<const Triangulation> base_tri,
                                        const std::vector<int>& path_slots);

/// Monodromy of a cylinder core around the cover: r mod 2 where r is the number
/// of ramification points in the boundary pole set (0 = trivial, two lifts).
int loop_monodromy(const CoveringMap& cover, const std::pair<int, int>& boundary_pole_set);

struct Involution {
    std::vector<int> image;           // tri -> tri on total_raw
    std::vector<Transition> chart;    // affine part is -identity for orientation covers
    std::vector<std::string> fixed_points;  // names of fixed points (vertex classes / markings of `total`)
};

Involution hyperelliptic_involution(const CoveringMap& cover);

struct WeierstrassPoint {
    std::string name;
    bool singular = false;
};
std::vector<WeierstrassPoint> weierstrass_points(const CoveringMap& cover);

/// Collapses the deck involution; reproduces the base complex.
Triangulation quotient_by_deck(const CoveringMap& cover);

// --- involution machinery (also used to build the genus-0 templates) -------

struct TriInvolution {
    std::vector<int> image;
    std::vector<Transition> chart;
    std::vector<int> fixed_vclasses;
    std::vector<int> invariant_edge_slots;  // one slot per sigma-invariant undirected edge
};

/// All flat involutions with derivative -identity.
std::vector<TriInvolution> find_involutions(const Triangulation& T);

/// Quotient by an involution with no invariant edges and no fixed triangles.
Triangulation quotient_by_involution(const Triangulation& T, const TriInvolution& sigma);

/// Inserts fold midpoints (named after coinciding markings where present), then
/// quotients by the unique involution with 2g+2 fixed points.
Triangulation hyperelliptic_quotient(const Triangulation& T);

/// Canonical form for triangulation-level isomorphism (relabeling plus chart
/// normalization).  Not a general flat-surface isomorphism test.
std::string canonical_form(const Triangulation& T, bool with_markings = true);

}  // namespace flatcount
