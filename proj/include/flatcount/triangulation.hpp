#pragma once

#include "flatcount/surface.hpp"

#include <functional>

namespace flatcount {

struct TriMarking {
    std::string name;
    int tri = 0;
    Vec2 pos;
};

/// Triangulated view of a flat surface.  Every vertex of the triangulation is a
/// distinguished point (cone point or degree-0 vertex class); transparent marked
/// points live in `markings` and never block geodesics.  All mutating operations
/// preserve the flat metric exactly.
class Triangulation {
public:
    Kind kind = Kind::abelian;
    unsigned long field = 0;

    std::vector<std::array<Vec2, 3>> tri;  // CCW triangles, chart coordinates
    std::vector<int> partner;              // slot -> partner slot
    std::vector<Transition> trans;         // slot -> chart map, this triangle's chart to partner's
    std::vector<int> vcl;                  // slot -> vertex class of corner vertex e of triangle t

    struct VInfo {
        int angle_pi = 0;
        int order = 0;  // quadratic order d or abelian degree n
        bool is_pole = false;
        std::string name;
    };
    std::vector<VInfo> vinfo;
    std::vector<TriMarking> markings;

    static int slot_of(int t, int e) { return 3 * t + e; }
    static int tri_of(int s) { return s / 3; }
    static int edge_of(int s) { return s % 3; }

    int num_tris() const { return static_cast<int>(tri.size()); }
    const Vec2& corner(int t, int e) const { return tri[t][e]; }
    Vec2 edge_vec(int t, int e) const { return tri[t][(e + 1) % 3] - tri[t][e]; }
    int vclass_at(int t, int e) const { return vcl[slot_of(t, e)]; }
    int num_vclasses() const { return static_cast<int>(vinfo.size()); }

    /// Next corner around the vertex of corner (t,k): cross outgoing edge k.
    std::pair<int, int> next_corner(int t, int k) const {
        int p = partner[slot_of(t, k)];
        return {tri_of(p), (edge_of(p) + 1) % 3};
    }
    std::vector<std::pair<int, int>> corners_of(int vclass) const;
    int degree(int vclass) const;

    static Triangulation from_surface(const FlatSurface& s);
    FlatSurface to_surface() const;

    void validate() const;

    /// Inserts a point as a new vertex class; `pos` in the chart of triangle `t`
    /// (strictly inside or in the open interior of an edge).  Returns the new
    /// vertex class, or the existing one if `pos` is already a vertex.
    int insert_point(int t, const Vec2& pos, const std::string& name);

    bool flip_legal(int t, int e) const;
    void flip(int t, int e);

    /// Removes a vertex class of cone angle exactly 2*pi, replacing it by a
    /// transparent marking with the class's name.
    void eliminate_flat_vertex(int vclass);
    void eliminate_all_flat_vertices();

    int locate_triangle(int hint_cell_tri, const Vec2& pos) const;

    /// Rebuilds vertex classes and cone data.  `hints` carries old class ids per
    /// corner for name transport (-1 unknown, values < -1 look up `fresh_names`).
    void recompute_classes(const std::vector<std::array<int, 3>>& hints,
                           const std::vector<VInfo>& old_info,
                           const std::map<int, std::string>& fresh_names);

private:
    bool try_remove_degree3(int vclass);
};

}  // namespace flatcount
