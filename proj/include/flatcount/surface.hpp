#pragma once

#include "flatcount/vec2.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace flatcount {

enum class Kind { abelian, quadratic };

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Directed edge i of a cell runs from vertex i to vertex i+1 (mod size).
struct EdgeRef {
    int cell = -1;
    int edge = -1;
    friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
    friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

/// Chart map across a gluing: p' = sign * p + t, sign in {+1, -1}.
struct Transition {
    int sign = 1;
    Vec2 t;

    Vec2 apply(const Vec2& p) const { return sign > 0 ? p + t : t - p; }
    Vec2 apply_vector(const Vec2& v) const { return sign > 0 ? v : -v; }
    Transition inverse() const { return {sign, sign > 0 ? -t : t}; }
};

/// this∘other as affine maps (sign2*(sign1*p + t1) + t2).
inline Transition compose(const Transition& second, const Transition& first) {
    Transition r;
    r.sign = second.sign * first.sign;
    r.t = second.apply(first.t);
    return r;
}

struct Marking {
    std::string name;
    int cell = 0;
    Vec2 pos;
};

/// One vertex class of the gluing complex, with its cone data.
struct ConePoint {
    int vclass = -1;
    int angle_pi = 0;   // total cone angle = angle_pi * pi
    int order = 0;      // quadratic order d (angle = (d+2)pi) or abelian degree n (angle = 2pi(n+1))
    bool is_pole = false;
    std::string name;
};

struct StratumSignature {
    Kind kind = Kind::abelian;
    std::vector<int> orders;  // nonzero orders/degrees, descending; poles included as -1
    int genus = 0;
    int marked_points = 0;  // vertex classes of regular angle (order 0)

    std::string display() const;
    friend bool operator==(const StratumSignature&, const StratumSignature&) = default;
};

class Triangulation;

/// Immutable flat surface: convex polygon cells plus edge gluings.
class FlatSurface {
public:
    Kind kind() const { return kind_; }
    unsigned long field() const { return field_; }
    int num_cells() const { return static_cast<int>(cells_.size()); }
    const std::vector<Vec2>& cell(int c) const { return cells_[c]; }
    int cell_size(int c) const { return static_cast<int>(cells_[c].size()); }

    Vec2 edge_vector(const EdgeRef& e) const;
    EdgeRef partner(const EdgeRef& e) const { return partner_[e.cell][e.edge]; }
    const Transition& transition(const EdgeRef& e) const { return transition_[e.cell][e.edge]; }

    const std::vector<Marking>& markings() const { return markings_; }
    std::optional<Marking> marking_by_name(const std::string& name) const;

    int vclass(int cell, int vertex) const { return vclass_[cell][vertex]; }
    int num_vclasses() const { return static_cast<int>(cone_points_.size()); }
    const std::vector<ConePoint>& cone_points() const { return cone_points_; }
    const ConePoint& cone_point(int vclass) const { return cone_points_[vclass]; }
    std::optional<int> vclass_by_name(const std::string& name) const;
    void rename_vertex(int vclass, const std::string& name) { cone_points_[vclass].name = name; }

    const Scalar& area() const { return area_; }
    int genus() const { return genus_; }

    /// Derived triangulation, built on first use and cached.
    std::shared_ptr<const Triangulation> triangulation() const;

    friend FlatSurface build_surface(std::vector<std::vector<Vec2>> cells,
                                     const std::vector<std::array<int, 4>>& gluings, Kind kind,
                                     std::vector<Marking> markings);

private:
    Kind kind_ = Kind::abelian;
    unsigned long field_ = 0;
    std::vector<std::vector<Vec2>> cells_;
    std::vector<std::vector<EdgeRef>> partner_;
    std::vector<std::vector<Transition>> transition_;
    std::vector<std::vector<int>> vclass_;
    std::vector<ConePoint> cone_points_;
    std::vector<Marking> markings_;
    Scalar area_;
    int genus_ = 0;
    mutable std::shared_ptr<const Triangulation> tri_cache_;
};

/// Validates and assembles a surface.  `gluings` rows are {cell_a, edge_a, cell_b, edge_b};
/// every directed edge must appear in exactly one row.
FlatSurface build_surface(std::vector<std::vector<Vec2>> cells,
                          const std::vector<std::array<int, 4>>& gluings, Kind kind,
                          std::vector<Marking> markings = {});

StratumSignature stratum_signature(const FlatSurface& s);
Scalar surface_area(const FlatSurface& s);

std::string surface_to_json(const FlatSurface& s);
FlatSurface surface_from_json(const std::string& text);

}  // namespace flatcount
