#include "flatcount/templates.hpp"
#include "flatcount/covering.hpp"

namespace flatcount {

namespace {

Vec2 v2(const Scalar& x, const Scalar& y) { return {x, y}; }

}  // namespace

FlatSurface torus_surface() {
    std::vector<std::vector<Vec2>> cells = {{v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)}};
    std::vector<std::array<int, 4>> gl = {{0, 0, 0, 2}, {0, 1, 0, 3}};
    return build_surface(std::move(cells), gl, Kind::abelian);
}

FlatSurface pillowcase_surface() {
    std::vector<std::vector<Vec2>> cells = {
        {v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)},
        {v2(1, 0), v2(2, 0), v2(2, 1), v2(1, 1)},
    };
    std::vector<std::array<int, 4>> gl = {
        {0, 0, 1, 0},  // bottoms folded around (1,0)
        {0, 2, 1, 2},  // tops folded around (1,1)
        {0, 1, 1, 3},  // shared vertical edge
        {0, 3, 1, 1},  // outer vertical edges, translation by (2,0)
    };
    return build_surface(std::move(cells), gl, Kind::quadratic);
}

FlatSurface lab_surface(const Scalar& a, const Scalar& b) {
    if (a.sign() <= 0 || b.sign() <= 0 || (Scalar(1) - a).sign() <= 0 || (Scalar(1) - b).sign() <= 0)
        throw ValidationError("lab parameters must lie in (0,1)");
    Scalar w = Scalar(1) - a, h = Scalar(1) - b;
    Scalar one(1), hf(1, 2);
    // cell 0: [0,w] x [0,h], cell 1: [w,1] x [0,h], cell 2: [0,w] x [h,1]
    std::vector<std::vector<Vec2>> cells = {
        {v2(0, 0), v2(w, 0), v2(w, h), v2(0, h)},
        {v2(w, 0), v2(one, 0), v2(one, h), v2(w, h)},
        {v2(0, h), v2(w, h), v2(w, one), v2(0, one)},
    };
    std::vector<std::array<int, 4>> gl = {
        {0, 1, 1, 3},  // B1.right  = B2.left
        {0, 2, 2, 0},  // B1.top    = T.bottom
        {0, 0, 2, 2},  // B1.bottom = T.top        (x,0) ~ (x,1)
        {1, 0, 1, 2},  // B2.bottom = B2.top       (x,0) ~ (x,h)
        {0, 3, 1, 1},  // B1.left   = B2.right     (0,y) ~ (1,y)
        {2, 3, 2, 1},  // T.left    = T.right      (0,y) ~ (w,y)
    };
    std::vector<Marking> wk = {
        {"w1", 0, v2(hf * w, hf * h)},
        {"w2", 1, v2(hf * (w + one), hf * h)},
        {"w3", 2, v2(hf * w, hf * (h + one))},
        {"w4", 1, v2(hf * (w + one), 0)},
        {"w5", 2, v2(0, hf * (h + one))},
    };
    return build_surface(std::move(cells), gl, Kind::abelian, std::move(wk));
}

FlatSurface staircase_surface() {
    std::vector<std::vector<Vec2>> cells = {
        {v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)},
        {v2(1, 0), v2(2, 0), v2(2, 1), v2(1, 1)},
        {v2(1, 1), v2(2, 1), v2(2, 2), v2(1, 2)},
        {v2(2, 1), v2(3, 1), v2(3, 2), v2(2, 2)},
    };
    std::vector<std::array<int, 4>> gl = {
        {0, 0, 0, 2},  // column 0 wraps
        {1, 0, 2, 2},  // column 1 wraps (s2 bottom = s3 top)
        {3, 0, 3, 2},  // column 2 wraps
        {0, 3, 1, 1},  // row 0 wraps
        {2, 3, 3, 1},  // row 1 wraps
        {0, 1, 1, 3},  // s1 | s2
        {1, 2, 2, 0},  // s2 on s3
        {2, 1, 3, 3},  // s3 | s4
    };
    return build_surface(std::move(cells), gl, Kind::abelian);
}

FlatSurface scale_surface(const FlatSurface& s, const Scalar& factor) {
    if (factor.sign() <= 0) throw ValidationError("scale factor must be positive");
    std::vector<std::vector<Vec2>> cells;
    for (int c = 0; c < s.num_cells(); ++c) {
        std::vector<Vec2> verts;
        for (const auto& v : s.cell(c)) verts.push_back(factor * v);
        cells.push_back(std::move(verts));
    }
    std::vector<std::array<int, 4>> gl;
    for (int c = 0; c < s.num_cells(); ++c)
        for (int e = 0; e < s.cell_size(c); ++e) {
            EdgeRef p = s.partner(EdgeRef{c, e});
            if (std::tie(c, e) < std::tie(p.cell, p.edge)) gl.push_back({c, e, p.cell, p.edge});
        }
    std::vector<Marking> mk;
    for (const auto& m : s.markings()) mk.push_back({m.name, m.cell, factor * m.pos});
    FlatSurface out = build_surface(std::move(cells), gl, s.kind(), std::move(mk));
    for (int c = 0; c < s.num_cells(); ++c)
        for (int v = 0; v < s.cell_size(c); ++v)
            out.rename_vertex(out.vclass(c, v), s.cone_point(s.vclass(c, v)).name);
    return out;
}

FlatSurface q_template(int d) {
    if (d != 1 && d != 2) throw ValidationError("q_template supports d = 1 and d = 2");
    FlatSurface cover = (d == 1) ? lab_surface(Scalar(1, 2), Scalar(1, 2)) : staircase_surface();
    Triangulation Q = hyperelliptic_quotient(*cover.triangulation());
    Q.eliminate_all_flat_vertices();
    Q.validate();
    // canonical names: the single zero is z, poles are p1.. in class order; for d=1
    // the poles inherit the Weierstrass marking order w1..w5 -> p1..p5.
    int pole = 0;
    for (int cl = 0; cl < Q.num_vclasses(); ++cl) {
        auto& vi = Q.vinfo[cl];
        if (vi.is_pole) {
            if (d == 1 && vi.name.size() == 2 && vi.name[0] == 'w')
                vi.name = "p" + std::string(1, vi.name[1]);
            else
                vi.name = "p" + std::to_string(++pole);
        } else if (vi.order > 0) {
            vi.name = "z";
        }
    }
    FlatSurface out = Q.to_surface();
    if (stratum_signature(out).display() != (d == 1 ? "Q(1,-1^5)" : "Q(2,-1^6)"))
        throw ValidationError("q_template landed in an unexpected stratum");
    return out;
}

std::shared_ptr<const FlatSurface> template_by_name(const std::string& name, const Scalar& a, const Scalar& b) {
    if (name == "torus") return std::make_shared<const FlatSurface>(torus_surface());
    if (name == "pillowcase") return std::make_shared<const FlatSurface>(pillowcase_surface());
    if (name == "lab") return std::make_shared<const FlatSurface>(lab_surface(a, b));
    if (name == "staircase") return std::make_shared<const FlatSurface>(staircase_surface());
    if (name == "qtemplate1") return std::make_shared<const FlatSurface>(q_template(1));
    if (name == "qtemplate2") return std::make_shared<const FlatSurface>(q_template(2));
    throw ValidationError("unknown template '" + name + "'");
}

}  // namespace flatcount
