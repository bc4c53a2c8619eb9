#include "flatcount/surface.hpp"
#include "flatcount/triangulation.hpp"

#include "json.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace flatcount {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Vec2 FlatSurface::edge_vector(const EdgeRef& e) const {
    const auto& cell = cells_[e.cell];
    int n = static_cast<int>(cell.size());
    return cell[(e.edge + 1) % n] - cell[e.edge];
}

std::optional<Marking> FlatSurface::marking_by_name(const std::string& name) const {
    for (const auto& m : markings_)
        if (m.name == name) return m;
    return std::nullopt;
}

std::optional<int> FlatSurface::vclass_by_name(const std::string& name) const {
    for (const auto& cp : cone_points_)
        if (cp.name == name) return cp.vclass;
    return std::nullopt;
}

std::shared_ptr<const Triangulation> FlatSurface::triangulation() const {
    if (!tri_cache_) tri_cache_ = std::make_shared<const Triangulation>(Triangulation::from_surface(*this));
    return tri_cache_;
}

// Total cone angle of a set of corners, as an integer multiple of pi.  Every corner
// angle lies in (0, pi); the sum is tracked as a rotation vector plus a half-turn
// crossing count, so the result is exact.
int total_angle_pi(const std::vector<std::pair<Scalar, Scalar>>& corner_cos_sin) {
    Vec2 v{1, 0};
    int half_turns = 0;
    for (const auto& [c, s] : corner_cos_sin) {
        if (s.sign() <= 0) throw ValidationError("corner angle not in (0,pi)");
        Vec2 w{c * v.x - s * v.y, s * v.x + c * v.y};
        int before = v.y.sign(), after = w.y.sign();
        if ((before > 0 && after <= 0) || (before < 0 && after >= 0)) ++half_turns;
        v = w;
    }
    if (v.y.sign() != 0) throw ValidationError("internal: cone angle not a multiple of pi");
    return half_turns;
}

FlatSurface build_surface(std::vector<std::vector<Vec2>> cells,
                          const std::vector<std::array<int, 4>>& gluings, Kind kind,
                          std::vector<Marking> markings) {
    FlatSurface s;
    s.kind_ = kind;
    s.cells_ = std::move(cells);
    s.markings_ = std::move(markings);

    int ncells = static_cast<int>(s.cells_.size());
    if (ncells == 0) throw ValidationError("no cells");

    // One common scalar field across everything.
    unsigned long field = 0;
    for (const auto& cell : s.cells_)
        for (const auto& v : cell) {
            field = Scalar::merge_fields(field, v.x.field());
            field = Scalar::merge_fields(field, v.y.field());
        }
    s.field_ = field;

    // Cells: simple, strictly convex, positively oriented.  Collinear vertices are
    // rejected; fold points and marked points on edges must be modeled with
    // separate cells instead.
    Scalar area(0);
    for (int c = 0; c < ncells; ++c) {
        const auto& cell = s.cells_[c];
        int n = static_cast<int>(cell.size());
        if (n < 3) throw ValidationError("cell " + std::to_string(c) + " has fewer than 3 vertices");
        Scalar twice_area(0);
        for (int i = 0; i < n; ++i) {
            Vec2 e1 = cell[(i + 1) % n] - cell[i];
            Vec2 e2 = cell[(i + 2) % n] - cell[(i + 1) % n];
            if (e1.is_zero()) throw ValidationError("cell " + std::to_string(c) + " has a zero-length edge");
            if (cross(e1, e2).sign() <= 0)
                throw ValidationError("cell " + std::to_string(c) +
                                      " is not strictly convex and counterclockwise");
            twice_area += cross(cell[i], cell[(i + 1) % n]);
        }
        area += Scalar(1, 2) * twice_area;
    }
    s.area_ = area;
    if (s.area_.sign() <= 0) throw ValidationError("nonpositive total area");

    // Perfect matching of directed edges.
    s.partner_.resize(ncells);
    s.transition_.resize(ncells);
    for (int c = 0; c < ncells; ++c) {
        s.partner_[c].assign(s.cells_[c].size(), EdgeRef{});
        s.transition_[c].assign(s.cells_[c].size(), Transition{});
    }
    auto edge_ok = [&](int c, int e) {
        return c >= 0 && c < ncells && e >= 0 && e < static_cast<int>(s.cells_[c].size());
    };
    int nedges = 0;
    for (int c = 0; c < ncells; ++c) nedges += static_cast<int>(s.cells_[c].size());
    int matched = 0;
    for (const auto& g : gluings) {
        EdgeRef a{g[0], g[1]}, b{g[2], g[3]};
        if (!edge_ok(a.cell, a.edge) || !edge_ok(b.cell, b.edge)) throw ValidationError("gluing references a missing edge");
        if (a == b) throw ValidationError("edge glued to itself; split the cell so the fold point is a vertex");
        if (s.partner_[a.cell][a.edge] != EdgeRef{} || s.partner_[b.cell][b.edge] != EdgeRef{})
            throw ValidationError("edge glued twice");
        Vec2 va = s.edge_vector(a), vb = s.edge_vector(b);
        Transition ta, tb;
        int na = static_cast<int>(s.cells_[a.cell].size());
        int nb = static_cast<int>(s.cells_[b.cell].size());
        const Vec2& A = s.cells_[a.cell][a.edge];
        const Vec2& Bp = s.cells_[b.cell][(b.edge + 1) % nb];
        const Vec2& Ap = s.cells_[b.cell][b.edge];
        (void)na;
        if (vb == -va) {
            ta = Transition{1, Bp - A};            // p -> p + (B' - A)
        } else if (vb == va) {
            if (kind == Kind::abelian)
                throw ValidationError("gluing direction violating kind: translation surface needs opposite edge vectors");
            ta = Transition{-1, A + Bp};           // p -> (A + B') - p
        } else {
            if (norm2(va) != norm2(vb)) throw ValidationError("mismatched edge lengths in gluing");
            throw ValidationError("glued edges are neither equal nor opposite vectors");
        }
        (void)Ap;
        tb = ta.inverse();
        s.partner_[a.cell][a.edge] = b;
        s.partner_[b.cell][b.edge] = a;
        s.transition_[a.cell][a.edge] = ta;
        s.transition_[b.cell][b.edge] = tb;
        matched += 2;
    }
    if (matched != nedges) throw ValidationError("gluings do not form a perfect matching of directed edges");

    // Connectivity over cells.
    {
        std::vector<bool> seen(ncells, false);
        std::vector<int> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            int c = stack.back();
            stack.pop_back();
            for (int e = 0; e < static_cast<int>(s.cells_[c].size()); ++e) {
                int c2 = s.partner_[c][e].cell;
                if (!seen[c2]) {
                    seen[c2] = true;
                    stack.push_back(c2);
                }
            }
        }
        if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
            throw ValidationError("surface is not connected");
    }

    // Vertex classes: start of e is identified with end of partner(e).
    std::vector<int> corner_base(ncells + 1, 0);
    for (int c = 0; c < ncells; ++c) corner_base[c + 1] = corner_base[c] + static_cast<int>(s.cells_[c].size());
    UnionFind uf(corner_base[ncells]);
    for (int c = 0; c < ncells; ++c) {
        int n = static_cast<int>(s.cells_[c].size());
        for (int e = 0; e < n; ++e) {
            EdgeRef p = s.partner_[c][e];
            int np = static_cast<int>(s.cells_[p.cell].size());
            uf.unite(corner_base[c] + e, corner_base[p.cell] + (p.edge + 1) % np);
        }
    }
    std::map<int, int> root_to_class;
    s.vclass_.resize(ncells);
    for (int c = 0; c < ncells; ++c) {
        int n = static_cast<int>(s.cells_[c].size());
        s.vclass_[c].assign(n, -1);
        for (int v = 0; v < n; ++v) {
            int r = uf.find(corner_base[c] + v);
            auto [it, fresh] = root_to_class.try_emplace(r, static_cast<int>(root_to_class.size()));
            s.vclass_[c][v] = it->second;
        }
    }
    int nclasses = static_cast<int>(root_to_class.size());

    // Cone angles per class.
    std::vector<std::vector<std::pair<Scalar, Scalar>>> corner_rot(nclasses);
    for (int c = 0; c < ncells; ++c) {
        int n = static_cast<int>(s.cells_[c].size());
        for (int v = 0; v < n; ++v) {
            Vec2 out = s.cells_[c][(v + 1) % n] - s.cells_[c][v];
            Vec2 in = s.cells_[c][(v + n - 1) % n] - s.cells_[c][v];
            corner_rot[s.vclass_[c][v]].push_back({dot(out, in), cross(out, in)});
        }
    }
    s.cone_points_.resize(nclasses);
    int zero_count = 0, pole_count = 0, marked_count = 0;
    for (int k = 0; k < nclasses; ++k) {
        ConePoint cp;
        cp.vclass = k;
        cp.angle_pi = total_angle_pi(corner_rot[k]);
        if (cp.angle_pi <= 0) throw ValidationError("vertex class with nonpositive cone angle");
        if (kind == Kind::abelian) {
            if (cp.angle_pi % 2 != 0)
                throw ValidationError("translation surface has a vertex with odd multiple of pi");
            cp.order = cp.angle_pi / 2 - 1;  // abelian degree n
            cp.is_pole = false;
        } else {
            cp.order = cp.angle_pi - 2;  // quadratic order d
            cp.is_pole = (cp.order == -1);
        }
        s.cone_points_[k] = cp;
        if (cp.is_pole) ++pole_count;
        else if (cp.order > 0) ++zero_count;
        else ++marked_count;
    }
    // Default names: unique positive-order zero is "z"; otherwise z1,..; poles p1,..; regular m1,..
    {
        int zi = 0, pi = 0, mi = 0;
        for (auto& cp : s.cone_points_) {
            if (cp.is_pole) cp.name = "p" + std::to_string(++pi);
            else if (cp.order > 0) cp.name = (zero_count == 1) ? "z" : "z" + std::to_string(++zi);
            else cp.name = "m" + std::to_string(++mi);
        }
    }

    // Euler characteristic and Gauss-Bonnet.
    int V = nclasses, E = nedges / 2, F = ncells;
    int chi = V - E + F;
    if (chi % 2 != 0) throw ValidationError("odd Euler characteristic");
    s.genus_ = (2 - chi) / 2;
    long gb = 0;
    for (const auto& cp : s.cone_points_) gb += (kind == Kind::abelian) ? 2 * cp.order : cp.order;
    long expect = (kind == Kind::abelian) ? (2 * s.genus_ - 2) * 2 : 4 * s.genus_ - 4;
    if (gb != expect) throw ValidationError("Gauss-Bonnet mismatch against Euler characteristic");

    // Markings must lie inside (or on the boundary of) their cell.
    for (const auto& m : s.markings_) {
        if (m.cell < 0 || m.cell >= ncells) throw ValidationError("marking in missing cell");
        const auto& cell = s.cells_[m.cell];
        int n = static_cast<int>(cell.size());
        for (int i = 0; i < n; ++i) {
            if (cross(cell[(i + 1) % n] - cell[i], m.pos - cell[i]).sign() < 0)
                throw ValidationError("marking '" + m.name + "' lies outside its cell");
        }
        s.field_ = Scalar::merge_fields(s.field_, m.pos.x.field());
        s.field_ = Scalar::merge_fields(s.field_, m.pos.y.field());
    }

    return s;
}

StratumSignature stratum_signature(const FlatSurface& s) {
    StratumSignature sig;
    sig.kind = s.kind();
    sig.genus = s.genus();
    for (const auto& cp : s.cone_points()) {
        if (cp.order != 0) sig.orders.push_back(cp.order);
        else ++sig.marked_points;
    }
    std::sort(sig.orders.begin(), sig.orders.end(), std::greater<int>());
    return sig;
}

Scalar surface_area(const FlatSurface& s) { return s.area(); }

std::string StratumSignature::display() const {
    std::ostringstream os;
    os << (kind == Kind::abelian ? "H(" : "Q(");
    bool first = true;
    int poles = 0;
    for (int d : orders) {
        if (d == -1) { ++poles; continue; }
        os << (first ? "" : ",") << d;
        first = false;
    }
    if (poles == 1) { os << (first ? "" : ",") << "-1"; first = false; }
    else if (poles > 1) { os << (first ? "" : ",") << "-1^" << poles; first = false; }
    if (first && kind == Kind::abelian && marked_points > 0) os << "0";
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// JSON serialization (bit-exact round trip; see docs/schema/surface.schema.json)

using ordered_json = nlohmann::ordered_json;

std::string surface_to_json(const FlatSurface& s) {
    ordered_json j;
    j["format"] = "flatcount-surface";
    j["version"] = 1;
    j["kind"] = s.kind() == Kind::abelian ? "abelian" : "quadratic";
    if (s.field() == 0) j["field"] = "rational";
    else j["field"] = s.field();
    ordered_json cells = ordered_json::array();
    for (int c = 0; c < s.num_cells(); ++c) {
        ordered_json cell = ordered_json::array();
        for (const auto& v : s.cell(c)) cell.push_back(ordered_json::array({v.x.str(), v.y.str()}));
        cells.push_back(std::move(cell));
    }
    j["cells"] = std::move(cells);
    ordered_json gl = ordered_json::array();
    for (int c = 0; c < s.num_cells(); ++c) {
        for (int e = 0; e < s.cell_size(c); ++e) {
            EdgeRef p = s.partner(EdgeRef{c, e});
            if (std::tie(c, e) < std::tie(p.cell, p.edge)) gl.push_back(ordered_json::array({c, e, p.cell, p.edge}));
        }
    }
    j["gluings"] = std::move(gl);
    ordered_json mk = ordered_json::array();
    for (const auto& m : s.markings()) {
        ordered_json o;
        o["name"] = m.name;
        o["cell"] = m.cell;
        o["x"] = m.pos.x.str();
        o["y"] = m.pos.y.str();
        mk.push_back(std::move(o));
    }
    j["markings"] = std::move(mk);
    ordered_json names = ordered_json::array();
    for (const auto& cp : s.cone_points()) names.push_back(cp.name);
    j["vertex_names"] = std::move(names);
    return j.dump(2) + "\n";
}

FlatSurface surface_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (j.value("format", "") != "flatcount-surface") throw ParseError("not a flatcount surface file");
        Kind kind = j.at("kind").get<std::string>() == "abelian" ? Kind::abelian : Kind::quadratic;
        std::vector<std::vector<Vec2>> cells;
        for (const auto& cell : j.at("cells")) {
            std::vector<Vec2> verts;
            for (const auto& v : cell)
                verts.push_back({Scalar::parse(v.at(0).get<std::string>()), Scalar::parse(v.at(1).get<std::string>())});
            cells.push_back(std::move(verts));
        }
        std::vector<std::array<int, 4>> gluings;
        for (const auto& g : j.at("gluings"))
            gluings.push_back({g.at(0).get<int>(), g.at(1).get<int>(), g.at(2).get<int>(), g.at(3).get<int>()});
        std::vector<Marking> markings;
        for (const auto& m : j.at("markings"))
            markings.push_back({m.at("name").get<std::string>(), m.at("cell").get<int>(),
                                {Scalar::parse(m.at("x").get<std::string>()), Scalar::parse(m.at("y").get<std::string>())}});
        FlatSurface s = build_surface(std::move(cells), gluings, kind, std::move(markings));
        if (j.contains("vertex_names")) {
            const auto& names = j.at("vertex_names");
            if (static_cast<int>(names.size()) != s.num_vclasses())
                throw ParseError("vertex_names length does not match vertex classes");
            for (int k = 0; k < s.num_vclasses(); ++k) s.rename_vertex(k, names.at(k).get<std::string>());
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed surface document: ") + e.what());
    }
}

}  // namespace flatcount
