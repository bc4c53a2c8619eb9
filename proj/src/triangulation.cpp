#include "flatcount/triangulation.hpp"

#include <algorithm>
#include <numeric>

namespace flatcount {

int total_angle_pi(const std::vector<std::pair<Scalar, Scalar>>& corner_cos_sin);

namespace {

Scalar orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

bool point_in_tri_closed(const std::array<Vec2, 3>& t, const Vec2& p) {
    for (int i = 0; i < 3; ++i)
        if (orient(t[i], t[(i + 1) % 3], p).sign() < 0) return false;
    return true;
}

}  // namespace

std::vector<std::pair<int, int>> Triangulation::corners_of(int vclass) const {
    std::vector<std::pair<int, int>> out;
    for (int t = 0; t < num_tris(); ++t)
        for (int k = 0; k < 3; ++k)
            if (vclass_at(t, k) == vclass) out.push_back({t, k});
    return out;
}

int Triangulation::degree(int vclass) const { return static_cast<int>(corners_of(vclass).size()); }

Triangulation Triangulation::from_surface(const FlatSurface& s) {
    Triangulation T;
    T.kind = s.kind();
    T.field = s.field();

    // Fan triangulation of each cell from vertex 0; tri index bookkeeping per cell.
    std::vector<int> tri_base(s.num_cells() + 1, 0);
    for (int c = 0; c < s.num_cells(); ++c) tri_base[c + 1] = tri_base[c] + s.cell_size(c) - 2;
    int ntri = tri_base[s.num_cells()];
    T.tri.resize(ntri);
    T.partner.assign(3 * ntri, -1);
    T.trans.assign(3 * ntri, Transition{});
    T.vcl.assign(3 * ntri, -1);

    std::vector<std::array<int, 3>> hints(ntri, {-1, -1, -1});

    // Boundary edge (c,e) of the cell -> triangulation slot.
    auto boundary_slot = [&](int c, int e) {
        int n = s.cell_size(c);
        if (e == 0) return slot_of(tri_base[c], 0);
        if (e == n - 1) return slot_of(tri_base[c] + n - 3, 2);
        return slot_of(tri_base[c] + e - 1, 1);
    };

    for (int c = 0; c < s.num_cells(); ++c) {
        int n = s.cell_size(c);
        const auto& cell = s.cell(c);
        for (int i = 1; i <= n - 2; ++i) {
            int t = tri_base[c] + i - 1;
            T.tri[t] = {cell[0], cell[i], cell[i + 1]};
            hints[t] = {s.vclass(c, 0), s.vclass(c, i), s.vclass(c, i + 1)};
            if (i < n - 2) {
                // internal fan diagonal: edge 2 of t <-> edge 0 of t+1
                T.partner[slot_of(t, 2)] = slot_of(t + 1, 0);
                T.partner[slot_of(t + 1, 0)] = slot_of(t, 2);
                T.trans[slot_of(t, 2)] = Transition{};
                T.trans[slot_of(t + 1, 0)] = Transition{};
            }
        }
        for (int e = 0; e < n; ++e) {
            EdgeRef p = s.partner(EdgeRef{c, e});
            int sa = boundary_slot(c, e), sb = boundary_slot(p.cell, p.edge);
            T.partner[sa] = sb;
            T.partner[sb] = sa;
            T.trans[sa] = s.transition(EdgeRef{c, e});
            T.trans[sb] = s.transition(p);
        }
    }

    std::vector<VInfo> old_info;
    for (const auto& cp : s.cone_points()) old_info.push_back({cp.angle_pi, cp.order, cp.is_pole, cp.name});
    // recompute_classes matches hints against old ids directly
    {
        std::vector<VInfo> by_id = old_info;
        T.recompute_classes(hints, by_id, {});
    }

    for (const auto& m : s.markings()) {
        int found = -1;
        for (int t = tri_base[m.cell]; t < tri_base[m.cell + 1]; ++t)
            if (point_in_tri_closed(T.tri[t], m.pos)) { found = t; break; }
        if (found < 0) throw ValidationError("marking outside its cell fan");
        T.markings.push_back({m.name, found, m.pos});
    }
    return T;
}

void Triangulation::recompute_classes(const std::vector<std::array<int, 3>>& hints,
                                      const std::vector<VInfo>& old_info,
                                      const std::map<int, std::string>& fresh_names) {
    int ntri = num_tris();
    UnionFind uf(3 * ntri);
    for (int t = 0; t < ntri; ++t)
        for (int e = 0; e < 3; ++e) {
            int p = partner[slot_of(t, e)];
            uf.unite(slot_of(t, e), slot_of(tri_of(p), (edge_of(p) + 1) % 3));
        }
    std::map<int, int> root_to_class;
    vcl.assign(3 * ntri, -1);
    for (int t = 0; t < ntri; ++t)
        for (int k = 0; k < 3; ++k) {
            int r = uf.find(slot_of(t, k));
            auto [it, fresh] = root_to_class.try_emplace(r, static_cast<int>(root_to_class.size()));
            vcl[slot_of(t, k)] = it->second;
        }
    int ncl = static_cast<int>(root_to_class.size());

    std::vector<std::vector<std::pair<Scalar, Scalar>>> rot(ncl);
    std::vector<std::string> names(ncl);
    for (int t = 0; t < ntri; ++t)
        for (int k = 0; k < 3; ++k) {
            int cl = vcl[slot_of(t, k)];
            Vec2 out = tri[t][(k + 1) % 3] - tri[t][k];
            Vec2 in = tri[t][(k + 2) % 3] - tri[t][k];
            rot[cl].push_back({dot(out, in), cross(out, in)});
            int hint = hints.empty() ? -1 : hints[t][k];
            if (hint >= 0 && names[cl].empty()) names[cl] = old_info[hint].name;
            if (hint < -1) {
                auto it = fresh_names.find(hint);
                if (it != fresh_names.end() && names[cl].empty()) names[cl] = it->second;
            }
        }
    vinfo.assign(ncl, VInfo{});
    for (int cl = 0; cl < ncl; ++cl) {
        VInfo vi;
        vi.angle_pi = total_angle_pi(rot[cl]);
        if (kind == Kind::abelian) {
            if (vi.angle_pi % 2 != 0) throw ValidationError("odd cone angle on a translation surface");
            vi.order = vi.angle_pi / 2 - 1;
            vi.is_pole = false;
        } else {
            vi.order = vi.angle_pi - 2;
            vi.is_pole = vi.order == -1;
        }
        vi.name = names[cl].empty() ? "q" + std::to_string(cl) : names[cl];
        vinfo[cl] = vi;
    }
}

FlatSurface Triangulation::to_surface() const {
    std::vector<std::vector<Vec2>> cells;
    for (const auto& t : tri) cells.push_back({t[0], t[1], t[2]});
    std::vector<std::array<int, 4>> gl;
    for (int s = 0; s < 3 * num_tris(); ++s) {
        int p = partner[s];
        if (s < p) gl.push_back({tri_of(s), edge_of(s), tri_of(p), edge_of(p)});
    }
    std::vector<Marking> mk;
    for (const auto& m : markings) mk.push_back({m.name, m.tri, m.pos});
    FlatSurface s = build_surface(std::move(cells), gl, kind, std::move(mk));
    // carry vertex names over
    for (int t = 0; t < num_tris(); ++t)
        for (int k = 0; k < 3; ++k) s.rename_vertex(s.vclass(t, k), vinfo[vclass_at(t, k)].name);
    return s;
}

void Triangulation::validate() const {
    int ntri = num_tris();
    if (static_cast<int>(partner.size()) != 3 * ntri || static_cast<int>(trans.size()) != 3 * ntri ||
        static_cast<int>(vcl.size()) != 3 * ntri)
        throw ValidationError("triangulation: array sizes out of sync");
    for (int t = 0; t < ntri; ++t) {
        if (orient(tri[t][0], tri[t][1], tri[t][2]).sign() <= 0)
            throw ValidationError("triangulation: degenerate or misoriented triangle");
        for (int e = 0; e < 3; ++e) {
            int s = slot_of(t, e), p = partner[s];
            if (p < 0 || p >= 3 * ntri || partner[p] != s) throw ValidationError("triangulation: partner not involutive");
            if (p == s) throw ValidationError("triangulation: edge glued to itself");
            const Transition& x = trans[s];
            if (kind == Kind::abelian && x.sign != 1) throw ValidationError("triangulation: -1 transition on abelian kind");
            int t2 = tri_of(p), e2 = edge_of(p);
            if (x.apply(tri[t][e]) != tri[t2][(e2 + 1) % 3] || x.apply(tri[t][(e + 1) % 3]) != tri[t2][e2])
                throw ValidationError("triangulation: transition does not match glued edge");
            Transition y = trans[p];
            if (compose(y, x).sign != 1 || !compose(y, x).t.is_zero())
                throw ValidationError("triangulation: transitions not mutually inverse");
            if (vcl[s] != vcl[slot_of(t2, (e2 + 1) % 3)]) throw ValidationError("triangulation: vertex classes inconsistent");
        }
    }
    for (const auto& m : markings)
        if (!point_in_tri_closed(tri[m.tri], m.pos)) throw ValidationError("triangulation: marking escaped its triangle");
}

int Triangulation::locate_triangle(int hint_tri, const Vec2& pos) const {
    if (hint_tri >= 0 && hint_tri < num_tris() && point_in_tri_closed(tri[hint_tri], pos)) return hint_tri;
    for (int t = 0; t < num_tris(); ++t)
        if (point_in_tri_closed(tri[t], pos)) return t;
    return -1;
}

namespace {

// Shared rewiring helper for local retriangulations.  `moved` maps surviving old
// slots to (new slot, chart map old-chart -> new-chart).
struct Rewire {
    std::map<int, std::pair<int, Transition>> moved;

    void apply(const Triangulation& old, Triangulation& out) const {
        for (const auto& [olds, target] : moved) {
            auto [news, gamma] = target;
            int oldp = old.partner[olds];
            Transition tau = old.trans[olds];  // old chart -> old partner chart
            int newp;
            Transition gamma_p;
            auto it = moved.find(oldp);
            if (it != moved.end()) {
                newp = it->second.first;
                gamma_p = it->second.second;
            } else {
                newp = oldp;
                gamma_p = Transition{};
            }
            Transition nt = compose(gamma_p, compose(tau, gamma.inverse()));
            out.partner[news] = newp;
            out.trans[news] = nt;
            out.partner[newp] = news;
            out.trans[newp] = nt.inverse();
        }
    }
};

}  // namespace

bool Triangulation::flip_legal(int t, int e) const {
    int p = partner[slot_of(t, e)];
    int t2 = tri_of(p), e2 = edge_of(p);
    if (t2 == t) return false;
    const Transition& x = trans[slot_of(t, e)];
    Vec2 A = tri[t][e], B = tri[t][(e + 1) % 3], C = tri[t][(e + 2) % 3];
    Vec2 D = x.inverse().apply(tri[t2][(e2 + 2) % 3]);
    return orient(A, D, C).sign() > 0 && orient(D, B, C).sign() > 0;
}

void Triangulation::flip(int t, int e) {
    if (!flip_legal(t, e)) throw std::logic_error("flip on non-flippable edge");
    int p = partner[slot_of(t, e)];
    int t2 = tri_of(p), e2 = edge_of(p);
    Transition x = trans[slot_of(t, e)];  // t chart -> t2 chart
    Vec2 A = tri[t][e], B = tri[t][(e + 1) % 3], C = tri[t][(e + 2) % 3];
    Vec2 D = x.inverse().apply(tri[t2][(e2 + 2) % 3]);

    std::vector<std::array<int, 3>> hints(num_tris(), {-1, -1, -1});
    for (int i = 0; i < num_tris(); ++i)
        for (int k = 0; k < 3; ++k) hints[i][k] = vcl[slot_of(i, k)];
    int clA = vcl[slot_of(t, e)], clB = vcl[slot_of(t, (e + 1) % 3)], clC = vcl[slot_of(t, (e + 2) % 3)];
    int clD = vcl[slot_of(t2, (e2 + 2) % 3)];

    Triangulation out = *this;
    out.tri[t] = {A, D, C};
    out.tri[t2] = {D, B, C};
    hints[t] = {clA, clD, clC};
    hints[t2] = {clD, clB, clC};

    Rewire rw;
    Transition xid{};
    Transition xinv = x.inverse();  // t2 chart -> t chart
    rw.moved[slot_of(t, (e + 1) % 3)] = {slot_of(t2, 1), xid};   // B->C
    rw.moved[slot_of(t, (e + 2) % 3)] = {slot_of(t, 2), xid};    // C->A
    rw.moved[slot_of(t2, (e2 + 1) % 3)] = {slot_of(t, 0), xinv};  // B'->C'  ==  A->D
    rw.moved[slot_of(t2, (e2 + 2) % 3)] = {slot_of(t2, 0), xinv}; // C'->A'  ==  D->B
    rw.apply(*this, out);
    // new internal diagonal D->C / C->D
    out.partner[slot_of(t, 1)] = slot_of(t2, 2);
    out.partner[slot_of(t2, 2)] = slot_of(t, 1);
    out.trans[slot_of(t, 1)] = Transition{};
    out.trans[slot_of(t2, 2)] = Transition{};

    // markings: t keeps chart, t2 content maps through x^{-1} into t's chart
    for (auto& m : out.markings) {
        if (m.tri == t || m.tri == t2) {
            Vec2 pos = (m.tri == t2) ? xinv.apply(m.pos) : m.pos;
            if (point_in_tri_closed(out.tri[t], pos)) { m.tri = t; m.pos = pos; }
            else if (point_in_tri_closed(out.tri[t2], pos)) { m.tri = t2; m.pos = pos; }
            else throw std::logic_error("flip lost a marking");
        }
    }

    std::vector<VInfo> old_info = vinfo;
    out.recompute_classes(hints, old_info, {});
    *this = std::move(out);
}

int Triangulation::insert_point(int t, const Vec2& pos, const std::string& name) {
    for (int k = 0; k < 3; ++k)
        if (tri[t][k] == pos) return vclass_at(t, k);

    int on_edge = -1;
    for (int k = 0; k < 3; ++k) {
        Scalar o = orient(tri[t][k], tri[t][(k + 1) % 3], pos);
        if (o.sign() < 0) throw std::invalid_argument("insert_point: position outside triangle");
        if (o.sign() == 0) on_edge = k;
    }

    std::vector<std::array<int, 3>> hints(num_tris(), {-1, -1, -1});
    for (int i = 0; i < num_tris(); ++i)
        for (int k = 0; k < 3; ++k) hints[i][k] = vcl[slot_of(i, k)];
    std::vector<VInfo> old_info = vinfo;
    std::map<int, std::string> fresh{{-2, name}};

    if (on_edge < 0) {
        // interior: 1 -> 3 fan
        Vec2 A = tri[t][0], B = tri[t][1], C = tri[t][2];
        int clA = vcl[slot_of(t, 0)], clB = vcl[slot_of(t, 1)], clC = vcl[slot_of(t, 2)];
        Triangulation out = *this;
        int n1 = out.num_tris(), n2 = n1 + 1;
        out.tri[t] = {A, B, pos};
        out.tri.push_back({B, C, pos});
        out.tri.push_back({C, A, pos});
        out.partner.resize(3 * (n2 + 1), -1);
        out.trans.resize(3 * (n2 + 1));
        hints[t] = {clA, clB, -2};
        hints.push_back({clB, clC, -2});
        hints.push_back({clC, clA, -2});

        Rewire rw;
        rw.moved[slot_of(t, 0)] = {slot_of(t, 0), Transition{}};
        rw.moved[slot_of(t, 1)] = {slot_of(n1, 0), Transition{}};
        rw.moved[slot_of(t, 2)] = {slot_of(n2, 0), Transition{}};
        rw.apply(*this, out);
        auto link = [&](int sa, int sb) {
            out.partner[sa] = sb;
            out.partner[sb] = sa;
            out.trans[sa] = Transition{};
            out.trans[sb] = Transition{};
        };
        link(slot_of(t, 1), slot_of(n1, 2));   // B->P / P->B
        link(slot_of(n1, 1), slot_of(n2, 2));  // C->P / P->C
        link(slot_of(n2, 1), slot_of(t, 2));   // A->P / P->A
        for (auto& m : out.markings) {
            if (m.tri != t) continue;
            for (int cand : {t, n1, n2})
                if (point_in_tri_closed(out.tri[cand], m.pos)) { m.tri = cand; break; }
        }
        out.recompute_classes(hints, old_info, fresh);
        *this = std::move(out);
    } else {
        int e = on_edge;
        int p = partner[slot_of(t, e)];
        int t2 = tri_of(p), e2 = edge_of(p);
        if (t2 == t) throw std::logic_error("insert_point: edge glued to another edge of the same triangle unsupported");
        Transition x = trans[slot_of(t, e)];
        Vec2 A = tri[t][e], B = tri[t][(e + 1) % 3], C = tri[t][(e + 2) % 3];
        Vec2 P = pos, P2 = x.apply(pos);
        Vec2 A2 = tri[t2][e2], B2 = tri[t2][(e2 + 1) % 3], C2 = tri[t2][(e2 + 2) % 3];
        int clA = vcl[slot_of(t, e)], clB = vcl[slot_of(t, (e + 1) % 3)], clC = vcl[slot_of(t, (e + 2) % 3)];
        int clA2 = vcl[slot_of(t2, e2)], clB2 = vcl[slot_of(t2, (e2 + 1) % 3)], clC2 = vcl[slot_of(t2, (e2 + 2) % 3)];

        Triangulation out = *this;
        int u2 = out.num_tris(), v2 = u2 + 1;
        out.tri[t] = {A, P, C};
        out.tri[t2] = {A2, P2, C2};
        out.tri.push_back({P, B, C});    // u2
        out.tri.push_back({P2, B2, C2});  // v2
        out.partner.resize(3 * (v2 + 1), -1);
        out.trans.resize(3 * (v2 + 1));
        hints[t] = {clA, -2, clC};
        hints[t2] = {clA2, -2, clC2};
        hints.push_back({-2, clB, clC});
        hints.push_back({-2, clB2, clC2});

        Rewire rw;
        rw.moved[slot_of(t, (e + 1) % 3)] = {slot_of(u2, 1), Transition{}};    // B->C
        rw.moved[slot_of(t, (e + 2) % 3)] = {slot_of(t, 2), Transition{}};     // C->A
        rw.moved[slot_of(t2, (e2 + 1) % 3)] = {slot_of(v2, 1), Transition{}};  // B2->C2
        rw.moved[slot_of(t2, (e2 + 2) % 3)] = {slot_of(t2, 2), Transition{}};  // C2->A2
        rw.apply(*this, out);
        auto link = [&](int sa, int sb, const Transition& tr) {
            out.partner[sa] = sb;
            out.partner[sb] = sa;
            out.trans[sa] = tr;
            out.trans[sb] = tr.inverse();
        };
        // sub-edges across the split gluing: chi([A,P]) = [B2,P2], chi([P,B]) = [P2,A2]
        link(slot_of(t, 0), slot_of(v2, 0), x);
        link(slot_of(u2, 0), slot_of(t2, 0), x);
        // internal spokes
        link(slot_of(t, 1), slot_of(u2, 2), Transition{});   // P->C / C->P
        link(slot_of(t2, 1), slot_of(v2, 2), Transition{});  // P2->C2 / C2->P2
        for (auto& m : out.markings) {
            if (m.tri == t) {
                if (!point_in_tri_closed(out.tri[t], m.pos)) m.tri = u2;
            } else if (m.tri == t2) {
                if (!point_in_tri_closed(out.tri[t2], m.pos)) m.tri = v2;
            }
        }
        out.recompute_classes(hints, old_info, fresh);
        *this = std::move(out);
    }
    // triangle t kept its chart in both branches and owns the inserted corner
    for (int k = 0; k < 3; ++k)
        if (tri[t][k] == pos) return vclass_at(t, k);
    throw std::logic_error("insert_point: inserted vertex not found");
}

bool Triangulation::try_remove_degree3(int vclass) {
    auto corners = corners_of(vclass);
    if (corners.size() != 3) return false;
    // walk around to get cyclic order and developed placements
    int t0 = corners[0].first, k0 = corners[0].second;
    std::array<std::pair<int, int>, 3> cyc;
    std::array<Transition, 3> place;
    cyc[0] = {t0, k0};
    place[0] = Transition{1, -tri[t0][k0]};
    for (int i = 0; i < 2; ++i) {
        auto [t, k] = cyc[i];
        Transition x = trans[slot_of(t, k)];
        cyc[i + 1] = next_corner(t, k);
        place[i + 1] = compose(place[i], x.inverse());
    }
    // closure check: crossing the last edge returns to the start with trivial holonomy
    {
        auto [t, k] = cyc[2];
        Transition x = trans[slot_of(t, k)];
        Transition back = compose(place[2], x.inverse());
        auto [tb, kb] = next_corner(t, k);
        if (tb != t0 || kb != k0) return false;
        if (back.sign != place[0].sign || !(back.t == place[0].t)) return false;
    }
    if (cyc[0].first == cyc[1].first || cyc[1].first == cyc[2].first || cyc[0].first == cyc[2].first) return false;

    std::array<Vec2, 3> link;
    std::array<int, 3> linkcl;
    for (int i = 0; i < 3; ++i) {
        auto [t, k] = cyc[i];
        link[i] = place[i].apply(tri[t][(k + 1) % 3]);
        linkcl[i] = vcl[slot_of(t, (k + 1) % 3)];
    }
    // the developed link triangle must be positive with the vertex strictly inside
    Vec2 origin{0, 0};
    for (int i = 0; i < 3; ++i)
        if (orient(link[i], link[(i + 1) % 3], origin).sign() <= 0) return false;

    std::vector<std::array<int, 3>> hints;
    std::vector<VInfo> old_info = vinfo;
    std::string gone_name = vinfo[vclass].name;

    // build new triangulation: drop the three star triangles, add the link triangle
    std::vector<int> keep_map(num_tris(), -1);
    Triangulation out;
    out.kind = kind;
    out.field = field;
    int w = 0;
    for (int t = 0; t < num_tris(); ++t) {
        if (t == cyc[0].first || t == cyc[1].first || t == cyc[2].first) continue;
        keep_map[t] = w++;
        out.tri.push_back(tri[t]);
        hints.push_back({vcl[slot_of(t, 0)], vcl[slot_of(t, 1)], vcl[slot_of(t, 2)]});
    }
    int W = w;
    out.tri.push_back(link);
    hints.push_back({linkcl[0], linkcl[1], linkcl[2]});
    out.partner.assign(3 * (W + 1), -1);
    out.trans.assign(3 * (W + 1), Transition{});

    // slot translation: old slot -> (new slot, chart map)
    auto translate = [&](int olds) -> std::pair<int, Transition> {
        int t = tri_of(olds), e = edge_of(olds);
        if (keep_map[t] >= 0) return {slot_of(keep_map[t], e), Transition{}};
        for (int i = 0; i < 3; ++i) {
            auto [st, sk] = cyc[i];
            if (t != st) continue;
            if (e == (sk + 1) % 3) return {slot_of(W, i), place[i]};  // outer link edge
            return {-1, Transition{}};                                // star-internal edge, drops out
        }
        return {-1, Transition{}};
    };
    for (int olds = 0; olds < 3 * num_tris(); ++olds) {
        auto [news, gamma] = translate(olds);
        if (news < 0) continue;
        int oldp = partner[olds];
        auto [newp, gamma_p] = translate(oldp);
        if (newp < 0) throw std::logic_error("flat vertex removal: outer edge glued to star interior");
        Transition nt = compose(gamma_p, compose(trans[olds], gamma.inverse()));
        out.partner[news] = newp;
        out.trans[news] = nt;
    }
    for (int s = 0; s < 3 * (W + 1); ++s)
        if (out.partner[s] < 0) throw std::logic_error("flat vertex removal: unmatched edge");

    for (const auto& m : markings) {
        TriMarking nm = m;
        if (keep_map[m.tri] >= 0) {
            nm.tri = keep_map[m.tri];
        } else {
            for (int i = 0; i < 3; ++i)
                if (cyc[i].first == m.tri) nm.pos = place[i].apply(m.pos);
            nm.tri = W;
            if (!point_in_tri_closed(out.tri[W], nm.pos)) throw std::logic_error("flat vertex removal lost a marking");
        }
        out.markings.push_back(nm);
    }
    out.markings.push_back({gone_name, W, origin});
    out.recompute_classes(hints, old_info, {});
    *this = std::move(out);
    return true;
}

void Triangulation::eliminate_flat_vertex(int vclass) {
    if (vinfo[vclass].angle_pi != 2)
        throw std::invalid_argument("eliminate_flat_vertex: cone angle is not 2*pi");
    std::string name = vinfo[vclass].name;
    for (int iter = 0; iter < 1000; ++iter) {
        if (try_remove_degree3(vclass)) return;
        // reduce degree: flip an edge incident to the vertex
        auto corners = corners_of(vclass);
        bool flipped = false;
        for (auto [t, k] : corners) {
            for (int e : {k, (k + 2) % 3}) {
                if (flip_legal(t, e)) {
                    flip(t, e);
                    flipped = true;
                    break;
                }
            }
            if (flipped) break;
        }
        if (flipped) {
            // vertex class ids may shift after recompute; re-locate by name
            int found = -1;
            for (int cl = 0; cl < num_vclasses(); ++cl)
                if (vinfo[cl].name == name) found = cl;
            if (found < 0) throw std::logic_error("eliminate_flat_vertex: lost the vertex");
            vclass = found;
            continue;
        }
        // last resort: flip a link edge to rearrange the star
        for (auto [t, k] : corners) {
            int e = (k + 1) % 3;
            if (flip_legal(t, e)) {
                flip(t, e);
                flipped = true;
                break;
            }
        }
        if (!flipped) throw std::logic_error("eliminate_flat_vertex: no legal flip");
        int found = -1;
        for (int cl = 0; cl < num_vclasses(); ++cl)
            if (vinfo[cl].name == name) found = cl;
        if (found < 0) throw std::logic_error("eliminate_flat_vertex: lost the vertex");
        vclass = found;
    }
    throw std::logic_error("eliminate_flat_vertex: did not terminate");
}

void Triangulation::eliminate_all_flat_vertices() {
    for (;;) {
        int target = -1;
        for (int cl = 0; cl < num_vclasses(); ++cl)
            if (vinfo[cl].angle_pi == 2) { target = cl; break; }
        if (target < 0) return;
        if (num_vclasses() == 1) return;  // keep at least one vertex
        eliminate_flat_vertex(target);
    }
}

}  // namespace flatcount
