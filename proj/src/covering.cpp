#include "flatcount/covering.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace flatcount {

namespace {

Scalar half(const Scalar& s) { return Scalar(1, 2) * s; }

// Assign lifted vertex names from base names: single preimage keeps the base
// name, split preimages get prime / double-prime by sheet.
void name_lifted_classes(Triangulation& total, const Triangulation& base,
                         const std::vector<std::pair<int, int>>& origin,
                         std::vector<std::vector<std::string>>* lifted_names_out) {
    int nbase = base.num_vclasses();
    std::vector<std::set<int>> classes_of_base(nbase);
    std::vector<std::map<int, int>> sheet0_class(nbase);  // base class -> (total class -> sheet seen)
    for (int t = 0; t < total.num_tris(); ++t) {
        auto [bt, sheet] = origin[t];
        for (int k = 0; k < 3; ++k) {
            int bc = base.vclass_at(bt, k);
            int tc = total.vclass_at(t, k);
            classes_of_base[bc].insert(tc);
            auto it = sheet0_class[bc].find(tc);
            if (it == sheet0_class[bc].end()) sheet0_class[bc][tc] = sheet;
            else it->second = std::min(it->second, sheet);
        }
    }
    if (lifted_names_out) lifted_names_out->assign(nbase, {});
    for (int bc = 0; bc < nbase; ++bc) {
        const std::string& bn = base.vinfo[bc].name;
        if (classes_of_base[bc].size() == 1) {
            int tc = *classes_of_base[bc].begin();
            total.vinfo[tc].name = bn;
            if (lifted_names_out) (*lifted_names_out)[bc] = {bn};
        } else if (classes_of_base[bc].size() == 2) {
            // sheet of the lowest-index corner decides which copy is primed once
            std::vector<std::pair<int, int>> ordered(sheet0_class[bc].begin(), sheet0_class[bc].end());
            std::sort(ordered.begin(), ordered.end(),
                      [](const auto& a, const auto& b) { return a.second < b.second; });
            total.vinfo[ordered[0].first].name = bn + "'";
            total.vinfo[ordered[1].first].name = bn + "''";
            if (lifted_names_out) (*lifted_names_out)[bc] = {bn + "'", bn + "''"};
        } else {
            throw CoverError("degree-2 cover produced more than two preimages of a vertex");
        }
    }
}

std::shared_ptr<const FlatSurface> surface_view(const Triangulation& T) {
    return std::make_shared<const FlatSurface>(T.to_surface());
}

}  // namespace

CoveringMap orientation_double_cover(std::shared_ptr<const FlatSurface> base_surface) {
    if (base_surface->kind() != Kind::quadratic)
        throw CoverError("orientation double cover: input must be a half-translation surface");
    auto base = base_surface->triangulation();
    const Triangulation& B = *base;
    int n = B.num_tris();

    Triangulation T;
    T.kind = Kind::abelian;
    T.field = B.field;
    T.tri.resize(2 * n);
    T.partner.assign(6 * n, -1);
    T.trans.assign(6 * n, Transition{});
    for (int t = 0; t < n; ++t) {
        T.tri[t] = B.tri[t];
        T.tri[t + n] = {-B.tri[t][0], -B.tri[t][1], -B.tri[t][2]};
    }
    for (int s = 0; s < 3 * n; ++s) {
        int p = B.partner[s];
        const Transition& tau = B.trans[s];
        int s1 = s + 3 * n, p1 = p + 3 * n;
        if (tau.sign > 0) {
            T.partner[s] = p;
            T.trans[s] = tau;
            T.partner[s1] = p1;
            T.trans[s1] = Transition{1, -tau.t};
        } else {
            T.partner[s] = p1;
            T.trans[s] = Transition{1, -tau.t};
            T.partner[s1] = p;
            T.trans[s1] = Transition{1, tau.t};
        }
    }
    // connectivity = the differential is not globally a square
    {
        std::vector<bool> seen(2 * n, false);
        std::deque<int> q{0};
        seen[0] = true;
        while (!q.empty()) {
            int t = q.front();
            q.pop_front();
            for (int e = 0; e < 3; ++e) {
                int u = Triangulation::tri_of(T.partner[Triangulation::slot_of(t, e)]);
                if (!seen[u]) {
                    seen[u] = true;
                    q.push_back(u);
                }
            }
        }
        if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
            throw CoverError("orientation double cover is disconnected: differential is already a square");
    }
    T.recompute_classes({}, {}, {});

    CoveringMap cover;
    cover.orientation = true;
    cover.base_surface = std::move(base_surface);
    cover.base = base;
    cover.origin.resize(2 * n);
    for (int t = 0; t < n; ++t) {
        cover.origin[t] = {t, 0};
        cover.origin[t + n] = {t, 1};
    }
    for (int bc = 0; bc < B.num_vclasses(); ++bc)
        if (B.vinfo[bc].angle_pi % 2 == 1) cover.ram.push_back(bc);
    name_lifted_classes(T, B, cover.origin, &cover.lifted_names);
    for (const auto& m : B.markings) {
        T.markings.push_back({m.name + "'", m.tri, m.pos});
        T.markings.push_back({m.name + "''", m.tri + n, -m.pos});
    }
    cover.deck_image.resize(2 * n);
    cover.deck_chart.assign(2 * n, Transition{-1, Vec2{}});
    for (int t = 0; t < n; ++t) {
        cover.deck_image[t] = t + n;
        cover.deck_image[t + n] = t;
    }
    T.validate();
    cover.total_raw = std::make_shared<const Triangulation>(T);

    // poles lift to regular points; remove them into transparent markings
    Triangulation E = T;
    E.eliminate_all_flat_vertices();
    E.validate();
    cover.total = std::make_shared<const Triangulation>(std::move(E));
    cover.total_surface = surface_view(*cover.total);
    return cover;
}

namespace {

// Shortest simple edge path between two vertex classes; returns slots.
std::vector<int> shortest_vertex_path(const Triangulation& T, int from_vc, int to_vc) {
    int ncl = T.num_vclasses();
    std::vector<int> prev_slot(ncl, -1), prev_vc(ncl, -1);
    std::vector<bool> seen(ncl, false);
    std::deque<int> q{from_vc};
    seen[from_vc] = true;
    while (!q.empty()) {
        int vc = q.front();
        q.pop_front();
        if (vc == to_vc) break;
        for (int s = 0; s < 3 * T.num_tris(); ++s) {
            if (T.vcl[s] != vc) continue;
            int t = Triangulation::tri_of(s), e = Triangulation::edge_of(s);
            int other = T.vclass_at(t, (e + 1) % 3);
            if (!seen[other]) {
                seen[other] = true;
                prev_slot[other] = s;
                prev_vc[other] = vc;
                q.push_back(other);
            }
        }
    }
    if (!seen[to_vc]) throw CoverError("no edge path joining the ramification points");
    std::vector<int> slots;
    for (int vc = to_vc; vc != from_vc; vc = prev_vc[vc]) slots.push_back(prev_slot[vc]);
    std::reverse(slots.begin(), slots.end());
    return slots;
}

}  // namespace

CoveringMap ramified_double_cover_along(std::shared_ptr<const FlatSurface> base_surface,
                                        std::shared_ptr<const Triangulation> base,
                                        const std::vector<int>& path_slots) {
    const Triangulation& B = *base;
    if (path_slots.empty()) throw CoverError("empty cut path");
    // validate the path: consecutive, simple
    std::vector<int> path_vcs;
    path_vcs.push_back(B.vcl[path_slots.front()]);
    for (int s : path_slots) {
        int t = Triangulation::tri_of(s), e = Triangulation::edge_of(s);
        if (B.vclass_at(t, e) != path_vcs.back()) throw CoverError("cut path edges are not consecutive");
        path_vcs.push_back(B.vclass_at(t, (e + 1) % 3));
    }
    {
        std::set<int> uniq(path_vcs.begin(), path_vcs.end());
        if (uniq.size() != path_vcs.size()) throw CoverError("cut path is not simple");
    }
    int ram_a = path_vcs.front(), ram_b = path_vcs.back();
    if (ram_a == ram_b) throw CoverError("coincident ramification points");

    std::set<int> path_edges;  // canonical slot = min(slot, partner)
    for (int s : path_slots) path_edges.insert(std::min(s, B.partner[s]));

    int n = B.num_tris();
    Triangulation T;
    T.kind = B.kind;
    T.field = B.field;
    T.tri.resize(2 * n);
    T.partner.assign(6 * n, -1);
    T.trans.assign(6 * n, Transition{});
    for (int t = 0; t < n; ++t) T.tri[t] = T.tri[t + n] = B.tri[t];
    for (int s = 0; s < 3 * n; ++s) {
        int p = B.partner[s];
        const Transition& tau = B.trans[s];
        bool cut = path_edges.count(std::min(s, p)) > 0;
        if (!cut) {
            T.partner[s] = p;
            T.partner[s + 3 * n] = p + 3 * n;
        } else {
            T.partner[s] = p + 3 * n;
            T.partner[s + 3 * n] = p;
        }
        T.trans[s] = tau;
        T.trans[s + 3 * n] = tau;
    }
    T.recompute_classes({}, {}, {});

    CoveringMap cover;
    cover.orientation = false;
    cover.base_surface = std::move(base_surface);
    cover.base = base;
    cover.ram = {ram_a, ram_b};
    cover.origin.resize(2 * n);
    for (int t = 0; t < n; ++t) {
        cover.origin[t] = {t, 0};
        cover.origin[t + n] = {t, 1};
    }
    name_lifted_classes(T, B, cover.origin, &cover.lifted_names);
    if (cover.lifted_names[ram_a].size() != 1 || cover.lifted_names[ram_b].size() != 1)
        throw CoverError("internal: ramification point did not merge");
    for (const auto& m : B.markings) {
        T.markings.push_back({m.name + "'", m.tri, m.pos});
        T.markings.push_back({m.name + "''", m.tri + n, m.pos});
    }
    cover.deck_image.resize(2 * n);
    cover.deck_chart.assign(2 * n, Transition{});
    for (int t = 0; t < n; ++t) {
        cover.deck_image[t] = t + n;
        cover.deck_image[t + n] = t;
    }
    T.validate();
    cover.total_raw = std::make_shared<const Triangulation>(std::move(T));
    cover.total = cover.total_raw;
    cover.total_surface = surface_view(*cover.total);
    return cover;
}

CoveringMap ramified_double_cover(std::shared_ptr<const FlatSurface> base_surface, const std::string& point_a,
                                  const std::string& point_b) {
    if (point_a == point_b) throw CoverError("coincident ramification points");
    auto base = base_surface->triangulation();
    // Marked points that are not vertices yet get inserted into a private copy.
    auto tri = base;
    auto materialize = [&](const std::string& name) {
        for (int cl = 0; cl < tri->num_vclasses(); ++cl)
            if (tri->vinfo[cl].name == name) return;
        for (const auto& m : tri->markings) {
            if (m.name != name) continue;
            Triangulation copy = *tri;
            copy.markings.erase(
                std::find_if(copy.markings.begin(), copy.markings.end(), [&](const TriMarking& x) { return x.name == name; }));
            copy.insert_point(m.tri, m.pos, name);
            tri = std::make_shared<const Triangulation>(std::move(copy));
            return;
        }
        throw CoverError("no point named '" + name + "'");
    };
    materialize(point_a);
    materialize(point_b);
    auto vclass_named = [&](const std::string& name) {
        for (int cl = 0; cl < tri->num_vclasses(); ++cl)
            if (tri->vinfo[cl].name == name) return cl;
        throw CoverError("no point named '" + name + "'");
    };
    int va = vclass_named(point_a), vb = vclass_named(point_b);
    if (va == vb) throw CoverError("coincident ramification points");
    auto path = shortest_vertex_path(*tri, va, vb);
    return ramified_double_cover_along(std::move(base_surface), tri, path);
}

int loop_monodromy(const CoveringMap& cover, const std::pair<int, int>& boundary_pole_set) {
    if (boundary_pole_set.first == boundary_pole_set.second)
        throw std::invalid_argument("loop_monodromy: boundary pole set must have two distinct points");
    int r = 0;
    if (cover.is_ramified_at(boundary_pole_set.first)) ++r;
    if (cover.is_ramified_at(boundary_pole_set.second)) ++r;
    return r % 2;
}

Involution hyperelliptic_involution(const CoveringMap& cover) {
    if (cover.deck_image.empty()) throw CoverError("surface lacks covering data");
    Involution inv;
    inv.image = cover.deck_image;
    inv.chart = cover.deck_chart;
    for (int bc : cover.ram)
        for (const auto& nm : cover.lifted_names[bc]) inv.fixed_points.push_back(nm);
    return inv;
}

std::vector<WeierstrassPoint> weierstrass_points(const CoveringMap& cover) {
    if (!cover.orientation) throw CoverError("Weierstrass points are defined for orientation double covers");
    std::vector<WeierstrassPoint> out;
    for (int bc : cover.ram) {
        bool regular = cover.base->vinfo[bc].is_pole;  // poles lift to regular points
        for (const auto& nm : cover.lifted_names[bc]) out.push_back({nm, !regular});
    }
    return out;
}

Triangulation quotient_by_deck(const CoveringMap& cover) {
    TriInvolution sigma;
    sigma.image = cover.deck_image;
    sigma.chart = cover.deck_chart;
    return quotient_by_involution(*cover.total_raw, sigma);
}

// ---------------------------------------------------------------------------
// involution search / quotient

namespace {

int image_slot(const Triangulation& T, const std::vector<int>& image, const std::vector<Transition>& chart,
               int s) {
    int t = Triangulation::tri_of(s), e = Triangulation::edge_of(s);
    int t2 = image[t];
    Vec2 a = chart[t].apply(T.tri[t][e]);
    for (int f = 0; f < 3; ++f)
        if (T.tri[t2][f] == a) return Triangulation::slot_of(t2, f);
    return -1;
}

}  // namespace

std::vector<TriInvolution> find_involutions(const Triangulation& T) {
    std::vector<TriInvolution> found;
    std::set<std::vector<int>> seen_images;
    int n = T.num_tris();
    for (int t1 = 0; t1 < n; ++t1) {
        for (int r = 0; r < 3; ++r) {
            // seed: sigma(tri 0) = t1 with vertex 0 -> vertex r, derivative -I
            Vec2 K = T.tri[t1][r] + T.tri[0][0];
            Transition seed{-1, K};
            bool ok = true;
            for (int k = 0; k < 3 && ok; ++k)
                if (seed.apply(T.tri[0][k]) != T.tri[t1][(r + k) % 3]) ok = false;
            if (!ok) continue;

            std::vector<int> image(n, -1);
            std::vector<Transition> chart(n);
            image[0] = t1;
            chart[0] = seed;
            std::deque<int> q{0};
            while (!q.empty() && ok) {
                int t = q.front();
                q.pop_front();
                for (int e = 0; e < 3 && ok; ++e) {
                    int s = Triangulation::slot_of(t, e);
                    int is = image_slot(T, image, chart, s);
                    if (is < 0) { ok = false; break; }
                    // the image of edge s must be the edge starting at sigma(v_e)... as a
                    // directed edge of the image triangle it ends there; cross both gluings
                    int p = T.partner[s];
                    int ip = T.partner[is];
                    int pt = Triangulation::tri_of(p);
                    Transition expected = compose(T.trans[is], compose(chart[t], T.trans[s].inverse()));
                    if (image[pt] == -1) {
                        image[pt] = Triangulation::tri_of(ip);
                        chart[pt] = expected;
                        q.push_back(pt);
                    } else if (image[pt] != Triangulation::tri_of(ip) || !(chart[pt].sign == expected.sign) ||
                               !(chart[pt].t == expected.t)) {
                        ok = false;
                    }
                }
            }
            if (!ok) continue;
            // involution property and no fixed triangles
            for (int t = 0; t < n && ok; ++t) {
                if (image[t] == t) { ok = false; break; }
                if (image[image[t]] != t) { ok = false; break; }
                Transition round = compose(chart[image[t]], chart[t]);
                if (round.sign != 1 || !round.t.is_zero()) ok = false;
            }
            if (!ok) continue;
            if (!seen_images.insert(image).second) continue;

            TriInvolution sig;
            sig.image = image;
            sig.chart = chart;
            for (int cl = 0; cl < T.num_vclasses(); ++cl) {
                auto corners = T.corners_of(cl);
                auto [t, k] = corners.front();
                Vec2 a = chart[t].apply(T.tri[t][k]);
                int t2 = image[t];
                for (int f = 0; f < 3; ++f)
                    if (T.tri[t2][f] == a && T.vclass_at(t2, f) == cl) {
                        sig.fixed_vclasses.push_back(cl);
                        break;
                    }
            }
            // an undirected edge {s, partner} is invariant iff sigma maps slot s onto
            // the partner slot (it cannot map s to itself: sigma fixes no triangle)
            for (int s = 0; s < 3 * n; ++s) {
                int p = T.partner[s];
                if (s > p) continue;
                if (image_slot(T, image, chart, s) == p) sig.invariant_edge_slots.push_back(s);
            }
            found.push_back(std::move(sig));
        }
    }
    return found;
}

Triangulation quotient_by_involution(const Triangulation& T, const TriInvolution& sigma) {
    int n = T.num_tris();
    if (!sigma.invariant_edge_slots.empty())
        throw CoverError("quotient: involution has invariant edges; insert fold midpoints first");
    std::vector<int> keep(n, -1);
    int w = 0;
    for (int t = 0; t < n; ++t)
        if (t < sigma.image[t]) keep[t] = w++;
    Triangulation Q;
    Q.kind = Kind::quadratic;  // quotients by -I maps are half-translation surfaces
    Q.field = T.field;
    Q.tri.resize(w);
    Q.partner.assign(3 * w, -1);
    Q.trans.assign(3 * w, Transition{});
    for (int t = 0; t < n; ++t)
        if (keep[t] >= 0) Q.tri[keep[t]] = T.tri[t];
    auto project_slot = [&](int s) -> std::pair<int, Transition> {
        int t = Triangulation::tri_of(s);
        if (keep[t] >= 0) return {Triangulation::slot_of(keep[t], Triangulation::edge_of(s)), Transition{}};
        // map through sigma
        int is = image_slot(T, sigma.image, sigma.chart, s);
        // slot starting at sigma(v_e) is the image of s as a directed edge
        int t2 = Triangulation::tri_of(is);
        if (keep[t2] < 0) throw CoverError("quotient: orbit bookkeeping failed");
        return {Triangulation::slot_of(keep[t2], Triangulation::edge_of(is)), sigma.chart[t]};
    };
    for (int s = 0; s < 3 * n; ++s) {
        int t = Triangulation::tri_of(s);
        if (keep[t] < 0) continue;
        auto [qs, gamma_s] = project_slot(s);  // gamma_s = identity here
        int p = T.partner[s];
        auto [qp, gamma_p] = project_slot(p);
        if (qp == qs) throw CoverError("quotient: invariant edge slipped through");
        Transition nt = compose(gamma_p, T.trans[s]);
        Q.partner[qs] = qp;
        Q.trans[qs] = nt;
        (void)gamma_s;
    }
    for (int s = 0; s < 3 * w; ++s)
        if (Q.partner[s] < 0) throw CoverError("quotient: unmatched edge");
    Q.recompute_classes({}, {}, {});
    // markings: project orbit pairs to one representative
    for (const auto& m : T.markings) {
        int t = m.tri;
        Vec2 pos = m.pos;
        if (keep[t] < 0) {
            pos = sigma.chart[t].apply(pos);
            t = sigma.image[t];
        }
        bool dup = false;
        for (const auto& e : Q.markings)
            if (e.tri == keep[t] && e.pos == pos) dup = true;
        if (!dup) Q.markings.push_back({m.name, keep[t], pos});
    }
    Q.validate();
    return Q;
}

Triangulation hyperelliptic_quotient(const Triangulation& T0) {
    Triangulation T = T0;
    int genus;
    {
        int V = T.num_vclasses(), E = 3 * T.num_tris() / 2, F = T.num_tris();
        genus = (2 - (V - E + F)) / 2;
    }
    int want_fixed = 2 * genus + 2;
    for (int round = 0; round < 64; ++round) {
        auto sigmas = find_involutions(T);
        const TriInvolution* hyper = nullptr;
        for (const auto& s : sigmas) {
            int fixed = static_cast<int>(s.fixed_vclasses.size() + s.invariant_edge_slots.size());
            if (fixed == want_fixed) {
                if (hyper) throw CoverError("hyperelliptic involution is not unique");
                hyper = &s;
            }
        }
        if (!hyper) throw CoverError("no involution with 2g+2 fixed points");
        if (hyper->invariant_edge_slots.empty()) return quotient_by_involution(T, *hyper);
        // insert one fold midpoint, named after a coinciding marking when present,
        // then re-derive the involution on the refined triangulation
        int s = hyper->invariant_edge_slots.front();
        int t = Triangulation::tri_of(s), e = Triangulation::edge_of(s);
        Vec2 pos = half(Scalar(1)) * (T.tri[t][e] + T.tri[t][(e + 1) % 3]);
        int p = T.partner[s];
        int t2 = Triangulation::tri_of(p);
        Vec2 pos2 = T.trans[s].apply(pos);
        std::string name;
        for (auto it = T.markings.begin(); it != T.markings.end(); ++it) {
            if ((it->tri == t && it->pos == pos) || (it->tri == t2 && it->pos == pos2)) {
                name = it->name;
                T.markings.erase(it);
                break;
            }
        }
        T.insert_point(t, pos, name);
    }
    throw CoverError("hyperelliptic quotient did not stabilize");
}

std::string canonical_form(const Triangulation& T, bool with_markings) {
    int n = T.num_tris();
    std::string best;
    std::vector<int> signs = T.kind == Kind::quadratic ? std::vector<int>{1, -1} : std::vector<int>{1};
    for (int s0 = 0; s0 < 3 * n; ++s0) {
        for (int rho : signs) {
            int t0 = Triangulation::tri_of(s0);
            std::vector<int> order(n, -1);
            std::vector<Transition> place(n);
            order[t0] = 0;
            place[t0] = Transition{rho, Vec2{} - (rho > 0 ? T.tri[t0][Triangulation::edge_of(s0)]
                                                          : -T.tri[t0][Triangulation::edge_of(s0)])};
            std::vector<int> bfs{t0};
            for (std::size_t i = 0; i < bfs.size(); ++i) {
                int t = bfs[i];
                for (int e = 0; e < 3; ++e) {
                    int p = T.partner[Triangulation::slot_of(t, e)];
                    int u = Triangulation::tri_of(p);
                    if (order[u] < 0) {
                        order[u] = static_cast<int>(bfs.size());
                        place[u] = compose(place[t], T.trans[Triangulation::slot_of(t, e)].inverse());
                        bfs.push_back(u);
                    }
                }
            }
            std::ostringstream os;
            for (int t : bfs) {
                for (int k = 0; k < 3; ++k) os << place[t].apply(T.tri[t][k]).x.str() << "," << place[t].apply(T.tri[t][k]).y.str() << ";";
                for (int e = 0; e < 3; ++e) {
                    int p = T.partner[Triangulation::slot_of(t, e)];
                    os << order[Triangulation::tri_of(p)] << ":" << Triangulation::edge_of(p) << ";";
                }
                os << "|";
            }
            if (with_markings) {
                std::vector<std::string> ms;
                for (const auto& m : T.markings) {
                    Vec2 q = place[m.tri].apply(m.pos);
                    ms.push_back(std::to_string(order[m.tri]) + "@" + q.x.str() + "," + q.y.str());
                }
                std::sort(ms.begin(), ms.end());
                for (const auto& m : ms) os << m << ";";
            }
            std::string form = os.str();
            if (best.empty() || form < best) best = std::move(form);
        }
    }
    return best;
}

}  // namespace flatcount
