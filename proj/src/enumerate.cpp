#include "flatcount/enumerate.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <thread>

namespace flatcount {

namespace {

// ---------------------------------------------------------------------------
// First-order jets a + b*eps with an infinitesimal eps > 0.  All germ-tracing
// predicates are affine in the transverse offset, so these are exact.

struct PS {
    Scalar v, e;
    PS() = default;
    PS(Scalar val) : v(std::move(val)) {}
    PS(Scalar val, Scalar eps) : v(std::move(val)), e(std::move(eps)) {}
    int sign() const {
        int s = v.sign();
        return s != 0 ? s : e.sign();
    }
    PS operator-() const { return {-v, -e}; }
    PS& operator+=(const PS& o) { v += o.v; e += o.e; return *this; }
    PS& operator-=(const PS& o) { v -= o.v; e -= o.e; return *this; }
    friend PS operator+(PS a, const PS& b) { return a += b; }
    friend PS operator-(PS a, const PS& b) { return a -= b; }
    friend PS operator*(const Scalar& c, const PS& a) { return {c * a.v, c * a.e}; }
    friend PS operator/(const PS& a, const Scalar& c) { return {a.v / c, a.e / c}; }
    friend bool operator==(const PS& a, const PS& b) { return a.v == b.v && a.e == b.e; }
};

struct PV {
    PS x, y;
    PV() = default;
    PV(const Vec2& val) : x(val.x), y(val.y) {}
    PV(const Vec2& val, const Vec2& eps) : x({val.x, eps.x}), y({val.y, eps.y}) {}
    Vec2 val() const { return {x.v, y.v}; }
    Vec2 eps() const { return {x.e, y.e}; }
    PV& operator+=(const PV& o) { x += o.x; y += o.y; return *this; }
    friend PV operator+(PV a, const PV& o) { return a += o; }
    friend PV operator-(PV a, const Vec2& b) {
        a.x -= PS(b.x);
        a.y -= PS(b.y);
        return a;
    }
};

PS cross(const Vec2& d, const PV& p) { return {flatcount::cross(d, p.val()), flatcount::cross(d, p.eps())}; }

PV scale(const PS& s, const Vec2& d) {
    PV r;
    r.x = PS{s.v * d.x, s.e * d.x};
    r.y = PS{s.v * d.y, s.e * d.y};
    return r;
}

PV apply(const Transition& tr, const PV& p) {
    Vec2 val = tr.apply(p.val());
    Vec2 eps = tr.apply_vector(p.eps());
    return {val, eps};
}

// ---------------------------------------------------------------------------
// Germ tracing: follows the leaf at an infinitesimal transverse offset from a
// boundary chain.  The value parts trace the chain itself; the eps parts steer
// around the vertices the chain passes through.

struct ChainEvent {
    int vclass;
    Scalar at;  // distance along the cycle, in units of |d0| (0, P]
};

struct StepRec {
    int slot;
    Scalar uv, ue;
};

struct GermResult {
    bool closed = false;
    Scalar period;  // circumference = period * |d0|
    Scalar width;   // transverse mu-width (positive)
    std::vector<ChainEvent> events;
    std::vector<StepRec> steps;
};

struct TraceLimits {
    Scalar L2;
    long max_steps = 4'000'000;
};

using Coverage = std::map<int, std::vector<std::pair<Scalar, Scalar>>>;

// Single straight step through a triangle.  Returns (exit_edge, s, w) with
// pos + s*d on edge exit_edge at edge parameter w; entry edge excluded.
std::optional<std::tuple<int, PS, PS>> triangle_step(const Triangulation& T, int t, const PV& pos, const Vec2& d,
                                                     int entry_edge) {
    std::optional<std::tuple<int, PS, PS>> best;
    for (int e = 0; e < 3; ++e) {
        if (e == entry_edge) continue;
        const Vec2& A = T.tri[t][e];
        Vec2 E = T.edge_vec(t, e);
        Scalar denom = flatcount::cross(d, E);
        if (denom.sign() == 0) continue;
        // solve pos + s*d = A + w*E
        PS s = PS{flatcount::cross(A, E) - flatcount::cross(pos.val(), E), -flatcount::cross(pos.eps(), E)} / denom;
        if (s.sign() <= 0) continue;
        PS w = PS{flatcount::cross(d, pos.val() - A), flatcount::cross(d, pos.eps())} / denom;
        if (w.sign() < 0 || (w - PS{Scalar(1)}).sign() > 0) continue;
        if (!best || (s - std::get<1>(*best)).sign() < 0) best = {e, s, w};
    }
    return best;
}

GermResult trace_germ(const Triangulation& T, int t0, PV pos, Vec2 d, const TraceLimits& lim,
                      const Coverage* coverage) {
    GermResult out;
    Scalar q0 = flatcount::cross(d, pos.eps());
    int sq = q0.sign();
    if (sq == 0) throw std::logic_error("trace_germ: offset parallel to direction");
    Scalar norm2d = norm2(d);

    int t = t0, entry = -1;
    Scalar A(0);
    std::optional<Scalar> width;
    bool have_first = false;
    int first_slot = -1;
    PS first_u;
    Vec2 first_d;
    Scalar A_first(0);

    for (long steps = 0; steps < lim.max_steps; ++steps) {
        // transverse constraints from this triangle's vertices
        for (int k = 0; k < 3; ++k) {
            Scalar m = flatcount::cross(d, T.tri[t][k] - pos.val());
            if (m.sign() * sq > 0) {
                Scalar mm = m.abs();
                if (!width || mm < *width) width = mm;
            }
        }
        auto step = triangle_step(T, t, pos, d, entry);
        if (!step) throw std::logic_error("trace_germ: ray found no exit");
        auto [e, s, w] = *step;

        A += s.v;
        // circumference cap applies to the cycle, not the partial lead-in segment
        Scalar cyc = A - A_first;
        if (cyc * cyc * norm2d > lim.L2) return out;

        int slot = Triangulation::slot_of(t, e);
        int p = T.partner[slot];
        const Transition& tr = T.trans[slot];
        PV exit_pos = pos + scale(s, d);
        PV npos = apply(tr, exit_pos);
        Vec2 nd = tr.apply_vector(d);
        int nt = Triangulation::tri_of(p), ne = Triangulation::edge_of(p);
        PS w_in = PS{Scalar(1)} - w;  // parameter on the partner edge

        if (have_first) {
            // chain vertex passages: the value line hits an edge endpoint exactly
            if (w.v.sign() == 0)
                out.events.push_back({T.vclass_at(t, e), A - A_first});
            else if ((w.v - Scalar(1)).sign() == 0)
                out.events.push_back({T.vclass_at(t, (e + 1) % 3), A - A_first});
            if (p == first_slot && w_in == first_u && nd == first_d) {
                out.closed = true;
                out.period = A - A_first;
                if (!width) throw std::logic_error("trace_germ: closed orbit with no transverse constraint");
                out.width = *width;
                return out;
            }
            out.steps.push_back({p, w_in.v, w_in.e});
        } else {
            have_first = true;
            first_slot = p;
            first_u = w_in;
            first_d = nd;
            A_first = A;
            out.steps.push_back({p, w_in.v, w_in.e});
            if (coverage) {
                // coverage intervals live on the undirected edge (smaller slot id)
                int cs = std::min(p, T.partner[p]);
                Scalar uc = (cs == p) ? w_in.v : Scalar(1) - w_in.v;
                auto it = coverage->find(cs);
                if (it != coverage->end())
                    for (const auto& [lo, hi] : it->second)
                        if (lo < uc && uc < hi) return out;  // already inside a known cylinder
            }
        }
        pos = npos;
        d = nd;
        t = nt;
        entry = ne;
    }
    throw std::runtime_error("trace_germ: step limit exceeded");
}

// Pure trace of the core leaf, collecting transparent markings on it.
std::vector<std::string> trace_core_markings(const Triangulation& T, int t0, Vec2 pos, Vec2 d, long max_steps) {
    std::set<std::string> names;
    if (T.markings.empty()) return {};
    std::vector<std::vector<int>> by_tri(T.num_tris());
    for (int i = 0; i < static_cast<int>(T.markings.size()); ++i) by_tri[T.markings[i].tri].push_back(i);

    int t = t0, entry = -1;
    bool have_first = false;
    int first_slot = -1;
    Scalar first_u;
    Vec2 first_d;
    Scalar n2 = norm2(d);
    for (long steps = 0; steps < max_steps; ++steps) {
        auto step = triangle_step(T, t, PV{pos}, d, entry);
        if (!step) throw std::logic_error("core trace: no exit");
        auto [e, s, w] = *step;
        if (w.v.sign() == 0 || (w.v - Scalar(1)).sign() == 0)
            throw std::logic_error("core trace hit a vertex");
        for (int mi : by_tri[t]) {
            const auto& m = T.markings[mi];
            if (flatcount::cross(d, m.pos - pos).sign() != 0) continue;
            Scalar param = dot(d, m.pos - pos) / n2;
            if (param.sign() >= 0 && param <= s.v) names.insert(m.name);
        }
        int slot = Triangulation::slot_of(t, e);
        int p = T.partner[slot];
        const Transition& tr = T.trans[slot];
        pos = tr.apply(pos + s.v * d);
        d = tr.apply_vector(d);
        Scalar u_in = Scalar(1) - w.v;
        if (have_first) {
            if (p == first_slot && u_in == first_u && d == first_d) return {names.begin(), names.end()};
        } else {
            have_first = true;
            first_slot = p;
            first_u = u_in;
            first_d = d;
        }
        t = Triangulation::tri_of(p);
        entry = Triangulation::edge_of(p);
    }
    throw std::runtime_error("core trace: step limit exceeded");
}

// ---------------------------------------------------------------------------
// Saddle-connection ends: one record per (connection, endpoint).

struct End {
    int tri = -1, corner = -1;  // source corner
    Vec2 dir;                   // full holonomy in the source chart
    Scalar len2;
    int to_vclass = -1;
    bool is_edge = false;
};

// min squared distance from the origin to segment [P,Q] clipped to the open
// cone (w1, w2); nullopt if the clipped segment is empty.
std::optional<Scalar> min_dist2_in_cone(const Vec2& P, const Vec2& Q, const Vec2& w1, const Vec2& w2) {
    Scalar lo(0), hi(1);
    auto clip = [&](const Vec2& ray, int keep_sign) -> bool {
        Scalar cp = flatcount::cross(ray, P), cq = flatcount::cross(ray, Q);
        bool pin = cp.sign() * keep_sign >= 0, qin = cq.sign() * keep_sign >= 0;
        if (pin && qin) return true;
        if (!pin && !qin) return false;
        Scalar tcross = cp / (cp - cq);
        if (!pin) { if (lo < tcross) lo = tcross; }
        else { if (tcross < hi) hi = tcross; }
        return true;
    };
    if (!clip(w1, 1)) return std::nullopt;   // keep cross(w1, X) >= 0
    if (!clip(w2, -1)) return std::nullopt;  // keep cross(w2, X) <= 0
    if (!(lo <= hi)) return std::nullopt;
    Vec2 D = Q - P;
    Scalar dd = norm2(D);
    auto at = [&](const Scalar& tau) {
        Vec2 X = P + tau * D;
        return norm2(X);
    };
    Scalar best = at(lo);
    Scalar other = at(hi);
    if (other < best) best = other;
    if (dd.sign() > 0) {
        Scalar tstar = -dot(P, D) / dd;
        if (lo < tstar && tstar < hi) {
            Scalar mid = at(tstar);
            if (mid < best) best = mid;
        }
    }
    return best;
}

void enumerate_ends(const Triangulation& T, const Scalar& L2, std::vector<End>& out) {
    struct Node {
        int slot;  // slot of the subdivided triangle entered (global)
        Transition placement;
        Vec2 w1, w2;  // open angular window
    };
    for (int t = 0; t < T.num_tris(); ++t) {
        for (int k = 0; k < 3; ++k) {
            Vec2 E = T.edge_vec(t, k);
            if (norm2(E) <= L2) out.push_back({t, k, E, norm2(E), T.vclass_at(t, (k + 1) % 3), true});

            // explore the open corner sector
            Vec2 a = T.tri[t][(k + 1) % 3] - T.tri[t][k];
            Vec2 b = T.tri[t][(k + 2) % 3] - T.tri[t][k];
            Transition pl{1, -T.tri[t][k]};
            int cross_slot = Triangulation::slot_of(t, (k + 1) % 3);
            {
                Vec2 P = pl.apply(T.tri[t][(k + 1) % 3]);
                Vec2 Q = pl.apply(T.tri[t][(k + 2) % 3]);
                auto d2 = min_dist2_in_cone(P, Q, a, b);
                if (!d2 || *d2 > L2) continue;
            }
            std::vector<Node> stack;
            {
                int p = T.partner[cross_slot];
                Transition pl2 = compose(pl, T.trans[cross_slot].inverse());
                stack.push_back({p, pl2, a, b});
            }
            while (!stack.empty()) {
                Node nd = stack.back();
                stack.pop_back();
                int u = Triangulation::tri_of(nd.slot), f = Triangulation::edge_of(nd.slot);
                Vec2 B = nd.placement.apply(T.tri[u][(f + 1) % 3]);  // window-low endpoint
                Vec2 A = nd.placement.apply(T.tri[u][f]);            // window-high endpoint
                Vec2 C = nd.placement.apply(T.tri[u][(f + 2) % 3]);
                if (norm2(C) <= L2 && flatcount::cross(nd.w1, C).sign() > 0 && flatcount::cross(C, nd.w2).sign() > 0)
                    out.push_back({t, k, C, norm2(C), T.vclass_at(u, (f + 2) % 3), false});
                // children: edge f+1 spans [B, C], edge f+2 spans [C, A]
                auto later = [](const Vec2& x, const Vec2& y) { return flatcount::cross(x, y).sign() > 0 ? y : x; };
                auto earlier = [](const Vec2& x, const Vec2& y) { return flatcount::cross(x, y).sign() > 0 ? x : y; };
                struct Child {
                    int edge;
                    Vec2 P, Q, w1, w2;
                };
                Child kids[2] = {
                    {(f + 1) % 3, B, C, nd.w1, earlier(nd.w2, C)},
                    {(f + 2) % 3, C, A, later(nd.w1, C), nd.w2},
                };
                for (const auto& kid : kids) {
                    if (flatcount::cross(kid.w1, kid.w2).sign() <= 0) continue;
                    auto d2 = min_dist2_in_cone(kid.P, kid.Q, kid.w1, kid.w2);
                    if (!d2 || *d2 > L2) continue;
                    int cs = Triangulation::slot_of(u, kid.edge);
                    int p = T.partner[cs];
                    Transition pl2 = compose(nd.placement, T.trans[cs].inverse());
                    stack.push_back({p, pl2, kid.w1, kid.w2});
                }
            }
        }
    }
}

std::string direction_key(const Vec2& dir) {
    Vec2 c = canonical_sign(dir);
    if (c.x.sign() == 0) return "|";
    return (c.y / c.x).str();
}

// ---------------------------------------------------------------------------
// Per-direction-class cylinder extraction.

struct IntervalKey {
    int slot;
    std::string lo, hi;
    friend bool operator<(const IntervalKey& a, const IntervalKey& b) {
        return std::tie(a.slot, a.lo, a.hi) < std::tie(b.slot, b.lo, b.hi);
    }
    friend bool operator==(const IntervalKey& a, const IntervalKey& b) {
        return a.slot == b.slot && a.lo == b.lo && a.hi == b.hi;
    }
};

struct CylRec {
    Scalar period, width, norm2d;
    std::vector<ChainEvent> events[2];
    bool have_side[2] = {false, false};
    std::string side_tag[2];
    // core-trace seed
    int seed_tri;
    Vec2 seed_pos, seed_eps, seed_dir;
    Scalar qabs;
};

BoundaryChain chain_from_events(const std::vector<ChainEvent>& evs, const Scalar& period, const Vec2& d0,
                                const Triangulation& T) {
    BoundaryChain ch;
    if (evs.empty()) throw std::logic_error("cylinder boundary chain without vertices");
    std::vector<ChainEvent> sorted = evs;
    std::sort(sorted.begin(), sorted.end(), [](const ChainEvent& a, const ChainEvent& b) { return a.at < b.at; });
    // pole passages emit one event per zero-length fan step; collapse exact repeats
    std::vector<ChainEvent> uniq;
    for (auto& ev : sorted)
        if (uniq.empty() || uniq.back().vclass != ev.vclass || uniq.back().at != ev.at) uniq.push_back(ev);
    ch.all_poles = true;
    for (std::size_t i = 0; i < uniq.size(); ++i) {
        ch.vertices.push_back(uniq[i].vclass);
        if (!T.vinfo[uniq[i].vclass].is_pole) ch.all_poles = false;
        Scalar next = (i + 1 < uniq.size()) ? uniq[i + 1].at : uniq[0].at + period;
        ch.segments.push_back((next - uniq[i].at) * d0);
    }
    return ch;
}

struct ClassWork {
    std::vector<End> ends;
    Vec2 rep;  // canonical class representative (shortest holonomy)
};

std::vector<Cylinder> run_direction_class(const Triangulation& T, const ClassWork& work, const Scalar& L2) {
    std::map<IntervalKey, CylRec> found;
    Coverage covered;
    TraceLimits lim{L2};

    auto handle_trace = [&](int seed_tri, const PV& seed_pos, const Vec2& d0) {
        GermResult g = trace_germ(T, seed_tri, seed_pos, d0, lim, &covered);
        if (!g.closed) return;
        Scalar n2 = norm2(d0);
        Scalar qabs = flatcount::cross(d0, seed_pos.eps()).abs();
        // chord intervals over the visited edges (undirected, canonical slot);
        // the lexicographically least is the dedup key
        std::optional<IntervalKey> key;
        std::vector<std::pair<int, std::pair<Scalar, Scalar>>> intervals;
        for (const auto& st : g.steps) {
            Scalar ufar = st.uv + g.width * st.ue / n2;
            int cs = std::min(st.slot, T.partner[st.slot]);
            Scalar a = st.uv, b = ufar;
            if (cs != st.slot) {
                a = Scalar(1) - a;
                b = Scalar(1) - b;
            }
            Scalar lo = a < b ? a : b;
            Scalar hi = a < b ? b : a;
            intervals.push_back({cs, {lo, hi}});
            IntervalKey k{cs, lo.str(), hi.str()};
            if (!key || k < *key) key = k;
        }
        std::string tag = std::to_string(g.steps.front().slot) + "@" + g.steps.front().uv.str();
        auto it = found.find(*key);
        if (it == found.end()) {
            CylRec rec;
            rec.period = g.period;
            rec.width = g.width;
            rec.norm2d = n2;
            rec.events[0] = g.events;
            rec.have_side[0] = true;
            rec.side_tag[0] = tag;
            rec.seed_tri = seed_tri;
            rec.seed_pos = seed_pos.val();
            rec.seed_eps = seed_pos.eps();
            rec.seed_dir = d0;
            rec.qabs = qabs;
            found.emplace(*key, std::move(rec));
            for (auto& [slot, iv] : intervals) covered[slot].push_back(iv);
        } else {
            CylRec& rec = it->second;
            if (rec.side_tag[0] == tag || (rec.have_side[1] && rec.side_tag[1] == tag)) return;
            if ((rec.period * rec.period) * rec.norm2d != (g.period * g.period) * n2)
                throw std::logic_error("cylinder key collision with mismatched data");
            if (!rec.have_side[1]) {
                rec.events[1] = g.events;
                rec.have_side[1] = true;
                rec.side_tag[1] = tag;
            }
        }
    };

    for (const End& en : work.ends) {
        if (en.is_edge) {
            Vec2 d0 = en.dir;
            const Vec2& A = T.tri[en.tri][en.corner];
            Vec2 mid = A + Scalar(1, 2) * d0;
            PV pos{mid, d0.perp()};
            handle_trace(en.tri, pos, d0);
        } else {
            // seed just off the first segment of the connection, on both sides
            const Vec2& v = T.tri[en.tri][en.corner];
            auto step = triangle_step(T, en.tri, PV{v}, en.dir, -1);
            if (!step) throw std::logic_error("end realization leaves the triangle immediately");
            Scalar s1 = std::get<1>(*step).v;
            Vec2 mid = v + (Scalar(1, 2) * s1) * en.dir;
            handle_trace(en.tri, PV{mid, en.dir.perp()}, en.dir);
            handle_trace(en.tri, PV{mid, -en.dir.perp()}, en.dir);
        }
    }

    std::vector<Cylinder> out;
    for (auto& [key, rec] : found) {
        if (!rec.have_side[1]) throw std::logic_error("cylinder discovered from one side only");
        Cylinder c;
        c.direction = canonical_sign(work.rep);
        c.circumference2 = rec.period * rec.period * rec.norm2d;
        c.area = rec.period * rec.width;
        c.height2 = rec.width * rec.width / rec.norm2d;
        c.chains[0] = chain_from_events(rec.events[0], rec.period, rec.seed_dir, T);
        c.chains[1] = chain_from_events(rec.events[1], rec.period, rec.seed_dir, T);
        c.both_sides_poles = c.chains[0].all_poles && c.chains[1].all_poles;
        for (int side = 0; side < 2; ++side) {
            if (c.chains[side].all_poles && (!c.both_sides_poles || side == 0)) {
                std::set<int> ps(c.chains[side].vertices.begin(), c.chains[side].vertices.end());
                c.pole_set.assign(ps.begin(), ps.end());
                break;
            }
        }
        Vec2 core_pos = rec.seed_pos + (rec.width / (Scalar(2) * rec.qabs)) * rec.seed_eps;
        c.core_markings = trace_core_markings(T, rec.seed_tri, core_pos, rec.seed_dir, lim.max_steps);
        out.push_back(std::move(c));
    }
    return out;
}

std::map<std::string, ClassWork> group_by_direction(std::vector<End> ends) {
    // deterministic end order inside each class
    std::sort(ends.begin(), ends.end(), [](const End& a, const End& b) {
        if (a.len2 != b.len2) return a.len2 < b.len2;
        return std::tie(a.tri, a.corner, a.is_edge) < std::tie(b.tri, b.corner, b.is_edge);
    });
    std::map<std::string, ClassWork> classes;
    for (auto& en : ends) {
        std::string key = direction_key(en.dir);
        auto& cw = classes[key];
        if (cw.ends.empty()) cw.rep = canonical_sign(en.dir);
        cw.ends.push_back(en);
    }
    return classes;
}

std::vector<Cylinder> cylinders_from_classes(const Triangulation& T, std::map<std::string, ClassWork> classes,
                                             const Scalar& L2, int threads) {
    std::vector<const ClassWork*> order;
    for (auto& [k, cw] : classes) order.push_back(&cw);
    std::vector<std::vector<Cylinder>> results(order.size());
    if (threads < 1) threads = 1;
    auto worker = [&](int id) {
        for (std::size_t i = id; i < order.size(); i += threads) results[i] = run_direction_class(T, *order[i], L2);
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker, i);
        for (auto& th : pool) th.join();
    }
    std::vector<Cylinder> out;
    for (auto& r : results)
        for (auto& c : r) out.push_back(std::move(c));
    return out;
}

}  // namespace

std::vector<SaddleConnection> saddle_connections(const FlatSurface& s, const Scalar& bound) {
    if (bound.sign() <= 0) throw std::invalid_argument("length bound must be positive");
    auto T = s.triangulation();
    Scalar L2 = bound * bound;
    std::vector<End> ends;
    enumerate_ends(*T, L2, ends);

    // Each connection is seen once from each endpoint; group by invariants and halve.
    std::map<std::string, std::vector<const End*>> groups;
    for (const auto& en : ends) {
        Vec2 canon = canonical_sign(en.dir);
        int from = T->vclass_at(en.tri, en.corner);
        int lo = std::min(from, en.to_vclass), hi = std::max(from, en.to_vclass);
        std::string key =
            en.len2.str() + "|" + canon.x.str() + "," + canon.y.str() + "|" + std::to_string(lo) + "-" + std::to_string(hi);
        groups[key].push_back(&en);
    }
    std::vector<SaddleConnection> out;
    for (auto& [key, g] : groups) {
        if (g.size() % 2 != 0) throw std::logic_error("saddle connection with unpaired ends");
        for (std::size_t i = 0; i < g.size() / 2; ++i) {
            const End& en = *g[i];
            SaddleConnection sc;
            sc.holonomy = canonical_sign(en.dir);
            sc.length2 = en.len2;
            sc.from_vclass = T->vclass_at(en.tri, en.corner);
            sc.to_vclass = en.to_vclass;
            out.push_back(std::move(sc));
        }
    }
    std::sort(out.begin(), out.end(), [](const SaddleConnection& a, const SaddleConnection& b) {
        if (a.length2 != b.length2) return a.length2 < b.length2;
        if (a.holonomy.x != b.holonomy.x) return a.holonomy.x < b.holonomy.x;
        if (a.holonomy.y != b.holonomy.y) return a.holonomy.y < b.holonomy.y;
        return std::tie(a.from_vclass, a.to_vclass) < std::tie(b.from_vclass, b.to_vclass);
    });
    return out;
}

std::vector<Cylinder> cylinders_up_to(const FlatSurface& s, const Scalar& bound, int threads) {
    if (bound.sign() <= 0) throw std::invalid_argument("length bound must be positive");
    auto T = s.triangulation();
    Scalar L2 = bound * bound;
    std::vector<End> ends;
    enumerate_ends(*T, L2, ends);
    return cylinders_from_classes(*T, group_by_direction(std::move(ends)), L2, threads);
}

std::vector<Cylinder> cylinders_in_direction(const FlatSurface& s, const Vec2& dir, const Scalar& bound) {
    if (dir.is_zero()) throw std::invalid_argument("zero direction");
    if (bound.sign() <= 0) throw std::invalid_argument("length bound must be positive");
    auto Tp = s.triangulation();
    const Triangulation& T = *Tp;
    Scalar L2 = bound * bound;
    Vec2 d = canonical_sign(dir);
    std::vector<End> ends;
    // edges parallel to d
    for (int t = 0; t < T.num_tris(); ++t)
        for (int k = 0; k < 3; ++k) {
            Vec2 E = T.edge_vec(t, k);
            if (flatcount::cross(E, d).sign() == 0 && norm2(E) <= L2)
                ends.push_back({t, k, E, norm2(E), T.vclass_at(t, (k + 1) % 3), true});
        }
    // separatrix rays strictly inside corners, traced to the first vertex
    for (int t = 0; t < T.num_tris(); ++t)
        for (int k = 0; k < 3; ++k) {
            Vec2 r1 = T.tri[t][(k + 1) % 3] - T.tri[t][k];
            Vec2 r2 = T.tri[t][(k + 2) % 3] - T.tri[t][k];
            for (const Vec2& dd : {d, -d}) {
                if (flatcount::cross(r1, dd).sign() <= 0 || flatcount::cross(dd, r2).sign() <= 0) continue;
                // pure ray trace from the corner vertex
                int ct = t, entry = -1;
                Vec2 pos = T.tri[t][k];
                Vec2 cd = dd;
                Scalar A(0);
                bool hit = false;
                int hit_vclass = -1;
                for (long st = 0; st < 2'000'000; ++st) {
                    auto stp = triangle_step(T, ct, PV{pos}, cd, entry);
                    if (!stp) throw std::logic_error("separatrix trace: no exit");
                    auto [e, sp, w] = *stp;
                    A += sp.v;
                    if (A * A * norm2(dd) > L2) break;
                    if (w.v.sign() == 0 || (w.v - Scalar(1)).sign() == 0) {
                        hit = true;
                        hit_vclass = T.vclass_at(ct, w.v.sign() == 0 ? e : (e + 1) % 3);
                        break;
                    }
                    int slot = Triangulation::slot_of(ct, e);
                    int p = T.partner[slot];
                    pos = T.trans[slot].apply(pos + sp.v * cd);
                    cd = T.trans[slot].apply_vector(cd);
                    ct = Triangulation::tri_of(p);
                    entry = Triangulation::edge_of(p);
                }
                if (hit) ends.push_back({t, k, A * dd, A * A * norm2(dd), hit_vclass, false});
            }
        }
    if (ends.empty()) return {};
    ClassWork cw;
    cw.rep = d;
    std::sort(ends.begin(), ends.end(), [](const End& a, const End& b) {
        if (a.len2 != b.len2) return a.len2 < b.len2;
        return std::tie(a.tri, a.corner, a.is_edge) < std::tie(b.tri, b.corner, b.is_edge);
    });
    cw.ends = std::move(ends);
    return run_direction_class(T, cw, L2);
}

Scalar weighted_count(const FlatSurface& s, const Scalar& L, const CylinderFilter& filter, int threads) {
    auto cyls = cylinders_up_to(s, L, threads);
    Scalar total(0);
    for (const auto& c : cyls)
        if (!filter || filter(c)) total += c.area;
    return total / s.area();
}

std::pair<int, int> profile_of(const Cylinder& c, int p1, int p2) {
    if (p1 == p2) throw std::invalid_argument("profile_of: marked poles must be distinct");
    auto in = [&](int v) {
        return std::find(c.pole_set.begin(), c.pole_set.end(), v) != c.pole_set.end() ? 1 : 0;
    };
    return {in(p1), in(p2)};
}

bool chain_joins(const Cylinder& c, int a, int b) {
    for (const auto& ch : c.chains) {
        int n = static_cast<int>(ch.vertices.size());
        for (int i = 0; i < n; ++i) {
            int u = ch.vertices[i], v = ch.vertices[(i + 1) % n];
            if ((u == a && v == b) || (u == b && v == a)) return true;
        }
    }
    return false;
}

std::vector<Cylinder> lift_cylinders(const CoveringMap& cover, const std::vector<Cylinder>& base_cylinders) {
    std::vector<Cylinder> out;
    for (int i = 0; i < static_cast<int>(base_cylinders.size()); ++i) {
        const Cylinder& c = base_cylinders[i];
        if (c.pole_set.size() != 2)
            throw std::invalid_argument("lift_cylinders: base cylinder lacks a two-pole boundary");
        std::pair<int, int> poles{c.pole_set[0], c.pole_set[1]};
        if (cover.orientation) {
            // the two lifted copies are separated only by the regular leaf through the
            // Weierstrass points over P(C): one merged maximal cylinder
            Cylinder lift;
            lift.direction = c.direction;
            lift.circumference2 = c.circumference2;
            lift.area = Scalar(2) * c.area;
            lift.height2 = Scalar(4) * c.height2;
            for (int p : c.pole_set)
                for (const auto& nm : cover.lifted_names[p]) lift.core_markings.push_back(nm);
            std::sort(lift.core_markings.begin(), lift.core_markings.end());
            lift.lifted_from = i;
            lift.merged_lift = true;
            out.push_back(std::move(lift));
        } else {
            int r = loop_monodromy(cover, poles);
            if (r == 1) {
                Cylinder lift;
                lift.direction = c.direction;
                lift.circumference2 = Scalar(4) * c.circumference2;
                lift.area = Scalar(2) * c.area;
                lift.height2 = c.height2;
                lift.lifted_from = i;
                out.push_back(std::move(lift));
            } else {
                for (int copy = 0; copy < 2; ++copy) {
                    Cylinder lift;
                    lift.direction = c.direction;
                    lift.circumference2 = c.circumference2;
                    lift.area = c.area;
                    lift.height2 = c.height2;
                    lift.lifted_from = i;
                    lift.lift_copies = 2;
                    out.push_back(std::move(lift));
                }
            }
        }
    }
    return out;
}

}  // namespace flatcount
