#include "flatcount/windtree.hpp"
#include "flatcount/templates.hpp"

#include <cmath>

namespace flatcount {

WindTreeModel make_windtree(const Scalar& a, const Scalar& b) {
    if (a.sign() <= 0 || b.sign() <= 0 || (Scalar(1) - a).sign() <= 0 || (Scalar(1) - b).sign() <= 0)
        throw ValidationError("wind-tree obstacle dimensions must lie in (0,1)");
    return {a, b};
}

FlatSurface build_lab_surface(const Scalar& a, const Scalar& b) { return lab_surface(a, b); }

Scalar windtree_count(const FlatSurface& lab, const Scalar& L, const std::string& w_first,
                      const std::string& w_second, int threads) {
    if (!lab.marking_by_name(w_first) || !lab.marking_by_name(w_second))
        throw ValidationError("marked pair invalid: not regular Weierstrass points of the surface");
    auto filter = [&](const Cylinder& c) {
        auto has = [&](const std::string& n) {
            return std::find(c.core_markings.begin(), c.core_markings.end(), n) != c.core_markings.end();
        };
        return has(w_first) && has(w_second);
    };
    return weighted_count(lab, L, filter, threads);
}

namespace {

struct UnfoldMap {
    int sx = 1, sy = 1;
    Vec2 off;
    Vec2 apply(const Vec2& p) const { return {Scalar(sx) * p.x + off.x, Scalar(sy) * p.y + off.y}; }
    // precompose with reflection across x = c (applied in cell coordinates)
    void reflect_x(const Scalar& c) {
        off.x += Scalar(sx) * (Scalar(2) * c);
        sx = -sx;
    }
    void reflect_y(const Scalar& c) {
        off.y += Scalar(sy) * (Scalar(2) * c);
        sy = -sy;
    }
    void translate(const Vec2& t) { off += Vec2{Scalar(sx) * t.x, Scalar(sy) * t.y}; }
};

}  // namespace

BilliardTrajectory billiard_trace(const WindTreeModel& model, const Vec2& start, const Vec2& dir,
                                  const Scalar& max_length) {
    Scalar w = Scalar(1) - model.a, h = Scalar(1) - model.b;
    Scalar one(1), zero(0);
    if (dir.is_zero()) throw ValidationError("billiard direction must be nonzero");
    if (start.x < zero || start.x > one || start.y < zero || start.y > one)
        throw ValidationError("billiard start outside the fundamental cell");
    if (start.x > w && start.x < one && start.y > h && start.y < one)
        throw ValidationError("start inside obstacle");

    BilliardTrajectory out;
    Vec2 pos = start, d = dir;
    UnfoldMap unfold;
    Scalar time(0);  // path length = time * |dir|
    Scalar n2 = norm2(dir);
    Scalar max2 = max_length * max_length;

    struct State {
        Vec2 pos, d;
        Scalar time;
    };
    std::vector<State> seen{{pos, d, time}};

    for (int iter = 0; iter < 100000; ++iter) {
        // earliest boundary-feature hit among the candidate planes
        std::optional<Scalar> best;
        auto consider = [&](const Scalar& t) {
            if (t.sign() <= 0) return;
            if (!best || t < *best) best = t;
        };
        auto plane_time = [&](const Scalar& target, const Scalar& coord, const Scalar& speed) -> std::optional<Scalar> {
            if (speed.sign() == 0) return std::nullopt;
            Scalar t = (target - coord) / speed;
            if (t.sign() <= 0) return std::nullopt;
            return t;
        };
        // candidate planes with feature checks evaluated at the hit point
        std::vector<Scalar> cands;
        for (const Scalar& cx : {zero, one, w})
            if (auto t = plane_time(cx, pos.x, d.x)) cands.push_back(*t);
        for (const Scalar& cy : {zero, one, h})
            if (auto t = plane_time(cy, pos.y, d.y)) cands.push_back(*t);
        for (const Scalar& t : cands) {
            Vec2 q = pos + t * d;
            bool feature = false;
            if (q.x == zero || q.x == one || q.y == zero || q.y == one) feature = true;
            if (q.x == w && q.y >= h) feature = true;   // obstacle left side (or its corners)
            if (q.y == h && q.x >= w) feature = true;   // obstacle bottom side
            if (feature) consider(t);
        }
        if (!best) throw std::logic_error("billiard: no boundary hit");
        Scalar t = *best;
        Vec2 q = pos + t * d;
        time += t;
        if (time * time * n2 > max2) {
            out.traced_length2 = time * time * n2;
            return out;
        }
        // unfolding consistency: the reflected path unfolds to a straight segment
        if (unfold.apply(q) != start + time * dir)
            throw std::logic_error("billiard: unfolding consistency violated");

        // classify
        bool corner = false;
        int wrap_x = 0, wrap_y = 0;
        bool refl_x = false, refl_y = false;
        bool on_x0 = q.x == zero, on_x1 = q.x == one, on_y0 = q.y == zero, on_y1 = q.y == one;
        bool on_ow = q.x == w && q.y >= h && q.y <= one;
        bool on_oh = q.y == h && q.x >= w && q.x <= one;
        int walls = (on_x0 || on_x1 ? 1 : 0) + (on_y0 || on_y1 ? 1 : 0);
        if (walls == 2) corner = true;  // cell corners coincide with the obstacle corner
        if (on_x1 && q.y == h) corner = true;
        if (on_x0 && q.y == h) corner = true;
        if (on_y1 && q.x == w) corner = true;
        if (on_y0 && q.x == w) corner = true;
        if (on_ow && (q.y == h || q.y == one)) corner = true;
        if (on_oh && (q.x == w || q.x == one)) corner = true;
        if (!corner) {
            if (on_x1) {
                if (q.y > h) throw std::logic_error("billiard reached a wall inside the obstacle");
                wrap_x = -1;
            } else if (on_x0) {
                if (q.y > h) refl_x = true;  // right side of the neighboring obstacle
                else wrap_x = 1;
            }
            if (on_y1) {
                if (q.x > w) throw std::logic_error("billiard reached a wall inside the obstacle");
                wrap_y = -1;
            } else if (on_y0) {
                if (q.x > w) refl_y = true;  // top side of the neighboring obstacle
                else wrap_y = 1;
            }
            if (on_ow && !on_x0 && !on_x1) refl_x = true;
            if (on_oh && !on_y0 && !on_y1) refl_y = true;
        }

        if (corner) {
            out.events.push_back({BilliardTrajectory::EventKind::corner, q});
            out.corner = true;
            out.traced_length2 = time * time * n2;
            return out;
        }
        Vec2 npos = q;
        if (refl_x) {
            unfold.reflect_x(q.x);
            d.x = -d.x;
            out.events.push_back({BilliardTrajectory::EventKind::reflect_vertical, q});
        }
        if (refl_y) {
            unfold.reflect_y(q.y);
            d.y = -d.y;
            out.events.push_back({BilliardTrajectory::EventKind::reflect_horizontal, q});
        }
        if (wrap_x != 0) {
            npos.x += Scalar(wrap_x);
            unfold.translate({Scalar(-wrap_x), Scalar(0)});
            out.events.push_back({BilliardTrajectory::EventKind::wrap, q});
        }
        if (wrap_y != 0) {
            npos.y += Scalar(wrap_y);
            unfold.translate({Scalar(0), Scalar(-wrap_y)});
            out.events.push_back({BilliardTrajectory::EventKind::wrap, q});
        }
        pos = npos;

        for (const auto& st : seen) {
            if (st.pos == pos && st.d == d) {
                out.periodic = true;
                Scalar dt = time - st.time;
                out.period_length2 = dt * dt * n2;
                out.unfolded_period = dt * dir;
                out.traced_length2 = time * time * n2;
                return out;
            }
        }
        seen.push_back({pos, d, time});
    }
    throw std::runtime_error("billiard: event limit exceeded");
}

CrossValidation cross_validate_family(const WindTreeModel& model, const FlatSurface& lab, const Cylinder& cyl) {
    if (cyl.core_markings.empty())
        throw ValidationError("cross_validate_family: cylinder does not pass the marked-pair filter");
    CrossValidation out;
    auto m = lab.marking_by_name(cyl.core_markings.front());
    if (!m) throw ValidationError("cross_validate_family: unknown core marking");
    Vec2 d = cyl.direction;
    // rational cap comfortably above a few hundred periods
    double circ = std::sqrt(cyl.circumference2.to_double());
    Scalar cap(static_cast<long>(circ * 512.0) + 16);

    // transverse perturbations stay inside the cylinder: |q| * |d| < height/2
    double hmax = std::sqrt(cyl.height2.to_double() / norm2(d).to_double()) / 2.0;
    std::vector<Scalar> offsets{Scalar(0)};
    for (int k = 3; k < 10; ++k) {
        long denom = 1L << k;
        Scalar q(static_cast<long>(hmax * denom), denom);
        if (q.sign() > 0) {
            offsets.push_back(q);
            offsets.push_back(-q);
        }
    }
    for (const Scalar& q : offsets) {
        Vec2 start = m->pos + q * d.perp();
        BilliardTrajectory tr;
        try {
            tr = billiard_trace(model, start, d, cap);
        } catch (const ValidationError&) {
            ++out.corner_retries;
            continue;
        }
        if (tr.corner) {
            ++out.corner_retries;
            continue;
        }
        if (!tr.periodic) continue;
        out.periodic = true;
        // the billiard direction matches the cylinder slope up to sign flips
        Scalar lhs = cyl.direction.x * d.y, rhs = cyl.direction.y * d.x;
        out.direction_match = (lhs * lhs == rhs * rhs);
        out.length_ratio2 = tr.period_length2 / cyl.circumference2;
        return out;
    }
    return out;
}

}  // namespace flatcount
