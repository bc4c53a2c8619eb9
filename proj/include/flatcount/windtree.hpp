#pragma once

#include "flatcount/enumerate.hpp"

namespace flatcount {

/// Z^2-periodic wind-tree billiard with a x b rectangular obstacles: the
/// fundamental cell is the unit torus minus the block [1-a,1] x [1-b,1], so the
/// free region coincides with the L(a,b) polygon.
struct WindTreeModel {
    Scalar a, b;
};

WindTreeModel make_windtree(const Scalar& a, const Scalar& b);

/// L(a,b) in H(2) with the five regular Weierstrass points marked (w1..w5; the
/// default counting pair w1, w2 lies on the horizontal mid-line).
FlatSurface build_lab_surface(const Scalar& a, const Scalar& b);

/// Weighted, normalized count of cylinders of circumference <= L whose core
/// passes through both named Weierstrass points.
Scalar windtree_count(const FlatSurface& lab, const Scalar& L, const std::string& w_first,
                      const std::string& w_second, int threads = 1);

struct BilliardTrajectory {
    enum class EventKind { reflect_vertical, reflect_horizontal, wrap, corner };
    struct Event {
        EventKind kind;
        Vec2 pos;  // position in the fundamental cell when the event happens
    };
    std::vector<Event> events;
    bool periodic = false;
    bool corner = false;
    Scalar period_length2;   // squared length of one period (when periodic)
    Vec2 unfolded_period;    // straight-line displacement of one period
    Scalar traced_length2;   // squared length actually traced
};

/// Exact billiard flow in the fundamental cell; detects periodicity mod Z^2 by
/// exact state recurrence.  Terminates with a corner event on singular orbits.
BilliardTrajectory billiard_trace(const WindTreeModel& model, const Vec2& start, const Vec2& dir,
                                  const Scalar& max_length);

struct CrossValidation {
    bool periodic = false;
    bool direction_match = false;
    int corner_retries = 0;
    Scalar length_ratio2;  // period^2 / circumference^2, reported, not asserted
};

/// Launches the billiard in the cylinder's direction from a point of the
/// cylinder interior and checks periodicity and direction.
CrossValidation cross_validate_family(const WindTreeModel& model, const FlatSurface& lab, const Cylinder& cyl);

}  // namespace flatcount
