#pragma once

#include "flatcount/surface.hpp"

#include <memory>

namespace flatcount {

/// Unit-square torus with its single vertex as a marked regular point.
FlatSurface torus_surface();

/// Two unit squares glued in the pillowcase pattern: Q(-1^4), area 2.
FlatSurface pillowcase_surface();

/// The L-shaped translation surface in H(2): the unit square minus an a x b block
/// at the top right, opposite sides identified.  The five regular Weierstrass
/// points are marked w1..w5; w1 and w2 sit on the horizontal mid-line.
FlatSurface lab_surface(const Scalar& a, const Scalar& b);

/// Four-square staircase origami in H(1,1).
FlatSurface staircase_surface();

/// Genus-zero templates: q_template(1) in Q(1,-1^5) and q_template(2) in
/// Q(2,-1^6), built as hyperelliptic quotients of lab(1/2,1/2) and of the
/// staircase.  Poles are named p1..; the zero is named z.
FlatSurface q_template(int d);

/// Scales all coordinates (markings included) by a positive factor.
FlatSurface scale_surface(const FlatSurface& s, const Scalar& factor);

/// CLI entry: torus | pillowcase | lab | qtemplate1 | qtemplate2 (lab takes a,b).
std::shared_ptr<const FlatSurface> template_by_name(const std::string& name, const Scalar& a, const Scalar& b);

}  // namespace flatcount
