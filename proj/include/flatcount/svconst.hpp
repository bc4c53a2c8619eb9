#pragma once

#include "flatcount/surface.hpp"

#include <gmpxx.h>

namespace flatcount {

/// Exact Siegel-Veech constant: a nonnegative rational multiple of 1/pi^2.
struct SVConstant {
    mpq_class coefficient;  // value = coefficient * pi^{-2}

    SVConstant() : coefficient(0) {}
    explicit SVConstant(mpq_class c) : coefficient(std::move(c)) { coefficient.canonicalize(); }
    SVConstant(long num, long den) : coefficient(num, den) { coefficient.canonicalize(); }

    double value() const;  // coefficient / pi^2
    std::string str() const { return coefficient.get_str() + "/pi^2"; }

    friend SVConstant operator+(const SVConstant& a, const SVConstant& b) {
        return SVConstant(a.coefficient + b.coefficient);
    }
    friend SVConstant operator-(const SVConstant& a, const SVConstant& b) {
        return SVConstant(a.coefficient - b.coefficient);
    }
    friend SVConstant operator*(const mpq_class& s, const SVConstant& a) { return SVConstant(s * a.coefficient); }
    friend bool operator==(const SVConstant& a, const SVConstant& b) { return a.coefficient == b.coefficient; }
    friend bool operator!=(const SVConstant& a, const SVConstant& b) { return !(a == b); }
};

/// Siegel-Veech constants of the four cylinder configurations C_pq.
struct ConfigurationConstants {
    SVConstant c00, c01, c10, c11;
    SVConstant total() const { return c00 + c01 + c10 + c11; }
};

/// Closed form for hyperelliptic surfaces over genus-0 quadratic signatures:
/// c(X) = -(1/4pi^2) sum d_j (d_j+4)/(d_j+2).  Returns the cover constant; the
/// constant of the sphere itself is half of it (base_constant = true).
SVConstant ekz_constant(const StratumSignature& sig, bool base_constant = false);

/// Applies the exact inverse of the lifting system to the surface constants
/// c(Y), c(Y01), c(Y10), c(Y11).
ConfigurationConstants configuration_solve(const SVConstant& cY, const SVConstant& cY01, const SVConstant& cY10,
                                           const SVConstant& cY11);

struct C11ClosedForm {
    SVConstant sphere;  // 1/(2(d+2)) pi^{-2} on Q(d, -1^{d+4})
    SVConstant lifted;  // 1/(d+2)  pi^{-2} on the hyperelliptic component
    int genus = 0;
    bool odd = false;  // d = 2g-3 (odd) -> H^hyp(2g-2); d = 2g-2 (even) -> H^hyp(g-1,g-1)
};
C11ClosedForm c11_closed_form(int d);

/// Generic constant for cylinders bounded by a saddle connection joining two
/// marked poles on a k-singularity genus-0 stratum: 1/(2(k-3)) pi^{-2}.
SVConstant aez_generic_constant(int k);

struct CounterexampleAverages {
    SVConstant familyA;  // the d+2 pairs (p', p'')
    SVConstant familyB;  // the 2(d+2)(d+1) remaining pairs
    SVConstant whole;    // average over all pairs; equals the generic value
};
CounterexampleAverages counterexample_averages(int d);

/// Bridge to finite-L experiments: |estimate/exact - 1|.
double relative_deviation(double estimate, const SVConstant& exact);

}  // namespace flatcount
