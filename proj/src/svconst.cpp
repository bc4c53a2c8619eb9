#include "flatcount/svconst.hpp"

#include <cmath>

namespace flatcount {

namespace {
const double pi = 3.14159265358979323846;
}

double SVConstant::value() const { return coefficient.get_d() / (pi * pi); }

SVConstant ekz_constant(const StratumSignature& sig, bool base_constant) {
    if (sig.kind != Kind::quadratic) throw std::invalid_argument("ekz_constant: quadratic signature required");
    long sum = 0;
    for (int d : sig.orders) sum += d;
    if (sum != -4 || sig.genus != 0) throw std::invalid_argument("ekz_constant: signature is not genus zero");
    mpq_class acc(0);
    for (int d : sig.orders) {
        if (d == -2) throw std::invalid_argument("ekz_constant: order -2 is a pole of the formula");
        acc += mpq_class(d * (d + 4), d + 2);
    }
    mpq_class c = -acc / 4;
    if (base_constant) c /= 2;
    return SVConstant(c);
}

ConfigurationConstants configuration_solve(const SVConstant& cY, const SVConstant& cY01, const SVConstant& cY10,
                                           const SVConstant& cY11) {
    // inverse of [[1,1,1,1],[2,2,1/2,1/2],[2,1/2,2,1/2],[2,1/2,1/2,2]] is
    // (1/3) [[-3,1,1,1],[2,1,-1,-1],[2,-1,1,-1],[2,-1,-1,1]]
    const mpq_class third(1, 3);
    ConfigurationConstants out;
    out.c00 = SVConstant(third * (-3 * cY.coefficient + cY01.coefficient + cY10.coefficient + cY11.coefficient));
    out.c01 = SVConstant(third * (2 * cY.coefficient + cY01.coefficient - cY10.coefficient - cY11.coefficient));
    out.c10 = SVConstant(third * (2 * cY.coefficient - cY01.coefficient + cY10.coefficient - cY11.coefficient));
    out.c11 = SVConstant(third * (2 * cY.coefficient - cY01.coefficient - cY10.coefficient + cY11.coefficient));
    return out;
}

C11ClosedForm c11_closed_form(int d) {
    if (d < 1) throw std::invalid_argument("c11_closed_form: d >= 1 required");
    C11ClosedForm out;
    out.sphere = SVConstant(1, 2L * (d + 2));
    out.lifted = SVConstant(1, d + 2);
    out.odd = (d % 2 == 1);
    out.genus = out.odd ? (d + 3) / 2 : (d + 2) / 2;
    return out;
}

SVConstant aez_generic_constant(int k) {
    if (k <= 3) throw std::invalid_argument("aez_generic_constant: k >= 4 required");
    return SVConstant(1, 2L * (k - 3));
}

CounterexampleAverages counterexample_averages(int d) {
    if (d < 1) throw std::invalid_argument("counterexample_averages: d >= 1 required");
    CounterexampleAverages out;
    out.familyA = SVConstant(1, 2L * (d + 2));
    out.familyB = SVConstant(1, 4L * (d + 2));
    out.whole = SVConstant(1, 2L * (2 * d + 3));
    return out;
}

double relative_deviation(double estimate, const SVConstant& exact) {
    double e = exact.value();
    return std::abs(estimate / e - 1.0);
}

}  // namespace flatcount
