#include "flatcount/verify.hpp"

#include "flatcount/enumerate.hpp"
#include "flatcount/report.hpp"
#include "flatcount/svconst.hpp"
#include "flatcount/templates.hpp"
#include "flatcount/windtree.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace flatcount {

namespace {

const double pi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

struct Timer {
    Clock::time_point start = Clock::now();
    double elapsed() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

CheckResult make_result(const std::string& name, bool pass, const std::string& detail, const Timer& timer) {
    return {name, pass, detail, timer.elapsed()};
}

StratumSignature qsig(std::vector<int> orders) {
    StratumSignature sig;
    sig.kind = Kind::quadratic;
    sig.orders = std::move(orders);
    sig.genus = 0;
    return sig;
}

StratumSignature y_sig(int d) {
    std::vector<int> orders{d};
    orders.insert(orders.end(), d + 4, -1);
    return qsig(std::move(orders));
}
StratumSignature y01_sig(int d) {
    std::vector<int> orders{2 * d + 2};
    orders.insert(orders.end(), 2 * d + 6, -1);
    return qsig(std::move(orders));
}
StratumSignature y11_sig(int d) {
    std::vector<int> orders{d, d};
    orders.insert(orders.end(), 2 * d + 4, -1);
    return qsig(std::move(orders));
}

std::multiset<std::pair<std::string, std::string>> cyl_multiset(const std::vector<Cylinder>& cyls,
                                                                const Scalar& bound) {
    std::multiset<std::pair<std::string, std::string>> out;
    Scalar b2 = bound * bound;
    for (const auto& c : cyls)
        if (c.circumference2 <= b2) out.insert({c.circumference2.str(), c.area.str()});
    return out;
}

// independent lattice oracle: primitive vectors up to sign
std::multiset<std::string> primitive_vectors(int bound) {
    std::multiset<std::string> out;
    for (int x = 0; x <= bound; ++x) {
        for (int y = -bound; y <= bound; ++y) {
            if (x == 0 && y <= 0) continue;
            if (x * x + y * y > bound * bound) continue;
            if (std::gcd(std::abs(x), std::abs(y)) != 1) continue;
            out.insert(std::to_string(x) + "," + std::to_string(y));
        }
    }
    return out;
}

// independent origami oracle for the three-square L surface (scaled lab(1/2,1/2)):
// squares 0,1 in the bottom row, 2 above square 0
struct Origami {
    std::vector<int> h, v;
    int size() const { return static_cast<int>(h.size()); }
};

Origami l_origami() { return {{1, 0, 2}, {2, 1, 0}}; }

std::vector<int> invert(const std::vector<int>& p) {
    std::vector<int> q(p.size());
    for (int i = 0; i < static_cast<int>(p.size()); ++i) q[p[i]] = i;
    return q;
}

// cycle sizes of the direction-(q,p) monodromy
std::vector<int> origami_cycles(const Origami& o, int q, int p) {
    if (q < 0) { q = -q; p = -p; }
    if (q == 0 && p < 0) p = -p;
    std::vector<int> cur(o.size());
    std::iota(cur.begin(), cur.end(), 0);
    auto apply = [&](const std::vector<int>& perm) {
        for (auto& x : cur) x = perm[x];
    };
    const std::vector<int> vstep = p >= 0 ? o.v : invert(o.v);
    int ap = std::abs(p);
    // crossing times k/q (horizontal steps) and j/|p| (vertical steps), merged
    int k = 1, j = 1;
    while (k <= q || j <= ap) {
        bool do_h;
        if (k > q) do_h = false;
        else if (j > ap) do_h = true;
        else do_h = (static_cast<long>(k) * ap <= static_cast<long>(j) * q);
        if (do_h) { apply(o.h); ++k; }
        else { apply(vstep); ++j; }
    }
    std::vector<bool> seen(o.size(), false);
    std::vector<int> cycles;
    for (int i = 0; i < o.size(); ++i) {
        if (seen[i]) continue;
        int len = 0, x = i;
        while (!seen[x]) { seen[x] = true; x = cur[x]; ++len; }
        cycles.push_back(len);
    }
    return cycles;
}

}  // namespace

std::vector<CheckResult> verify_constants() {
    std::vector<CheckResult> out;
    {
        Timer t;
        bool ok = true;
        std::string detail;
        for (int d = 1; d <= 25 && ok; ++d) {
            SVConstant cY = ekz_constant(y_sig(d), true);
            SVConstant cY01 = ekz_constant(y01_sig(d), true);
            SVConstant cY11 = ekz_constant(y11_sig(d), true);
            auto cfg = configuration_solve(cY, cY01, cY01, cY11);
            auto closed = c11_closed_form(d);
            if (cfg.c11 != closed.sphere) { ok = false; detail = "c11 mismatch at d=" + std::to_string(d); }
            if (cfg.total() != cY) { ok = false; detail = "configuration sum != c(Y) at d=" + std::to_string(d); }
            SVConstant lifted = SVConstant(2 * cfg.c11.coefficient);
            if (lifted != closed.lifted) { ok = false; detail = "lifted value mismatch at d=" + std::to_string(d); }
            // Theorem 1.1 shape: 1/(2g-1) for odd d = 2g-3, 1/(2g) for even d = 2g-2
            mpq_class expect = closed.odd ? mpq_class(1, 2 * closed.genus - 1) : mpq_class(1, 2 * closed.genus);
            if (lifted.coefficient != expect) { ok = false; detail = "theorem value mismatch at d=" + std::to_string(d); }
        }
        bool fast = t.elapsed() < 1.0;
        out.push_back(make_result("criterion-1 symbolic pipeline d=1..25", ok && fast,
                                  ok ? (fast ? "exact equality" : "too slow") : detail, t));
    }
    {
        Timer t;
        bool ok = true;
        std::string detail = "Q(1,-1^5): c(Y)=5/3, c(X)=10/3; Q(4,-1^8): 7/3; Q(1,1,-1^6): 11/6";
        if (ekz_constant(y_sig(1), true).coefficient != mpq_class(5, 3)) ok = false;
        if (ekz_constant(y_sig(1), false).coefficient != mpq_class(10, 3)) ok = false;
        if (ekz_constant(y01_sig(1), true).coefficient != mpq_class(7, 3)) ok = false;
        if (ekz_constant(y11_sig(1), true).coefficient != mpq_class(11, 6)) ok = false;
        out.push_back(make_result("criterion-2 EKZ spot values", ok, detail, t));
    }
    {
        Timer t;
        bool ok = true;
        std::string detail;
        for (int d = 1; d <= 10 && ok; ++d) {
            auto avg = counterexample_averages(d);
            if (avg.familyA.coefficient != mpq_class(1, 2 * (d + 2))) ok = false;
            if (avg.familyB.coefficient != mpq_class(1, 4 * (d + 2))) ok = false;
            if (avg.whole.coefficient != mpq_class(1, 2 * (2 * d + 3))) ok = false;
            if (avg.whole != aez_generic_constant(2 * d + 6)) ok = false;
            // weighted recombination over all C(2d+4, 2) pairs
            mpq_class pairs = mpq_class((2 * d + 4) * (2 * d + 3), 2);
            mpq_class recomb = (mpq_class(d + 2) * avg.familyA.coefficient +
                                mpq_class(2 * (d + 2) * (d + 1)) * avg.familyB.coefficient) /
                               pairs;
            if (recomb != avg.whole.coefficient) ok = false;
            if (!(avg.familyA != avg.familyB && avg.familyB != avg.whole && avg.familyA != avg.whole)) ok = false;
            if (!ok) detail = "mismatch at d=" + std::to_string(d);
        }
        out.push_back(make_result("criterion-3 counterexample averages d=1..10", ok,
                                  ok ? "exact equality incl. recombination" : detail, t));
    }
    return out;
}

std::vector<CheckResult> verify_enumeration(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    auto torus = std::make_shared<const FlatSurface>(torus_surface());
    {
        Timer t;
        bool ok = true;
        std::string detail;
        for (int B = 1; B <= 30 && ok; ++B) {
            auto conns = saddle_connections(*torus, Scalar(B));
            std::multiset<std::string> got;
            for (const auto& sc : conns) got.insert(sc.holonomy.x.str() + "," + sc.holonomy.y.str());
            auto want = primitive_vectors(B);
            if (got != want) {
                ok = false;
                detail = "bound " + std::to_string(B) + ": " + std::to_string(got.size()) + " connections vs " +
                         std::to_string(want.size()) + " primitive vectors";
            }
        }
        out.push_back(make_result("criterion-4a torus connections = primitive vectors, bounds 1..30", ok,
                                  ok ? "exact multiset equality" : detail, t));
    }
    {
        Timer t;
        auto cyls = cylinders_up_to(*torus, Scalar(100), opt.threads);
        Scalar N(0);
        for (const auto& c : cyls) N += c.area;
        double ratio = N.to_double() / (pi * 100.0 * 100.0);
        double target = 3.0 / (pi * pi);
        double dev = std::abs(ratio / target - 1.0);
        bool ok = dev <= opt.tol_torus && t.elapsed() < 30.0;
        std::ostringstream d;
        d << "N/(pi L^2) = " << ratio << ", 3/pi^2 = " << target << ", deviation " << dev;
        out.push_back(make_result("criterion-4b torus N/(pi L^2) at L=100 within 2% of 3/pi^2", ok, d.str(), t));
    }
    {
        Timer t;
        FlatSurface scaled = scale_surface(lab_surface(Scalar(1, 2), Scalar(1, 2)), Scalar(2));
        Origami o = l_origami();
        bool ok = true;
        std::string detail;
        int tested = 0;
        for (int q = 0; q <= 15 && ok; ++q) {
            for (int p = -15; p <= 15 && ok; ++p) {
                if (q == 0 && p <= 0) continue;
                if (q * q + p * p > 225) continue;
                if (std::gcd(q, std::abs(p)) != 1) continue;
                ++tested;
                auto cycles = origami_cycles(o, q, p);
                std::multiset<std::pair<std::string, std::string>> want;
                for (int k : cycles)
                    want.insert({Scalar(static_cast<long>(k) * k * (q * q + p * p)).str(), Scalar(k).str()});
                Scalar bound(3 * (std::abs(q) + std::abs(p)) + 1);
                auto cyls = cylinders_in_direction(scaled, Vec2{Scalar(q), Scalar(p)}, bound);
                auto got = cyl_multiset(cyls, bound);
                if (got != want) {
                    ok = false;
                    detail = "direction (" + std::to_string(q) + "," + std::to_string(p) + ") mismatch";
                }
            }
        }
        bool fast = t.elapsed() < 60.0;
        out.push_back(make_result("criterion-5 shear-oracle equivalence |(q,p)| <= 15", ok && fast,
                                  ok ? (std::to_string(tested) + " directions, exact match") : detail, t));
    }
    return out;
}

std::vector<CheckResult> verify_covers(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    Timer t;
    auto Y = std::make_shared<const FlatSurface>(q_template(1));
    struct Spec {
        const char* a;
        const char* b;
        const char* stratum;
    };
    Spec specs[3] = {{"z", "p1", "Q(4,-1^8)"}, {"z", "p2", "Q(4,-1^8)"}, {"p1", "p2", "Q(1,1,-1^6)"}};
    bool ok = true;
    std::string detail;
    std::vector<CoveringMap> covers;
    for (const auto& sp : specs) {
        covers.push_back(ramified_double_cover(Y, sp.a, sp.b));
        const auto& cv = covers.back();
        auto sig = stratum_signature(*cv.total_surface);
        if (sig.display() != sp.stratum) { ok = false; detail = std::string("stratum: got ") + sig.display() + " want " + sp.stratum; }
        if (cv.total_surface->area() != Scalar(2) * Y->area()) { ok = false; detail = "area not doubled"; }
        if (sig.genus != 0) { ok = false; detail = "Riemann-Hurwitz genus mismatch"; }
    }
    out.push_back(make_result("criterion-6a cover strata Q(4,-1^8), Q(4,-1^8), Q(1,1,-1^6)", ok,
                              ok ? "strata, areas, genus verified" : detail, t));

    Timer t2;
    bool ok2 = true;
    std::string detail2;
    Scalar B(20);
    auto base_cyls = cylinders_up_to(*Y, B, opt.threads);
    for (std::size_t i = 0; i < covers.size() && ok2; ++i) {
        auto lifts = lift_cylinders(covers[i], base_cyls);
        auto want = cyl_multiset(lifts, B);
        auto got = cyl_multiset(cylinders_up_to(*covers[i].total_surface, B, opt.threads), B);
        if (want != got) {
            ok2 = false;
            detail2 = "lift identity failed for cover " + std::to_string(i) + " (" + std::to_string(want.size()) +
                      " lifted vs " + std::to_string(got.size()) + " enumerated)";
        }
    }
    out.push_back(make_result("criterion-6b lift identity (Figure-3 case split) at bound 20", ok2,
                              ok2 ? std::to_string(base_cyls.size()) + " base cylinders" : detail2, t2));
    return out;
}

std::vector<CheckResult> verify_windtree(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    Timer t;
    const double target = 1.0 / (3.0 * pi * pi);
    struct Case {
        std::string name;
        Scalar a, b, L;
    };
    std::vector<Case> cases;
    cases.push_back({"lab(1/2,1/2)", Scalar(1, 2), Scalar(1, 2), Scalar(30)});
    cases.push_back({"lab(1/3,1/5)", Scalar(1, 3), Scalar(1, 5), Scalar(30)});
    cases.push_back({"lab(3-2sqrt2)", Scalar::quadratic(3, -2, 2), Scalar::quadratic(3, -2, 2), Scalar(18)});
    bool ok = true;
    std::ostringstream detail;
    std::vector<double> estimates;
    for (const auto& c : cases) {
        FlatSurface lab = build_lab_surface(c.a, c.b);
        Scalar N = windtree_count(lab, c.L, "w1", "w2", opt.threads);
        double Ld = c.L.to_double();
        double est = N.to_double() * lab.area().to_double() / (pi * Ld * Ld);
        estimates.push_back(est);
        double dev = std::abs(est / target - 1.0);
        detail << c.name << ": " << est << " (dev " << dev << ") ";
        if (dev > opt.tol_windtree) ok = false;
    }
    double lo = *std::min_element(estimates.begin(), estimates.end());
    double hi = *std::max_element(estimates.begin(), estimates.end());
    double spread = hi / lo - 1.0;
    detail << "spread " << spread;
    if (spread > opt.tol_windtree) ok = false;
    out.push_back(make_result("criterion-7 non-varying wind-tree estimates vs 1/(3 pi^2)", ok, detail.str(), t));
    return out;
}

std::vector<CheckResult> verify_counterexample(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    Timer t;
    auto Y = std::make_shared<const FlatSurface>(q_template(1));
    auto Y11 = ramified_double_cover(Y, "p1", "p2");
    auto Yhat = ramified_double_cover(Y11.total_surface, "z'", "z''");
    bool ok = true;
    std::string detail;
    auto sig = stratum_signature(*Yhat.total_surface);
    if (sig.genus != 0) { ok = false; detail = "hat cover not genus 0"; }
    auto cyls = cylinders_up_to(*Yhat.total_surface, Scalar(50), opt.threads);
    int offending = 0;
    const auto& T = *Yhat.total_surface;
    for (int bc = 0; bc < static_cast<int>(Yhat.lifted_names.size()); ++bc) {
        if (!Yhat.base->vinfo[bc].is_pole) continue;
        const auto& names = Yhat.lifted_names[bc];
        if (names.size() != 2) continue;  // ramified points do not split
        auto va = T.vclass_by_name(names[0]);
        auto vb = T.vclass_by_name(names[1]);
        if (!va || !vb) { ok = false; detail = "missing lifted pole " + names[0]; break; }
        for (const auto& c : cyls)
            if (chain_joins(c, *va, *vb)) ++offending;
    }
    if (offending != 0) ok = false;
    std::ostringstream d;
    d << cyls.size() << " cylinders up to 50; " << offending << " join a preimage pair " << detail;
    out.push_back(make_result("criterion-8 no cylinder joins p', p'' on the hat cover (bound 50)", ok, d.str(), t));
    return out;
}

std::vector<CheckResult> verify_determinism(const VerifyOptions& opt) {
    (void)opt;
    std::vector<CheckResult> out;
    Timer t;
    struct Case {
        std::string tmpl;
        Scalar a, b, L;
    };
    std::vector<Case> cases = {
        {"torus", Scalar(0), Scalar(0), Scalar(15)},
        {"pillowcase", Scalar(0), Scalar(0), Scalar(10)},
        {"lab", Scalar(1, 2), Scalar(1, 2), Scalar(10)},
        {"qtemplate1", Scalar(0), Scalar(0), Scalar(8)},
        {"qtemplate2", Scalar(0), Scalar(0), Scalar(8)},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        auto s = template_by_name(c.tmpl, c.a, c.b);
        std::string ref;
        for (int threads : {1, 4, 8}) {
            CountOptions co;
            co.L = c.L;
            co.threads = threads;
            auto rep = make_count_report(*s, co);
            std::string blob = rep.jsonl + rep.csv;
            if (ref.empty()) ref = blob;
            else if (ref != blob) {
                ok = false;
                detail = c.tmpl + ": output differs between thread counts";
            }
        }
    }
    out.push_back(make_result("criterion-9 byte-identical reports across threads 1,4,8", ok,
                              ok ? "all templates identical" : detail, t));
    return out;
}

std::vector<CheckResult> verify_suite(const std::string& suite, const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    auto add = [&](std::vector<CheckResult> r) {
        for (auto& x : r) out.push_back(std::move(x));
    };
    if (suite == "constants" || suite == "all") add(verify_constants());
    if (suite == "covers" || suite == "all") add(verify_covers(opt));
    if (suite == "counterexample" || suite == "all") add(verify_counterexample(opt));
    if (suite == "windtree" || suite == "all") add(verify_windtree(opt));
    if (suite == "all") {
        add(verify_enumeration(opt));
        add(verify_determinism(opt));
    }
    if (out.empty()) throw ValidationError("unknown verify suite '" + suite + "'");
    return out;
}

}  // namespace flatcount
