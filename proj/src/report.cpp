#include "flatcount/report.hpp"
#include "flatcount/svconst.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace flatcount {

namespace {
const double pi = 3.14159265358979323846;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CylinderFilter parse_filter(const FlatSurface& s, const std::string& spec) {
    if (spec.empty() || spec == "all") return {};
    auto eq = spec.find('=');
    std::string head = spec.substr(0, eq);
    std::string tail = eq == std::string::npos ? "" : spec.substr(eq + 1);
    if (head == "profile") {
        if (tail.size() != 2 || (tail[0] != '0' && tail[0] != '1') || (tail[1] != '0' && tail[1] != '1'))
            throw ValidationError("filter: profile wants two bits, e.g. profile=11");
        auto p1 = s.vclass_by_name("p1"), p2 = s.vclass_by_name("p2");
        if (!p1 || !p2) throw ValidationError("filter: surface has no marked poles p1, p2");
        int want1 = tail[0] - '0', want2 = tail[1] - '0';
        return [=](const Cylinder& c) {
            auto pr = profile_of(c, *p1, *p2);
            return pr.first == want1 && pr.second == want2;
        };
    }
    if (head == "wpair") {
        std::string a = "w1", b = "w2";
        if (!tail.empty()) {
            auto comma = tail.find(',');
            if (comma == std::string::npos) throw ValidationError("filter: wpair=a,b");
            a = tail.substr(0, comma);
            b = tail.substr(comma + 1);
        }
        if (!s.marking_by_name(a) || !s.marking_by_name(b))
            throw ValidationError("filter: unknown marked points '" + a + "', '" + b + "'");
        return [=](const Cylinder& c) {
            auto has = [&](const std::string& n) {
                return std::find(c.core_markings.begin(), c.core_markings.end(), n) != c.core_markings.end();
            };
            return has(a) && has(b);
        };
    }
    if (head == "joins") {
        auto comma = tail.find(',');
        if (comma == std::string::npos) throw ValidationError("filter: joins=a,b");
        auto a = s.vclass_by_name(tail.substr(0, comma));
        auto b = s.vclass_by_name(tail.substr(comma + 1));
        if (!a || !b) throw ValidationError("filter: unknown cone points in joins=");
        return [=](const Cylinder& c) { return chain_joins(c, *a, *b); };
    }
    throw ValidationError("unknown filter '" + spec + "'");
}

CountReport make_count_report(const FlatSurface& s, const CountOptions& opt) {
    CylinderFilter filter = parse_filter(s, opt.filter);
    auto cyls = cylinders_up_to(s, opt.L, opt.threads);

    std::vector<const Cylinder*> kept;
    for (const auto& c : cyls)
        if (!filter || filter(c)) kept.push_back(&c);
    std::sort(kept.begin(), kept.end(), [](const Cylinder* a, const Cylinder* b) {
        if (a->circumference2 != b->circumference2) return a->circumference2 < b->circumference2;
        if (a->direction.x != b->direction.x) return a->direction.x < b->direction.x;
        if (a->direction.y != b->direction.y) return a->direction.y < b->direction.y;
        return a->area < b->area;
    });

    auto p1 = s.vclass_by_name("p1"), p2 = s.vclass_by_name("p2");
    std::ostringstream jsonl;
    for (const Cylinder* c : kept) {
        nlohmann::ordered_json rec;
        rec["direction"] = {c->direction.x.str(), c->direction.y.str()};
        rec["circumference_sq"] = c->circumference2.str();
        rec["circumference"] = std::sqrt(c->circumference2.to_double());
        rec["height_sq"] = c->height2.str();
        rec["height"] = std::sqrt(c->height2.to_double());
        rec["area"] = {{"exact", c->area.str()}, {"float", c->area.to_double()}};
        nlohmann::ordered_json poles = nlohmann::ordered_json::array();
        for (int v : c->pole_set) poles.push_back(s.cone_point(v).name);
        rec["poles"] = std::move(poles);
        if (p1 && p2 && !c->pole_set.empty()) {
            auto pr = profile_of(*c, *p1, *p2);
            rec["profile"] = {pr.first, pr.second};
        } else {
            rec["profile"] = nullptr;
        }
        rec["core_markings"] = c->core_markings;
        rec["both_sides_poles"] = c->both_sides_poles;
        jsonl << rec.dump() << "\n";
    }

    CountReport out;
    out.jsonl = jsonl.str();

    // convergence table over nested bounds
    std::ostringstream csv;
    csv << "L,N,ratio,normalized\n";
    double Ld = opt.L.to_double();
    double area = s.area().to_double();
    int rows = std::max(1, opt.csv_rows);
    Scalar total(0);
    std::size_t idx = 0;
    for (int r = 1; r <= rows; ++r) {
        Scalar Lk = Scalar(r, rows) * opt.L;
        Scalar Lk2 = Lk * Lk;
        while (idx < kept.size() && kept[idx]->circumference2 <= Lk2) total += kept[idx++]->area;
        Scalar N = total / s.area();
        double lkd = Ld * r / rows;
        double ratio = N.to_double() / (pi * lkd * lkd);
        csv << format_double(lkd) << "," << format_double(N.to_double()) << "," << format_double(ratio) << ","
            << format_double(ratio * area) << "\n";
    }
    for (; idx < kept.size(); ++idx) total += kept[idx]->area;
    out.count = total / s.area();
    out.csv = csv.str();
    double Nd = out.count.to_double();
    out.final_ratio = Nd / (pi * Ld * Ld);
    out.final_normalized = out.final_ratio * area;
    return out;
}

std::string windtree_report_csv(const FlatSurface& lab, const Scalar& L, const std::string& w1,
                                const std::string& w2, int threads, int rows) {
    CountOptions opt;
    opt.L = L;
    opt.filter = "wpair=" + w1 + "," + w2;
    opt.threads = threads;
    CylinderFilter filter = parse_filter(lab, opt.filter);
    auto cyls = cylinders_up_to(lab, L, threads);
    std::vector<const Cylinder*> kept;
    for (const auto& c : cyls)
        if (filter(c)) kept.push_back(&c);
    std::sort(kept.begin(), kept.end(),
              [](const Cylinder* a, const Cylinder* b) { return a->circumference2 < b->circumference2; });

    const double target = 1.0 / (3.0 * pi * pi);
    double area = lab.area().to_double();
    std::ostringstream csv;
    csv << "L,count,normalized,target,rel_error\n";
    Scalar total(0);
    std::size_t idx = 0;
    double Ld = L.to_double();
    for (int r = 1; r <= std::max(1, rows); ++r) {
        Scalar Lk = Scalar(r, rows) * L;
        Scalar Lk2 = Lk * Lk;
        while (idx < kept.size() && kept[idx]->circumference2 <= Lk2) total += kept[idx++]->area;
        double N = (total / lab.area()).to_double();
        double lkd = Ld * r / rows;
        double normalized = N * area / (pi * lkd * lkd);
        csv << format_double(lkd) << "," << format_double(N) << "," << format_double(normalized) << ","
            << format_double(target) << "," << format_double(normalized / target - 1.0) << "\n";
    }
    return csv.str();
}

}  // namespace flatcount
