#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "linermoo/genotype.hpp"
#include "linermoo/metrics.hpp"
#include "linermoo/pareto.hpp"

namespace linermoo {

struct Member {
    Genotype genotype;
    Solution solution;
};

struct RankedPopulation {
    std::vector<Member> members;
    std::vector<std::vector<int>> fronts;  // indices into members
    std::vector<double> crowding;          // aligned with members
    std::vector<int> rank;                 // front index per member
};

inline ObjPoint obj_point(const Solution& s) {
    return {s.f1_usd, s.f2_hours, s.residuals.total_violation};
}

// Nondominated sorting plus per-front crowding of a member set.
inline RankedPopulation rank_members(std::vector<Member> members) {
    RankedPopulation pop;
    pop.members = std::move(members);
    std::vector<ObjPoint> pts;
    pts.reserve(pop.members.size());
    for (const Member& m : pop.members) pts.push_back(obj_point(m.solution));
    pop.fronts = fast_nondominated_sort(pts);
    pop.crowding.assign(pop.members.size(), 0.0);
    pop.rank.assign(pop.members.size(), 0);
    for (std::size_t f = 0; f < pop.fronts.size(); ++f) {
        std::vector<Point2> front_pts;
        front_pts.reserve(pop.fronts[f].size());
        for (int i : pop.fronts[f])
            front_pts.push_back({pts[i].f1, pts[i].f2});
        const std::vector<double> cd = crowding_distance(front_pts);
        for (std::size_t k = 0; k < pop.fronts[f].size(); ++k) {
            pop.crowding[pop.fronts[f][k]] = cd[k];
            pop.rank[pop.fronts[f][k]] = static_cast<int>(f);
        }
    }
    return pop;
}

// Indices of feasible first-front members.
inline std::vector<int> feasible_front1(const RankedPopulation& pop) {
    std::vector<int> out;
    if (pop.fronts.empty()) return out;
    for (int i : pop.fronts[0])
        if (pop.members[i].solution.residuals.feasible()) out.push_back(i);
    return out;
}

inline std::vector<Point2> objective_points(
    const std::vector<Member>& members, const std::vector<int>& idx) {
    std::vector<Point2> pts;
    pts.reserve(idx.size());
    for (int i : idx)
        pts.push_back({members[i].solution.f1_usd,
                       members[i].solution.f2_hours});
    return pts;
}

// Reference point slightly beyond the nadir of a point set.
inline Point2 scaled_nadir_ref(const std::vector<Point2>& pts,
                               double factor = 1.1) {
    Point2 nadir = {0, 0};
    for (const Point2& p : pts) {
        nadir[0] = std::max(nadir[0], p[0]);
        nadir[1] = std::max(nadir[1], p[1]);
    }
    Point2 ref;
    for (int k = 0; k < 2; ++k)
        ref[k] = nadir[k] > 0 ? nadir[k] * factor : nadir[k] + 1.0;
    return ref;
}

inline void write_progress_header(std::ostream& os) {
    os << "generation,front1_size,best_f1,best_f2,hypervolume\n";
}

// One CSV progress line: generation, feasible front-1 size, objective bests
// and the front hypervolume at its own scaled-nadir reference.
inline void write_progress_line(std::ostream& os, int generation,
                                const std::vector<ObjPoint>& points) {
    const std::vector<std::vector<int>> fronts = fast_nondominated_sort(points);
    std::vector<Point2> pts;
    if (!fronts.empty()) {
        for (int i : fronts[0])
            if (points[i].violation <= 0)
                pts.push_back({points[i].f1, points[i].f2});
    }
    double best_f1 = std::nan("");
    double best_f2 = std::nan("");
    double hv = 0;
    if (!pts.empty()) {
        best_f1 = pts[0][0];
        best_f2 = pts[0][1];
        for (const Point2& p : pts) {
            best_f1 = std::min(best_f1, p[0]);
            best_f2 = std::min(best_f2, p[1]);
        }
        hv = hv_union(pts, scaled_nadir_ref(pts));
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%zu,%.10g,%.10g,%.10g\n", generation,
                  pts.size(), best_f1, best_f2, hv);
    os << buf;
}

inline void write_progress_line(std::ostream& os, int generation,
                                const RankedPopulation& pop) {
    std::vector<ObjPoint> pts;
    pts.reserve(pop.members.size());
    for (const Member& m : pop.members) pts.push_back(obj_point(m.solution));
    write_progress_line(os, generation, pts);
}

}  // namespace linermoo
