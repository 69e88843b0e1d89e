#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <vector>

namespace linermoo {

// Objective vector plus the scalar constraint violation used for
// constrained dominance (zero means feasible).
struct ObjPoint {
    double f1 = 0;
    double f2 = 0;
    double violation = 0;
};

// Deb's constrained-dominance rule: feasible beats infeasible; among
// infeasible the smaller violation wins; among feasible, Pareto dominance.
inline bool constrained_dominates(const ObjPoint& a, const ObjPoint& b) {
    const bool fa = a.violation <= 0;
    const bool fb = b.violation <= 0;
    if (fa != fb) return fa;
    if (!fa) return a.violation < b.violation;
    const bool no_worse = a.f1 <= b.f1 && a.f2 <= b.f2;
    const bool better = a.f1 < b.f1 || a.f2 < b.f2;
    return no_worse && better;
}

// Partition into nondominated fronts under constrained dominance
// (Deb et al. bookkeeping: domination counts plus dominated-lists).
// Equal points share a front.
inline std::vector<std::vector<int>> fast_nondominated_sort(
    const std::vector<ObjPoint>& points) {
    const int n = static_cast<int>(points.size());
    std::vector<int> dominated_by(n, 0);
    std::vector<std::vector<int>> dominates(n);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (constrained_dominates(points[a], points[b])) {
                dominates[a].push_back(b);
                ++dominated_by[b];
            } else if (constrained_dominates(points[b], points[a])) {
                dominates[b].push_back(a);
                ++dominated_by[a];
            }
        }
    }
    std::vector<std::vector<int>> fronts;
    std::vector<int> current;
    for (int i = 0; i < n; ++i)
        if (dominated_by[i] == 0) current.push_back(i);
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<int> next;
        for (int i : current)
            for (int j : dominates[i])
                if (--dominated_by[j] == 0) next.push_back(j);
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    return fronts;
}

// NSGA-II crowding distance of one front: boundary points get +infinity for
// each objective where they are extreme, interior points sum the normalized
// gaps of their sorted neighbours.
inline std::vector<double> crowding_distance(
    const std::vector<std::array<double, 2>>& front) {
    const int n = static_cast<int>(front.size());
    std::vector<double> dist(n, 0.0);
    if (n == 0) return dist;
    const double inf = std::numeric_limits<double>::infinity();
    for (int obj = 0; obj < 2; ++obj) {
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return front[a][obj] < front[b][obj];
        });
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        const double span = front[order.back()][obj] - front[order.front()][obj];
        if (span <= 0) continue;
        for (int k = 1; k + 1 < n; ++k) {
            if (dist[order[k]] == inf) continue;
            dist[order[k]] +=
                (front[order[k + 1]][obj] - front[order[k - 1]][obj]) / span;
        }
    }
    return dist;
}

}  // namespace linermoo
