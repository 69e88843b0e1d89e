#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>
#include <vector>

namespace linermoo {

using Point2 = std::array<double, 2>;

// A mutually nondominated 2-D front, sorted ascending by the first
// objective. Exact duplicates are allowed (they dominate nothing);
// construction throws if some point strictly dominates another.
class Front2D {
public:
    Front2D() = default;

    explicit Front2D(std::vector<Point2> pts) : points_(std::move(pts)) {
        std::sort(points_.begin(), points_.end());
        for (std::size_t i = 1; i < points_.size(); ++i) {
            const Point2& prev = points_[i - 1];
            const Point2& cur = points_[i];
            if (prev == cur) continue;
            // sorted: prev[0] <= cur[0]; nondominance needs cur[1] < prev[1]
            if (cur[1] >= prev[1])
                throw std::invalid_argument("front contains a dominated point");
        }
    }

    const std::vector<Point2>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    Front2D without(std::size_t idx) const {
        std::vector<Point2> pts = points_;
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(idx));
        return Front2D(std::move(pts));
    }

private:
    std::vector<Point2> points_;
};

// Keeps the nondominated subset (minimization, both objectives), duplicates
// collapsed to one copy.
inline Front2D pareto_filter(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<Point2> keep;
    double best_f2 = std::numeric_limits<double>::infinity();
    for (const Point2& p : pts) {
        if (p[1] < best_f2) {
            keep.push_back(p);
            best_f2 = p[1];
        }
    }
    return Front2D(std::move(keep));
}

// Union area of the rectangles spanned by arbitrary points against the
// reference corner. Points that do not strictly dominate the reference are
// ignored; dominated or duplicate points simply add no area.
inline double hv_union(const std::vector<Point2>& pts, Point2 ref) {
    std::vector<Point2> sorted;
    sorted.reserve(pts.size());
    for (const Point2& p : pts)
        if (p[0] < ref[0] && p[1] < ref[1]) sorted.push_back(p);
    std::sort(sorted.begin(), sorted.end());
    double area = 0;
    double min_f2 = ref[1];
    for (const Point2& p : sorted) {
        if (p[1] < min_f2) {
            area += (ref[0] - p[0]) * (min_f2 - p[1]);
            min_f2 = p[1];
        }
    }
    return area;
}

// Exact hypervolume of a front w.r.t. a reference point every front member
// must strictly dominate.
inline double hypervolume_2d(const Front2D& front, Point2 ref) {
    for (const Point2& p : front.points())
        if (!(p[0] < ref[0] && p[1] < ref[1]))
            throw std::invalid_argument(
                "front point does not strictly dominate the reference point");
    return hv_union(front.points(), ref);
}

// Exclusive contribution of one member: H(F) - H(F \ {s}).
inline double hv_contribution(const Front2D& front, std::size_t idx,
                              Point2 ref) {
    if (idx >= front.size()) throw std::out_of_range("hv_contribution index");
    return hypervolume_2d(front, ref) - hypervolume_2d(front.without(idx), ref);
}

// Additive epsilon indicator: the smallest shift that makes front A weakly
// dominate every point of front B. Nonpositive when A already covers B.
inline double epsilon_indicator(const Front2D& a, const Front2D& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("epsilon indicator of an empty front");
    double eps = -std::numeric_limits<double>::infinity();
    for (const Point2& pb : b.points()) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point2& pa : a.points())
            best = std::min(best,
                            std::max(pa[0] - pb[0], pa[1] - pb[1]));
        eps = std::max(eps, best);
    }
    return eps;
}

}  // namespace linermoo
