#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "linermoo/instance.hpp"

namespace linermoo {

inline constexpr int kDefaultMaxTransshipments = 2;

struct PathSegment {
    int route = 0;
    int board_call = 0;   // container is loaded here
    int alight_call = 0;  // and discharged here
};

// A physical container itinerary from origin to destination. Consecutive
// segments hand over at a shared port (a TransshipmentQuad); the handover
// ports are pairwise distinct and never the origin or destination. No
// segment rides a full loop, and no ridden leg arrives back at the origin
// port, so the flows induced by a path respect the demand-balance,
// conservation, no-return and no-origin-discharge constraints by
// construction.
struct CargoPath {
    int origin = 0;
    int destination = 0;
    std::vector<PathSegment> segments;
    std::vector<TransshipmentQuad> transshipment_calls;

    int num_transshipments() const {
        return static_cast<int>(segments.size()) - 1;
    }
};

// Weekly flow variables: loads/discharges per (route, call, origin) and
// onboard flow per (route, leg, origin).
struct FlowAssignment {
    int num_ports = 0;
    // per route, flattened (call * num_ports + origin)
    std::vector<std::vector<double>> z_load;
    std::vector<std::vector<double>> z_disc;
    std::vector<std::vector<double>> f;

    static FlowAssignment zeros(const Instance& inst) {
        FlowAssignment fa;
        fa.num_ports = inst.num_ports();
        fa.z_load.resize(inst.num_routes());
        fa.z_disc.resize(inst.num_routes());
        fa.f.resize(inst.num_routes());
        for (int r = 0; r < inst.num_routes(); ++r) {
            const std::size_t cells =
                static_cast<std::size_t>(inst.routes[r].num_calls()) *
                static_cast<std::size_t>(fa.num_ports);
            fa.z_load[r].assign(cells, 0.0);
            fa.z_disc[r].assign(cells, 0.0);
            fa.f[r].assign(cells, 0.0);
        }
        return fa;
    }

    double& zl(int r, int i, int o) { return z_load[r][i * num_ports + o]; }
    double& zd(int r, int i, int o) { return z_disc[r][i * num_ports + o]; }
    double& fl(int r, int i, int o) { return f[r][i * num_ports + o]; }
    double zl(int r, int i, int o) const { return z_load[r][i * num_ports + o]; }
    double zd(int r, int i, int o) const { return z_disc[r][i * num_ports + o]; }
    double fl(int r, int i, int o) const { return f[r][i * num_ports + o]; }

    // Total TEU handled (loaded + discharged) at one call.
    double handled(int r, int i) const {
        double s = 0;
        for (int o = 0; o < num_ports; ++o) s += zl(r, i, o) + zd(r, i, o);
        return s;
    }

    // Total TEU onboard on one leg.
    double leg_flow(int r, int i) const {
        double s = 0;
        for (int o = 0; o < num_ports; ++o) s += fl(r, i, o);
        return s;
    }
};

namespace detail {

inline int find_call(const Route& route, int port) {
    for (int i = 0; i < route.num_calls(); ++i)
        if (route.port_calls[i] == port) return i;
    return -1;
}

// Arrival ports of the legs ridden from board to alight (exclusive of the
// boarding call itself). Returns false if any of them equals `banned`.
inline bool segment_avoids(const Route& route, int board, int alight,
                           int banned) {
    const int n = route.num_calls();
    for (int c = (board + 1) % n; ; c = (c + 1) % n) {
        if (route.port_calls[c] == banned) return false;
        if (c == alight) break;
    }
    return true;
}

inline bool path_less(const CargoPath& a, const CargoPath& b) {
    if (a.segments.size() != b.segments.size())
        return a.segments.size() < b.segments.size();
    for (std::size_t k = 0; k < a.segments.size(); ++k) {
        const PathSegment& x = a.segments[k];
        const PathSegment& y = b.segments[k];
        if (x.route != y.route) return x.route < y.route;
        if (x.board_call != y.board_call) return x.board_call < y.board_call;
        if (x.alight_call != y.alight_call)
            return x.alight_call < y.alight_call;
    }
    return false;
}

inline void extend_path(const Instance& inst, int origin, int dest,
                        int max_transshipments, std::vector<PathSegment>& stack,
                        std::vector<int>& junction_ports,
                        std::vector<CargoPath>& out) {
    // copy: the recursion below grows `stack` and may reallocate it
    const PathSegment last = stack.back();
    const Route& route = inst.routes[last.route];
    const int here = route.port_calls[last.alight_call];
    if (here == dest) {
        CargoPath path;
        path.origin = origin;
        path.destination = dest;
        path.segments = stack;
        for (std::size_t k = 0; k + 1 < stack.size(); ++k) {
            const PathSegment& a = stack[k];
            const PathSegment& b = stack[k + 1];
            path.transshipment_calls.push_back(
                {a.route, a.alight_call, b.route, b.board_call,
                 inst.routes[a.route].port_calls[a.alight_call]});
        }
        out.push_back(std::move(path));
        return;
    }
    if (static_cast<int>(stack.size()) > max_transshipments) return;
    for (int r2 = 0; r2 < inst.num_routes(); ++r2) {
        if (r2 == last.route) continue;
        const Route& next = inst.routes[r2];
        const int board = find_call(next, here);
        if (board < 0) continue;
        const int n = next.num_calls();
        for (int step = 1; step < n; ++step) {
            const int alight = (board + step) % n;
            const int alight_port = next.port_calls[alight];
            if (alight_port == origin) continue;
            if (alight_port != dest) {
                // prospective junction must be fresh
                if (std::find(junction_ports.begin(), junction_ports.end(),
                              alight_port) != junction_ports.end())
                    continue;
            }
            if (!segment_avoids(next, board, alight, origin)) continue;
            stack.push_back({r2, board, alight});
            junction_ports.push_back(here);
            extend_path(inst, origin, dest, max_transshipments, stack,
                        junction_ports, out);
            junction_ports.pop_back();
            stack.pop_back();
        }
    }
}

}  // namespace detail

// All distinct container paths from o to d with at most `max_transshipments`
// vessel changes, ordered by transshipment count then lexicographically by
// segment tuples. Empty when the pair is disconnected.
inline std::vector<CargoPath> enumerate_paths(
    const Instance& inst, int o, int d,
    int max_transshipments = kDefaultMaxTransshipments) {
    std::vector<CargoPath> out;
    if (o == d) return out;
    for (int r = 0; r < inst.num_routes(); ++r) {
        const Route& route = inst.routes[r];
        const int board = detail::find_call(route, o);
        if (board < 0) continue;
        const int n = route.num_calls();
        for (int step = 1; step < n; ++step) {
            const int alight = (board + step) % n;
            const int alight_port = route.port_calls[alight];
            if (alight_port == o) continue;  // cannot happen: ports unique
            std::vector<PathSegment> stack{{r, board, alight}};
            std::vector<int> junctions;
            detail::extend_path(inst, o, d, max_transshipments, stack,
                                junctions, out);
        }
    }
    std::sort(out.begin(), out.end(), detail::path_less);
    return out;
}

// Candidate paths of one demanded OD pair.
struct OdPaths {
    int origin = 0;
    int destination = 0;
    std::vector<CargoPath> paths;
};

// Throws when some demanded OD pair has no candidate path.
inline void validate_connectivity(
    const Instance& inst,
    int max_transshipments = kDefaultMaxTransshipments) {
    for (int o = 0; o < inst.num_ports(); ++o) {
        for (int d = 0; d < inst.num_ports(); ++d) {
            if (inst.demand(o, d) <= 0) continue;
            if (enumerate_paths(inst, o, d, max_transshipments).empty())
                detail::fail("disconnected demand pair " + inst.ports[o].id +
                             " -> " + inst.ports[d].id);
        }
    }
}

// Converts per-path TEU quantities into flow variables. `quantities[k]`
// aligns with `ods[k].paths`; each group must be nonnegative and sum to the
// pair's demand within 1e-9 TEU.
inline FlowAssignment flows_from_paths(
    const Instance& inst, const std::vector<OdPaths>& ods,
    const std::vector<std::vector<double>>& quantities) {
    if (ods.size() != quantities.size())
        throw std::invalid_argument("allocation size mismatch");
    FlowAssignment fa = FlowAssignment::zeros(inst);
    for (std::size_t k = 0; k < ods.size(); ++k) {
        const OdPaths& od = ods[k];
        const auto& qs = quantities[k];
        if (qs.size() != od.paths.size())
            throw std::invalid_argument("allocation path-count mismatch");
        double sum = 0;
        for (double q : qs) {
            if (q < 0) throw std::invalid_argument("negative path quantity");
            sum += q;
        }
        if (std::abs(sum - inst.demand(od.origin, od.destination)) > 1e-9)
            throw std::invalid_argument("allocation does not meet demand");
        for (std::size_t p = 0; p < od.paths.size(); ++p) {
            const double q = qs[p];
            if (q == 0) continue;
            const CargoPath& path = od.paths[p];
            const int o = path.origin;
            for (const PathSegment& seg : path.segments) {
                const Route& route = inst.routes[seg.route];
                const int n = route.num_calls();
                fa.zl(seg.route, seg.board_call, o) += q;
                fa.zd(seg.route, seg.alight_call, o) += q;
                for (int c = seg.board_call; c != seg.alight_call;
                     c = (c + 1) % n)
                    fa.fl(seg.route, c, o) += q;
            }
        }
    }
    return fa;
}

// TEU transshipped at port p:
//   (1/2) (sum of loads+discharges at p over origins o != p
//          - demand terminating at p)
// Loads and discharges of foreign-origin containers at p are either
// transshipment lifts (two per transshipped TEU) or final deliveries;
// removing the deliveries and halving leaves the transshipped count.
// Origin loads at p carry o == p and are already outside the sum.
inline double transshipped_teu_at_port(const FlowAssignment& flow,
                                       const Instance& inst, int p) {
    double handled = 0;
    for (int r = 0; r < inst.num_routes(); ++r) {
        const Route& route = inst.routes[r];
        for (int i = 0; i < route.num_calls(); ++i) {
            if (route.port_calls[i] != p) continue;
            for (int o = 0; o < inst.num_ports(); ++o) {
                if (o == p) continue;
                handled += flow.zl(r, i, o) + flow.zd(r, i, o);
            }
        }
    }
    double inbound = 0;
    for (int o = 0; o < inst.num_ports(); ++o) inbound += inst.demand(o, p);
    return std::max(0.0, 0.5 * (handled - inbound));
}

}  // namespace linermoo
