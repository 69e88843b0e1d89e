#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "linermoo/evaluation.hpp"
#include "linermoo/rng.hpp"

namespace linermoo {

// Flat gene vector layout:
//   [ per-leg speeds | per-route class choice | per-route start offset |
//     per-OD path weights ]
// Class-choice genes are integers stored as doubles; everything else is
// continuous inside its box.
struct GeneLayout {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<bool> is_integer;
    std::vector<int> speed_start;  // per route, index of its first speed gene
    int class_start = 0;
    int offset_start = 0;
    struct WeightGroup {
        int start = 0;
        int count = 0;
    };
    std::vector<WeightGroup> weight_groups;  // aligned with Problem::od_paths

    int size() const { return static_cast<int>(lower.size()); }
};

// Everything needed to decode and evaluate genotypes against one instance:
// the derived transshipment quadruples, the candidate-path table for every
// demanded OD pair and the gene layout. Immutable once built; safe to share
// across threads.
struct Problem {
    Instance inst;
    std::vector<TransshipmentQuad> quads;
    std::vector<OdPaths> od_paths;  // demanded pairs, ordered by (o, d)
    GeneLayout layout;
    int max_transshipments = kDefaultMaxTransshipments;

    static Problem build(Instance instance,
                         int max_transshipments = kDefaultMaxTransshipments) {
        Problem prob;
        prob.inst = std::move(instance);
        prob.max_transshipments = max_transshipments;
        validate_structure(prob.inst);
        prob.quads = derive_transshipments(prob.inst);
        for (int o = 0; o < prob.inst.num_ports(); ++o) {
            for (int d = 0; d < prob.inst.num_ports(); ++d) {
                if (prob.inst.demand(o, d) <= 0) continue;
                OdPaths od;
                od.origin = o;
                od.destination = d;
                od.paths = enumerate_paths(prob.inst, o, d, max_transshipments);
                if (od.paths.empty())
                    detail::fail("disconnected demand pair " +
                                 prob.inst.ports[o].id + " -> " +
                                 prob.inst.ports[d].id);
                prob.od_paths.push_back(std::move(od));
            }
        }
        GeneLayout& lay = prob.layout;
        auto push = [&lay](double lo, double hi, bool integer) {
            lay.lower.push_back(lo);
            lay.upper.push_back(hi);
            lay.is_integer.push_back(integer);
        };
        for (const Route& r : prob.inst.routes) {
            lay.speed_start.push_back(lay.size());
            for (int i = 0; i < r.num_legs(); ++i)
                push(prob.inst.speed_min_kn, prob.inst.speed_max_kn, false);
        }
        lay.class_start = lay.size();
        for (int r = 0; r < prob.inst.num_routes(); ++r)
            push(0, prob.inst.num_vessels() - 1, true);
        lay.offset_start = lay.size();
        for (int r = 0; r < prob.inst.num_routes(); ++r)
            push(0, kStartWindowH, false);
        for (const OdPaths& od : prob.od_paths) {
            lay.weight_groups.push_back(
                {lay.size(), static_cast<int>(od.paths.size())});
            for (std::size_t k = 0; k < od.paths.size(); ++k) push(0, 1, false);
        }
        return prob;
    }
};

struct Genotype {
    std::vector<double> genes;

    double speed(const Problem& p, int r, int leg) const {
        return genes[p.layout.speed_start[r] + leg];
    }
    int class_choice(const Problem& p, int r) const {
        return static_cast<int>(std::llround(genes[p.layout.class_start + r]));
    }
    double start_offset(const Problem& p, int r) const {
        return genes[p.layout.offset_start + r];
    }
};

// Uniform sample inside every box; integer genes take uniform integer
// values. Deterministic for a given stream state.
inline Genotype random_genotype(const Problem& prob, Rng& rng) {
    Genotype g;
    g.genes.resize(prob.layout.size());
    for (int j = 0; j < prob.layout.size(); ++j) {
        if (prob.layout.is_integer[j])
            g.genes[j] = static_cast<double>(rng.uniform_int(
                static_cast<std::int64_t>(prob.layout.lower[j]),
                static_cast<std::int64_t>(prob.layout.upper[j])));
        else
            g.genes[j] = rng.uniform(prob.layout.lower[j], prob.layout.upper[j]);
    }
    return g;
}

inline Genotype random_genotype(const Problem& prob, std::uint64_t seed) {
    Rng rng = sub_stream(seed, "genotype/init");
    return random_genotype(prob, rng);
}

// Clamps every gene to its box (rounding integer genes first) and resets
// all-zero weight groups of demanded ODs to a uniform 0.5. Idempotent.
inline Genotype repair(const Problem& prob, Genotype g) {
    const GeneLayout& lay = prob.layout;
    for (int j = 0; j < lay.size(); ++j) {
        double v = g.genes[j];
        if (lay.is_integer[j]) v = static_cast<double>(std::llround(v));
        if (v < lay.lower[j]) v = lay.lower[j];
        if (v > lay.upper[j]) v = lay.upper[j];
        g.genes[j] = v;
    }
    for (const GeneLayout::WeightGroup& grp : lay.weight_groups) {
        bool all_zero = true;
        for (int k = 0; k < grp.count; ++k)
            if (g.genes[grp.start + k] != 0) {
                all_zero = false;
                break;
            }
        if (all_zero)
            for (int k = 0; k < grp.count; ++k) g.genes[grp.start + k] = 0.5;
    }
    return g;
}

namespace detail {
// Path quantities are snapped to multiples of 2^-26 TEU (the final path of a
// group absorbs the remainder) so that every flow accumulation is an exact
// floating-point sum and the constructed conservation identities hold
// bit-exactly.
inline constexpr double kTeuQuantum = 67108864.0;  // 2^26

inline std::vector<double> split_demand(double demand,
                                        const double* weights, int count) {
    std::vector<double> q(count, 0.0);
    if (count == 1) {
        q[0] = demand;
        return q;
    }
    double wsum = 0;
    for (int k = 0; k < count; ++k) wsum += weights[k];
    double assigned = 0;
    for (int k = 0; k + 1 < count; ++k) {
        const double share = wsum > 0 ? demand * (weights[k] / wsum)
                                      : demand / count;
        q[k] = std::floor(share * kTeuQuantum) / kTeuQuantum;
        assigned += q[k];
    }
    q[count - 1] = demand - assigned;
    return q;
}
}  // namespace detail

// Decodes a genotype into a full solution: path weights become flows, the
// schedule is propagated, and the fleet size per route is the smallest count
// sustaining the weekly pattern (clamped into the route's bounds).
inline Solution decode(const Problem& prob, const Genotype& g) {
    const Instance& inst = prob.inst;
    Solution sol;
    sol.vessel_class.resize(inst.num_routes());
    sol.speeds_kn.resize(inst.num_routes());
    for (int r = 0; r < inst.num_routes(); ++r) {
        int v = g.class_choice(prob, r);
        if (v < 0) v = 0;
        if (v >= inst.num_vessels()) v = inst.num_vessels() - 1;
        sol.vessel_class[r] = v;
        const Route& route = inst.routes[r];
        sol.speeds_kn[r].resize(route.num_legs());
        for (int i = 0; i < route.num_legs(); ++i)
            sol.speeds_kn[r][i] = g.speed(prob, r, i);
    }

    std::vector<std::vector<double>> quantities(prob.od_paths.size());
    for (std::size_t k = 0; k < prob.od_paths.size(); ++k) {
        const OdPaths& od = prob.od_paths[k];
        const GeneLayout::WeightGroup& grp = prob.layout.weight_groups[k];
        quantities[k] = detail::split_demand(
            inst.demand(od.origin, od.destination), &g.genes[grp.start],
            grp.count);
    }
    sol.flow = flows_from_paths(inst, prob.od_paths, quantities);

    std::vector<double> offsets(inst.num_routes());
    for (int r = 0; r < inst.num_routes(); ++r)
        offsets[r] = g.start_offset(prob, r);
    Schedule sched = propagate_schedule(inst, prob.quads, sol.vessel_class,
                                        sol.speeds_kn, sol.flow, offsets);
    sol.arrival_h = std::move(sched.arrival_h);
    sol.theta_h = std::move(sched.theta_h);
    sol.gamma = std::move(sched.gamma);

    sol.n_r.resize(inst.num_routes());
    for (int r = 0; r < inst.num_routes(); ++r) {
        const Route& route = inst.routes[r];
        int n = static_cast<int>(
            std::ceil((sched.roundtrip_h[r] - 1e-9) / kHoursPerWeek));
        if (n < route.n_min) n = route.n_min;
        if (n > route.n_max) n = route.n_max;
        sol.n_r[r] = n;
    }

    evaluate_solution(inst, prob.quads, sol);
    return sol;
}

}  // namespace linermoo
