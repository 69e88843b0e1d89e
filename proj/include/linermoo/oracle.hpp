#pragma once

#include <cstdint>
#include <stdexcept>

#include "linermoo/population.hpp"

namespace linermoo {

class OracleGuardError : public std::runtime_error {
public:
    explicit OracleGuardError(const std::string& what)
        : std::runtime_error(what) {}
};

struct OracleParams {
    double speed_step = 2.0;       // knots between speed levels
    int weight_levels = 3;         // grid points on [0, 1] per path weight
    int offset_levels = 7;         // grid points on the start window
    std::uint64_t guard = 10'000'000;  // refuse larger enumerations
};

struct OracleResult {
    std::vector<Member> front;  // feasible, mutually nondominated, sorted
    std::uint64_t enumerated = 0;
};

// Exhaustive grid enumeration of the encoded search space: every vessel
// class per route, gridded per-leg speeds, gridded start offsets (a single
// level when the network has no transshipment) and gridded path weights.
// Returns the exact feasible Pareto front of the grid. Ground truth for the
// metaheuristics on toy instances.
inline OracleResult oracle_front(const Problem& prob,
                                 const OracleParams& params = {}) {
    if (params.speed_step <= 0)
        throw std::invalid_argument("speed_step must be positive");
    if (params.weight_levels < 2 || params.offset_levels < 1)
        throw std::invalid_argument("grid levels out of range");
    const Instance& inst = prob.inst;
    const GeneLayout& lay = prob.layout;
    const int m = lay.size();

    std::vector<double> speed_grid;
    for (double u = inst.speed_min_kn; u <= inst.speed_max_kn + 1e-9;
         u += params.speed_step)
        speed_grid.push_back(std::min(u, inst.speed_max_kn));

    std::vector<double> offset_grid;
    if (prob.quads.empty() || params.offset_levels == 1) {
        offset_grid.push_back(0.0);
    } else {
        for (int k = 0; k < params.offset_levels; ++k)
            offset_grid.push_back(kStartWindowH * k /
                                  (params.offset_levels - 1));
    }

    std::vector<double> weight_grid;
    for (int k = 0; k < params.weight_levels; ++k)
        weight_grid.push_back(static_cast<double>(k) /
                              (params.weight_levels - 1));

    std::vector<std::vector<double>> values(m);
    for (int r = 0; r < inst.num_routes(); ++r)
        for (int i = 0; i < inst.routes[r].num_legs(); ++i)
            values[lay.speed_start[r] + i] = speed_grid;
    for (int r = 0; r < inst.num_routes(); ++r) {
        std::vector<double> classes;
        for (int v = 0; v < inst.num_vessels(); ++v)
            classes.push_back(static_cast<double>(v));
        values[lay.class_start + r] = classes;
        values[lay.offset_start + r] = offset_grid;
    }
    for (const GeneLayout::WeightGroup& grp : lay.weight_groups) {
        for (int k = 0; k < grp.count; ++k)
            values[grp.start + k] =
                grp.count == 1 ? std::vector<double>{1.0} : weight_grid;
    }

    long double combos = 1;
    for (int j = 0; j < m; ++j) {
        combos *= static_cast<long double>(values[j].size());
        if (combos > static_cast<long double>(params.guard))
            throw OracleGuardError(
                "oracle refused: grid enumeration exceeds the guard limit");
    }

    OracleResult result;
    std::vector<Member> archive;
    std::vector<std::size_t> idx(m, 0);
    Genotype g;
    g.genes.resize(m);
    while (true) {
        for (int j = 0; j < m; ++j) g.genes[j] = values[j][idx[j]];
        Genotype r = repair(prob, g);
        Solution sol = decode(prob, r);
        ++result.enumerated;
        if (sol.residuals.feasible()) {
            bool covered = false;
            for (const Member& a : archive) {
                if (a.solution.f1_usd <= sol.f1_usd &&
                    a.solution.f2_hours <= sol.f2_hours) {
                    covered = true;
                    break;
                }
            }
            if (!covered) {
                std::erase_if(archive, [&](const Member& a) {
                    return sol.f1_usd <= a.solution.f1_usd &&
                           sol.f2_hours <= a.solution.f2_hours;
                });
                archive.push_back({std::move(r), std::move(sol)});
            }
        }
        int j = 0;
        while (j < m && ++idx[j] == values[j].size()) idx[j++] = 0;
        if (j == m) break;
    }

    std::sort(archive.begin(), archive.end(), [](const Member& a,
                                                 const Member& b) {
        if (a.solution.f1_usd != b.solution.f1_usd)
            return a.solution.f1_usd < b.solution.f1_usd;
        return a.solution.f2_hours < b.solution.f2_hours;
    });
    result.front = std::move(archive);
    return result;
}

}  // namespace linermoo
