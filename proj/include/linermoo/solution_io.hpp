#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "linermoo/instance_io.hpp"
#include "linermoo/population.hpp"

namespace linermoo {

inline ordered_json genotype_to_json(const Problem& prob, const Genotype& g) {
    ordered_json j;
    j["speeds"] = ordered_json::array();
    for (int r = 0; r < prob.inst.num_routes(); ++r) {
        ordered_json row = ordered_json::array();
        for (int i = 0; i < prob.inst.routes[r].num_legs(); ++i)
            row.push_back(g.speed(prob, r, i));
        j["speeds"].push_back(std::move(row));
    }
    j["class_choice"] = ordered_json::array();
    for (int r = 0; r < prob.inst.num_routes(); ++r)
        j["class_choice"].push_back(g.class_choice(prob, r));
    j["start_offsets"] = ordered_json::array();
    for (int r = 0; r < prob.inst.num_routes(); ++r)
        j["start_offsets"].push_back(g.start_offset(prob, r));
    j["path_weights"] = ordered_json::array();
    for (const GeneLayout::WeightGroup& grp : prob.layout.weight_groups) {
        ordered_json row = ordered_json::array();
        for (int k = 0; k < grp.count; ++k)
            row.push_back(g.genes[grp.start + k]);
        j["path_weights"].push_back(std::move(row));
    }
    return j;
}

// Reads the structured genotype schema produced by genotype_to_json.
// Weight groups follow the problem's demanded-OD order (ascending o, d).
inline Genotype genotype_from_json(const Problem& prob, const ordered_json& j) {
    Genotype g;
    g.genes.assign(prob.layout.size(), 0.0);
    const auto& speeds = j.at("speeds");
    if (speeds.size() != static_cast<std::size_t>(prob.inst.num_routes()))
        detail::fail("genotype speeds: route count mismatch");
    for (int r = 0; r < prob.inst.num_routes(); ++r) {
        const auto& row = speeds.at(r);
        if (row.size() !=
            static_cast<std::size_t>(prob.inst.routes[r].num_legs()))
            detail::fail("genotype speeds: leg count mismatch");
        for (int i = 0; i < prob.inst.routes[r].num_legs(); ++i)
            g.genes[prob.layout.speed_start[r] + i] = row.at(i).get<double>();
    }
    const auto& classes = j.at("class_choice");
    const auto& offsets = j.at("start_offsets");
    for (int r = 0; r < prob.inst.num_routes(); ++r) {
        g.genes[prob.layout.class_start + r] = classes.at(r).get<double>();
        g.genes[prob.layout.offset_start + r] = offsets.at(r).get<double>();
    }
    const auto& weights = j.at("path_weights");
    if (weights.size() != prob.layout.weight_groups.size())
        detail::fail("genotype path_weights: OD group count mismatch");
    for (std::size_t k = 0; k < prob.layout.weight_groups.size(); ++k) {
        const GeneLayout::WeightGroup& grp = prob.layout.weight_groups[k];
        const auto& row = weights.at(k);
        if (row.size() != static_cast<std::size_t>(grp.count))
            detail::fail("genotype path_weights: path count mismatch");
        for (int i = 0; i < grp.count; ++i)
            g.genes[grp.start + i] = row.at(i).get<double>();
    }
    return g;
}

namespace detail {
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace detail

// Feasible mutually nondominated members sorted by objectives, exact
// objective duplicates collapsed.
inline std::vector<Member> front_members(const RankedPopulation& pop) {
    std::vector<Member> out;
    for (int i : feasible_front1(pop)) out.push_back(pop.members[i]);
    std::sort(out.begin(), out.end(), [](const Member& a, const Member& b) {
        if (a.solution.f1_usd != b.solution.f1_usd)
            return a.solution.f1_usd < b.solution.f1_usd;
        return a.solution.f2_hours < b.solution.f2_hours;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Member& a, const Member& b) {
                              return a.solution.f1_usd == b.solution.f1_usd &&
                                     a.solution.f2_hours == b.solution.f2_hours;
                          }),
              out.end());
    return out;
}

inline void write_front_csv(std::ostream& os, const Instance& inst,
                            const std::vector<Member>& front) {
    os << "solution_id,F1_usd,F2_hours,feasible,vessel_classes,n_vessels,"
          "mean_speed_kn\n";
    for (std::size_t id = 0; id < front.size(); ++id) {
        const Solution& s = front[id].solution;
        std::string classes, fleets, speeds;
        for (int r = 0; r < inst.num_routes(); ++r) {
            if (r) {
                classes += '|';
                fleets += '|';
                speeds += '|';
            }
            classes += std::to_string(inst.vessels[s.vessel_class[r]].id);
            fleets += std::to_string(s.n_r[r]);
            double mean = 0;
            for (double u : s.speeds_kn[r]) mean += u;
            mean /= static_cast<double>(s.speeds_kn[r].size());
            speeds += detail::g17(mean);
        }
        os << id << ',' << detail::g17(s.f1_usd) << ','
           << detail::g17(s.f2_hours) << ','
           << (s.residuals.feasible() ? 1 : 0) << ',' << classes << ','
           << fleets << ',' << speeds << "\n";
    }
}

inline void write_front_json(std::ostream& os, const Problem& prob,
                             const std::vector<Member>& front) {
    ordered_json j;
    j["solutions"] = ordered_json::array();
    for (std::size_t id = 0; id < front.size(); ++id) {
        ordered_json s;
        s["id"] = id;
        s["f1_usd"] = front[id].solution.f1_usd;
        s["f2_hours"] = front[id].solution.f2_hours;
        s["genotype"] = genotype_to_json(prob, front[id].genotype);
        j["solutions"].push_back(std::move(s));
    }
    os << j.dump(2) << "\n";
}

}  // namespace linermoo
