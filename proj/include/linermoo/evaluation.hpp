#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "linermoo/routing.hpp"

namespace linermoo {

// Continuous residuals at or below this magnitude count as feasible;
// integer-valued quantities are exact.
inline constexpr double kFeasTol = 1e-6;

inline constexpr double kHoursPerWeek = 168.0;
inline constexpr double kStartWindowH = 144.0;  // first-call arrival window
inline constexpr double kThetaMaxH = 144.0;     // transshipment lag bound

// Daily bunker burn from the admiralty-type law:
//   k_v * u^3 * (empty_weight + payload_tons)^(2/3)
inline double fuel_tons_per_day(const VesselClass& v, double u_kn,
                                double payload_teu, const CostRates& rates) {
    const double displacement =
        v.empty_weight_t + payload_teu * rates.teu_weight_t;
    return v.fuel_coeff_k * (u_kn * u_kn * u_kn) *
           std::pow(displacement, 2.0 / 3.0);
}

// Maximum violation magnitude per constraint family, plus the scalar used
// for constrained dominance. total_violation accumulates every individual
// residual above the feasibility tolerance, so it is zero iff feasible.
struct ConstraintReport {
    double capacity = 0;           // vessel capacity per leg
    double weekly = 0;             // weekly-frequency fleet sizing
    double theta_link = 0;         // transshipment lag window [0, 144]
    double gamma_bounds = 0;       // week-wrap integer bounds
    double speed_bounds = 0;
    double start_bounds = 0;
    double fleet_bounds = 0;
    double demand_balance = 0;     // delivery equals demand
    double flow_conservation = 0;  // per-call flow balance
    double no_return = 0;          // flow must not ride back into its origin
    double no_origin_discharge = 0;
    double negativity = 0;         // z/f nonnegativity
    double total_violation = 0;

    bool feasible() const { return total_violation == 0; }
};

struct CostBreakdown {
    double operating = 0;        // vessel running + route fixed cost
    double berth = 0;            // berth occupancy while handling
    double trans_handling = 0;   // transshipped container lifts
    double trans_holding = 0;    // storage while waiting for the next vessel
    double load_unload = 0;      // origin loads + destination discharges
    double fuel = 0;             // bunker burned at sea
    double emission_sea = 0;     // CO2 priced at sea
    double emission_port = 0;    // CO2 priced for port handling

    std::array<std::pair<const char*, double>, 8> items() const {
        return {{{"operating", operating},
                 {"berth", berth},
                 {"transshipment_handling", trans_handling},
                 {"transshipment_holding", trans_holding},
                 {"load_unload", load_unload},
                 {"fuel", fuel},
                 {"co2_sea", emission_sea},
                 {"co2_port", emission_port}}};
    }

    double total() const {
        return operating + berth + trans_handling + trans_holding +
               load_unload + fuel + emission_sea + emission_port;
    }
};

// Fully decoded decision variables with attached objectives and residuals.
struct Solution {
    std::vector<int> vessel_class;             // chosen class index per route
    std::vector<int> n_r;                      // vessels deployed per route
    std::vector<std::vector<double>> speeds_kn;  // per route, per leg
    std::vector<std::vector<double>> arrival_h;  // per route, calls + 1 (wrap)
    std::vector<double> theta_h;               // per transshipment quad
    std::vector<double> gamma;                 // per quad, integral values
    FlowAssignment flow;
    CostBreakdown breakdown;
    double f1_usd = 0;
    double f2_hours = 0;
    ConstraintReport residuals;

    double roundtrip_h(int r) const {
        return arrival_h[r].back() - arrival_h[r].front();
    }
};

struct Schedule {
    std::vector<std::vector<double>> arrival_h;  // per route, calls + 1
    std::vector<double> roundtrip_h;
    std::vector<double> theta_h;  // per quad, in [0, 168)
    std::vector<double> gamma;    // per quad
};

// Arrival-time recursion: each call adds its handling time (plus the
// optional fixed port time) and the leg sailing time. Transshipment lags
// take the unique week-wrap integer that lands theta in [0, 168); a lag
// above 144 is left for the constraint report rather than wrapped again.
inline Schedule propagate_schedule(const Instance& inst,
                                   const std::vector<TransshipmentQuad>& quads,
                                   const std::vector<int>& vessel_class,
                                   const std::vector<std::vector<double>>& speeds,
                                   const FlowAssignment& flow,
                                   const std::vector<double>& start_offsets) {
    Schedule sched;
    sched.arrival_h.resize(inst.num_routes());
    sched.roundtrip_h.resize(inst.num_routes());
    for (int r = 0; r < inst.num_routes(); ++r) {
        const Route& route = inst.routes[r];
        const VesselClass& v = inst.vessels[vessel_class[r]];
        auto& t = sched.arrival_h[r];
        t.resize(route.num_calls() + 1);
        t[0] = start_offsets[r];
        for (int i = 0; i < route.num_calls(); ++i) {
            const double handling =
                v.handling_time_h_per_teu * flow.handled(r, i) +
                inst.fixed_port_hours;
            t[i + 1] = t[i] + handling + route.leg_lengths_nm[i] / speeds[r][i];
        }
        sched.roundtrip_h[r] = t.back() - t.front();
    }
    sched.theta_h.resize(quads.size());
    sched.gamma.resize(quads.size());
    for (std::size_t q = 0; q < quads.size(); ++q) {
        const TransshipmentQuad& quad = quads[q];
        const double diff = sched.arrival_h[quad.r_prime][quad.i_prime] -
                            sched.arrival_h[quad.r][quad.i];
        const double g = -std::floor(diff / kHoursPerWeek);
        sched.gamma[q] = g;
        sched.theta_h[q] = diff + kHoursPerWeek * g;
    }
    return sched;
}

// Weekly cost objective, eight terms. The transshipment expressions reuse
// transshipped_teu_at_port, and the sea-emission term shares the fuel-ton
// base with the fuel term so their ratio is exactly c_emis*e_sea/c_fuel.
inline CostBreakdown objective_cost(const Instance& inst,
                                    const std::vector<TransshipmentQuad>& quads,
                                    const Solution& sol) {
    CostBreakdown b;
    const CostRates& rates = inst.rates;

    std::vector<double> transshipped(inst.num_ports(), 0.0);
    for (int p = 0; p < inst.num_ports(); ++p)
        transshipped[p] = transshipped_teu_at_port(sol.flow, inst, p);

    double handled_total = 0;
    double sea_fuel_tons = 0;
    for (int r = 0; r < inst.num_routes(); ++r) {
        const Route& route = inst.routes[r];
        const VesselClass& v = inst.vessels[sol.vessel_class[r]];
        b.operating += sol.n_r[r] * v.c_opr + v.c_fix[r];
        for (int i = 0; i < route.num_calls(); ++i) {
            const double handled = sol.flow.handled(r, i);
            handled_total += handled;
            b.berth += v.c_berth * v.handling_time_h_per_teu * handled;
            const double u = sol.speeds_kn[r][i];
            sea_fuel_tons +=
                route.leg_lengths_nm[i] / (24.0 * u) *
                fuel_tons_per_day(v, u, sol.flow.leg_flow(r, i), rates);
        }
    }
    for (int p = 0; p < inst.num_ports(); ++p)
        b.trans_handling += rates.c_trans * transshipped[p];
    for (std::size_t q = 0; q < quads.size(); ++q)
        b.trans_holding +=
            rates.c_hold * sol.theta_h[q] * transshipped[quads[q].port];
    for (int o = 0; o < inst.num_ports(); ++o)
        for (int d = 0; d < inst.num_ports(); ++d)
            b.load_unload += (rates.c_load + rates.c_disc) * inst.demand(o, d);
    b.fuel = rates.c_fuel * sea_fuel_tons;
    b.emission_sea = rates.c_emis * rates.e_sea * sea_fuel_tons;
    b.emission_port = rates.c_emis * rates.e_port * handled_total;
    return b;
}

// Total round-trip time objective: sailing plus handling on every leg.
// Independent of the optional fixed port time, which only shifts schedules.
inline double objective_time(const Instance& inst, const Solution& sol) {
    double f2 = 0;
    for (int r = 0; r < inst.num_routes(); ++r) {
        const Route& route = inst.routes[r];
        const VesselClass& v = inst.vessels[sol.vessel_class[r]];
        for (int i = 0; i < route.num_calls(); ++i)
            f2 += route.leg_lengths_nm[i] / sol.speeds_kn[r][i] +
                  v.handling_time_h_per_teu * sol.flow.handled(r, i);
    }
    return f2;
}

namespace detail {
struct ViolationAccumulator {
    double total = 0;
    void add(double& family_max, double residual) {
        if (residual > family_max) family_max = residual;
        if (residual > kFeasTol) total += residual;
    }
};
}  // namespace detail

inline ConstraintReport constraint_report(
    const Instance& inst, const std::vector<TransshipmentQuad>& quads,
    const Solution& sol) {
    ConstraintReport rep;
    detail::ViolationAccumulator acc;

    for (int r = 0; r < inst.num_routes(); ++r) {
        const Route& route = inst.routes[r];
        const double cap = inst.vessels[sol.vessel_class[r]].capacity_teu;
        for (int i = 0; i < route.num_legs(); ++i)
            acc.add(rep.capacity, sol.flow.leg_flow(r, i) - cap);
        acc.add(rep.weekly, sol.roundtrip_h(r) - kHoursPerWeek * sol.n_r[r]);
        acc.add(rep.fleet_bounds, route.n_min - sol.n_r[r]);
        acc.add(rep.fleet_bounds, sol.n_r[r] - route.n_max);
        acc.add(rep.start_bounds, sol.arrival_h[r][0] - kStartWindowH);
        acc.add(rep.start_bounds, -sol.arrival_h[r][0]);
        for (int i = 0; i < route.num_legs(); ++i) {
            acc.add(rep.speed_bounds, sol.speeds_kn[r][i] - inst.speed_max_kn);
            acc.add(rep.speed_bounds, inst.speed_min_kn - sol.speeds_kn[r][i]);
        }
    }

    for (std::size_t q = 0; q < quads.size(); ++q) {
        acc.add(rep.theta_link, sol.theta_h[q] - kThetaMaxH);
        acc.add(rep.theta_link, -sol.theta_h[q]);
        acc.add(rep.gamma_bounds, sol.gamma[q] - sol.n_r[quads[q].r]);
        acc.add(rep.gamma_bounds, -sol.n_r[quads[q].r_prime] - sol.gamma[q]);
    }

    // delivery balance, per destination and origin
    for (int d = 0; d < inst.num_ports(); ++d) {
        std::vector<double> delivered(inst.num_ports(), 0.0);
        for (int r = 0; r < inst.num_routes(); ++r) {
            const Route& route = inst.routes[r];
            for (int i = 0; i < route.num_calls(); ++i) {
                if (route.port_calls[i] != d) continue;
                for (int o = 0; o < inst.num_ports(); ++o)
                    delivered[o] += sol.flow.zd(r, i, o) - sol.flow.zl(r, i, o);
            }
        }
        for (int o = 0; o < inst.num_ports(); ++o) {
            if (o == d) continue;
            acc.add(rep.demand_balance,
                    std::abs(delivered[o] - inst.demand(o, d)));
        }
    }

    for (int r = 0; r < inst.num_routes(); ++r) {
        const Route& route = inst.routes[r];
        const int n = route.num_calls();
        for (int i = 0; i < n; ++i) {
            for (int o = 0; o < inst.num_ports(); ++o) {
                const double balance =
                    sol.flow.fl(r, (i + n - 1) % n, o) + sol.flow.zl(r, i, o) -
                    sol.flow.fl(r, i, o) - sol.flow.zd(r, i, o);
                acc.add(rep.flow_conservation, std::abs(balance));
                acc.add(rep.negativity, -sol.flow.fl(r, i, o));
                acc.add(rep.negativity, -sol.flow.zl(r, i, o));
                acc.add(rep.negativity, -sol.flow.zd(r, i, o));
            }
            acc.add(rep.no_return, sol.flow.fl(r, i, route.port_calls[(i + 1) % n]));
            acc.add(rep.no_origin_discharge, sol.flow.zd(r, i, route.port_calls[i]));
        }
    }

    rep.total_violation = acc.total;
    return rep;
}

// Fills objectives and residuals of a solution whose decision variables are
// already set.
inline void evaluate_solution(const Instance& inst,
                              const std::vector<TransshipmentQuad>& quads,
                              Solution& sol) {
    sol.breakdown = objective_cost(inst, quads, sol);
    sol.f1_usd = sol.breakdown.total();
    sol.f2_hours = objective_time(inst, sol);
    sol.residuals = constraint_report(inst, quads, sol);
}

}  // namespace linermoo
