#pragma once

#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace linermoo {

struct Port {
    std::string id;
    int index = 0;  // dense, equals position in Instance::ports
};

// A cyclic port rotation. Leg i connects call i to call i+1, the last leg
// wraps back to call 0, so leg count == call count.
struct Route {
    int id = 0;
    std::vector<int> port_calls;         // port index per call
    std::vector<double> leg_lengths_nm;  // one per leg
    int n_min = 1;
    int n_max = 15;

    int num_calls() const { return static_cast<int>(port_calls.size()); }
    int num_legs() const { return static_cast<int>(leg_lengths_nm.size()); }
    double roundtrip_nm() const {
        double s = 0;
        for (double l : leg_lengths_nm) s += l;
        return s;
    }
};

struct VesselClass {
    int id = 0;
    double capacity_teu = 0;
    double c_opr = 0;    // USD/week
    double c_berth = 0;  // USD/hour
    std::vector<double> c_fix;  // USD/week, aligned with Instance::routes
    double handling_time_h_per_teu = 0;  // port-independent
    double empty_weight_t = 0;           // lightweight + constant deadweight
    double fuel_coeff_k = 7.0e-6;        // admiralty coefficient
};

struct CostRates {
    double c_load = 0;   // USD/TEU
    double c_disc = 0;   // USD/TEU
    double c_trans = 0;  // USD/TEU
    double c_hold = 0;   // USD/TEU/hour
    double c_fuel = 0;   // USD/ton
    double c_emis = 0;   // USD/ton CO2
    double e_sea = 0;    // tons CO2 per ton fuel
    double e_port = 0;   // tons CO2 per TEU handled
    double teu_weight_t = 10;  // payload tons per loaded TEU
};

// Directed pair of calls at the same physical port on (route, call) and
// (route', call'). Containers can change vessels there.
struct TransshipmentQuad {
    int r = 0;
    int i = 0;
    int r_prime = 0;
    int i_prime = 0;
    int port = 0;
};

struct Instance {
    std::vector<Port> ports;
    std::vector<Route> routes;
    std::vector<VesselClass> vessels;
    std::vector<std::vector<double>> demand_teu_per_week;  // dense |P| x |P|
    CostRates rates;
    double speed_min_kn = 14;
    double speed_max_kn = 24;
    double fixed_port_hours = 0;  // optional extra time per port call

    int num_ports() const { return static_cast<int>(ports.size()); }
    int num_routes() const { return static_cast<int>(routes.size()); }
    int num_vessels() const { return static_cast<int>(vessels.size()); }

    double demand(int o, int d) const { return demand_teu_per_week[o][d]; }

    double total_demand() const {
        double s = 0;
        for (const auto& row : demand_teu_per_week)
            for (double v : row) s += v;
        return s;
    }
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what)
        : std::runtime_error(what) {}
};

namespace detail {
inline void fail(const std::string& msg) { throw ValidationError(msg); }
}  // namespace detail

// Checks every structural invariant of the data model and throws a
// ValidationError naming the first violated one. Connectivity of demanded
// OD pairs is checked separately (routing.hpp) since it needs the path
// enumerator.
inline void validate_structure(const Instance& inst) {
    using detail::fail;
    if (inst.ports.empty()) fail("no ports");
    {
        std::unordered_set<std::string> seen;
        for (int i = 0; i < inst.num_ports(); ++i) {
            const Port& p = inst.ports[i];
            if (p.index != i) fail("non-contiguous port index: " + p.id);
            if (!seen.insert(p.id).second) fail("duplicate port id: " + p.id);
        }
    }
    if (inst.routes.empty()) fail("no routes");
    {
        std::unordered_set<int> ids;
        for (const Route& r : inst.routes) {
            if (!ids.insert(r.id).second)
                fail("duplicate route id: " + std::to_string(r.id));
            if (r.num_calls() < 2)
                fail("route " + std::to_string(r.id) + " has fewer than 2 calls");
            if (r.num_legs() != r.num_calls())
                fail("route " + std::to_string(r.id) +
                     " leg count differs from call count");
            std::unordered_set<int> call_ports;
            for (int p : r.port_calls) {
                if (p < 0 || p >= inst.num_ports())
                    fail("route " + std::to_string(r.id) + " references bad port");
                if (!call_ports.insert(p).second)
                    fail("route " + std::to_string(r.id) +
                         " repeats port " + inst.ports[p].id + " in one rotation");
            }
            for (double l : r.leg_lengths_nm)
                if (!(l > 0))
                    fail("nonpositive leg on route " + std::to_string(r.id));
            if (r.n_min < 1 || r.n_min > r.n_max)
                fail("route " + std::to_string(r.id) + " vessel-count bounds");
        }
    }
    if (inst.vessels.empty()) fail("no vessel classes");
    {
        std::unordered_set<int> ids;
        for (const VesselClass& v : inst.vessels) {
            if (!ids.insert(v.id).second)
                fail("duplicate vessel id: " + std::to_string(v.id));
            if (!(v.capacity_teu > 0))
                fail("vessel " + std::to_string(v.id) + " capacity");
            if (v.c_opr < 0 || v.c_berth < 0 || v.handling_time_h_per_teu < 0)
                fail("vessel " + std::to_string(v.id) + " negative rate");
            if (!(v.empty_weight_t > 0))
                fail("vessel " + std::to_string(v.id) + " empty weight");
            if (!(v.fuel_coeff_k > 0))
                fail("vessel " + std::to_string(v.id) + " fuel coefficient");
            if (static_cast<int>(v.c_fix.size()) != inst.num_routes())
                fail("vessel " + std::to_string(v.id) +
                     " c_fix size differs from route count");
            for (double c : v.c_fix)
                if (c < 0) fail("vessel " + std::to_string(v.id) + " negative c_fix");
        }
    }
    {
        const auto& d = inst.demand_teu_per_week;
        if (static_cast<int>(d.size()) != inst.num_ports())
            fail("demand matrix row count");
        for (int o = 0; o < inst.num_ports(); ++o) {
            if (static_cast<int>(d[o].size()) != inst.num_ports())
                fail("demand matrix column count");
            if (d[o][o] != 0)
                fail("self-demand at port " + inst.ports[o].id);
            for (double v : d[o])
                if (v < 0) fail("negative demand from port " + inst.ports[o].id);
        }
    }
    const CostRates& c = inst.rates;
    if (c.c_load < 0 || c.c_disc < 0 || c.c_trans < 0 || c.c_hold < 0 ||
        c.c_fuel < 0 || c.c_emis < 0 || c.e_sea < 0 || c.e_port < 0)
        fail("negative cost rate");
    if (!(c.teu_weight_t > 0)) fail("teu_weight_t must be positive");
    if (!(inst.speed_min_kn > 0) || inst.speed_min_kn > inst.speed_max_kn)
        fail("speed bounds");
    if (inst.fixed_port_hours < 0) fail("negative fixed_port_hours");
}

// All quadruples (r,i,r',i') with p_ri == p_r'i' and (r,i) != (r',i'),
// in lexicographic order. The set is symmetric: both directions appear.
inline std::vector<TransshipmentQuad> derive_transshipments(
    const Instance& inst) {
    std::vector<TransshipmentQuad> quads;
    const int nr = inst.num_routes();
    for (int r = 0; r < nr; ++r) {
        const Route& a = inst.routes[r];
        for (int i = 0; i < a.num_calls(); ++i) {
            for (int rp = 0; rp < nr; ++rp) {
                const Route& b = inst.routes[rp];
                for (int ip = 0; ip < b.num_calls(); ++ip) {
                    if (r == rp && i == ip) continue;
                    if (a.port_calls[i] != b.port_calls[ip]) continue;
                    quads.push_back({r, i, rp, ip, a.port_calls[i]});
                }
            }
        }
    }
    return quads;
}

}  // namespace linermoo
