#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "linermoo/instance.hpp"
#include "linermoo/rng.hpp"
#include "linermoo/routing.hpp"

namespace linermoo {

using ordered_json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Reference 6-route / 24-port network (ports of call with the length of the
// leg that departs from each call, nautical miles).
struct RefCall {
    const char* port;
    double leg_nm;
};

inline const std::vector<std::vector<RefCall>>& reference_routes() {
    static const std::vector<std::vector<RefCall>> routes = {
        {{"HoChiMinh", 589}, {"LaemChabang", 755}, {"Singapore", 187},
         {"PortKlang", 830}},
        {{"Brisbane", 419}, {"Sydney", 512}, {"Melbourne", 470},
         {"Adelaide", 1325}, {"Fremantle", 1733}, {"Jakarta", 483},
         {"Singapore", 3649}},
        {{"Yokohama", 15}, {"Tokyo", 177}, {"Nagoya", 201}, {"Kobe", 734},
         {"Shanghai", 745}, {"HongKong", 1568}},
        {{"Dalian", 187}, {"Xingang", 379}, {"Qingdao", 303}, {"Xiamen", 93},
         {"Ningbo", 93}, {"Shanghai", 383}, {"Kwangyang", 72}, {"Busan", 487}},
        {{"HoChiMinh", 589}, {"LaemChabang", 755}, {"Singapore", 187},
         {"PortKlang", 830}, {"Qingdao", 345}, {"Shanghai", 876}},
        {{"Brisbane", 419}, {"Sydney", 512}, {"Melbourne", 470},
         {"Adelaide", 1325}, {"Fremantle", 1733}, {"Jakarta", 483},
         {"Singapore", 3649}, {"Colombo", 1287}},
    };
    return routes;
}

struct RefVessel {
    int id;
    double capacity_teu;
    double c_opr;
    double c_berth;
    std::array<double, 6> c_fix;  // per reference route
    double handling_h_per_teu;
    double empty_weight_t;
};

inline const std::array<RefVessel, 5>& reference_vessels() {
    static const std::array<RefVessel, 5> vessels = {{
        {1, 2400, 37485, 500,
         {154791, 533980, 226198, 148807, 197892, 594070}, 0.025, 21832},
        {2, 4800, 51923, 1000,
         {191900, 689651, 280542, 187600, 235340, 730527}, 0.012, 36898},
        {3, 8400, 76923, 1666,
         {240500, 788300, 342760, 220850, 292760, 840582}, 0.011, 54753},
        {4, 11000, 115384, 3333,
         {256600, 854600, 384500, 259800, 304500, 929753}, 0.008, 66204},
        {5, 15000, 173076, 5000,
         {276100, 929100, 404000, 279700, 324000, 989650}, 0.007, 79612},
    }};
    return vessels;
}

inline CostRates reference_rates() {
    CostRates r;
    r.c_load = 150;
    r.c_disc = 150;
    r.c_trans = 150;
    r.c_hold = 1.25;
    r.c_fuel = 500;
    r.c_emis = 32;
    r.e_sea = 3.082;
    r.e_port = 0.01729;
    r.teu_weight_t = 10;
    return r;
}

inline int lookup_port(const Instance& inst, const ordered_json& j,
                       const char* ctx) {
    if (j.is_number_integer()) {
        const int idx = j.get<int>();
        if (idx < 0 || idx >= inst.num_ports())
            fail(std::string(ctx) + ": port index out of range");
        return idx;
    }
    if (j.is_string()) {
        const std::string id = j.get<std::string>();
        for (const Port& p : inst.ports)
            if (p.id == id) return p.index;
        fail(std::string(ctx) + ": unknown port id " + id);
    }
    fail(std::string(ctx) + ": expected port index or id");
    return -1;
}

}  // namespace detail

inline Instance instance_from_json(const ordered_json& j) {
    Instance inst;
    if (!j.contains("ports") || !j["ports"].is_array())
        detail::fail("missing ports array");
    int idx = 0;
    for (const auto& p : j["ports"])
        inst.ports.push_back({p.get<std::string>(), idx++});

    if (!j.contains("routes")) detail::fail("missing routes array");
    for (const auto& rj : j["routes"]) {
        Route r;
        r.id = rj.at("id").get<int>();
        for (const auto& c : rj.at("port_calls"))
            r.port_calls.push_back(detail::lookup_port(inst, c, "route call"));
        for (const auto& l : rj.at("leg_lengths_nm"))
            r.leg_lengths_nm.push_back(l.get<double>());
        r.n_min = rj.value("n_min", 1);
        r.n_max = rj.value("n_max", 15);
        inst.routes.push_back(std::move(r));
    }

    if (!j.contains("vessels")) detail::fail("missing vessels array");
    for (const auto& vj : j["vessels"]) {
        VesselClass v;
        v.id = vj.at("id").get<int>();
        v.capacity_teu = vj.at("capacity_teu").get<double>();
        v.c_opr = vj.at("c_opr").get<double>();
        v.c_berth = vj.at("c_berth").get<double>();
        for (const auto& c : vj.at("c_fix")) v.c_fix.push_back(c.get<double>());
        v.handling_time_h_per_teu = vj.at("handling_time_h_per_teu").get<double>();
        v.empty_weight_t = vj.at("empty_weight_t").get<double>();
        v.fuel_coeff_k = vj.value("fuel_coeff_k", 7.0e-6);
        inst.vessels.push_back(std::move(v));
    }

    inst.demand_teu_per_week.assign(
        inst.ports.size(), std::vector<double>(inst.ports.size(), 0.0));
    if (j.contains("demand")) {
        for (const auto& dj : j["demand"]) {
            const int o = detail::lookup_port(inst, dj.at("o"), "demand origin");
            const int d = detail::lookup_port(inst, dj.at("d"), "demand dest");
            inst.demand_teu_per_week[o][d] = dj.at("teu").get<double>();
        }
    }

    if (j.contains("rates")) {
        const auto& rj = j["rates"];
        CostRates& c = inst.rates;
        c.c_load = rj.value("c_load", 0.0);
        c.c_disc = rj.value("c_disc", 0.0);
        c.c_trans = rj.value("c_trans", 0.0);
        c.c_hold = rj.value("c_hold", 0.0);
        c.c_fuel = rj.value("c_fuel", 0.0);
        c.c_emis = rj.value("c_emis", 0.0);
        c.e_sea = rj.value("e_sea", 0.0);
        c.e_port = rj.value("e_port", 0.0);
        c.teu_weight_t = rj.value("teu_weight_t", 10.0);
    }
    inst.speed_min_kn = j.value("speed_min_kn", 14.0);
    inst.speed_max_kn = j.value("speed_max_kn", 24.0);
    inst.fixed_port_hours = j.value("fixed_port_hours", 0.0);
    return inst;
}

inline ordered_json instance_to_json(const Instance& inst) {
    ordered_json j;
    j["ports"] = ordered_json::array();
    for (const Port& p : inst.ports) j["ports"].push_back(p.id);
    j["routes"] = ordered_json::array();
    for (const Route& r : inst.routes) {
        ordered_json rj;
        rj["id"] = r.id;
        rj["port_calls"] = r.port_calls;
        rj["leg_lengths_nm"] = r.leg_lengths_nm;
        rj["n_min"] = r.n_min;
        rj["n_max"] = r.n_max;
        j["routes"].push_back(std::move(rj));
    }
    j["vessels"] = ordered_json::array();
    for (const VesselClass& v : inst.vessels) {
        ordered_json vj;
        vj["id"] = v.id;
        vj["capacity_teu"] = v.capacity_teu;
        vj["c_opr"] = v.c_opr;
        vj["c_berth"] = v.c_berth;
        vj["c_fix"] = v.c_fix;
        vj["handling_time_h_per_teu"] = v.handling_time_h_per_teu;
        vj["empty_weight_t"] = v.empty_weight_t;
        vj["fuel_coeff_k"] = v.fuel_coeff_k;
        j["vessels"].push_back(std::move(vj));
    }
    j["demand"] = ordered_json::array();
    for (int o = 0; o < inst.num_ports(); ++o) {
        for (int d = 0; d < inst.num_ports(); ++d) {
            if (inst.demand(o, d) <= 0) continue;
            ordered_json dj;
            dj["o"] = o;
            dj["d"] = d;
            dj["teu"] = inst.demand(o, d);
            j["demand"].push_back(std::move(dj));
        }
    }
    ordered_json rj;
    rj["c_load"] = inst.rates.c_load;
    rj["c_disc"] = inst.rates.c_disc;
    rj["c_trans"] = inst.rates.c_trans;
    rj["c_hold"] = inst.rates.c_hold;
    rj["c_fuel"] = inst.rates.c_fuel;
    rj["c_emis"] = inst.rates.c_emis;
    rj["e_sea"] = inst.rates.e_sea;
    rj["e_port"] = inst.rates.e_port;
    rj["teu_weight_t"] = inst.rates.teu_weight_t;
    j["rates"] = std::move(rj);
    j["speed_min_kn"] = inst.speed_min_kn;
    j["speed_max_kn"] = inst.speed_max_kn;
    if (inst.fixed_port_hours != 0)
        j["fixed_port_hours"] = inst.fixed_port_hours;
    return j;
}

// Loads, validates (structure + connectivity of demanded pairs) and returns
// an instance. Throws ParseError on malformed input and ValidationError
// naming the first violated invariant.
inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed instance file: ") + e.what());
    }
    Instance inst;
    try {
        inst = instance_from_json(j);
    } catch (const ValidationError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed instance file: ") + e.what());
    }
    validate_structure(inst);
    validate_connectivity(inst);
    return inst;
}

inline void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << instance_to_json(inst).dump(2) << "\n";
}

namespace detail {

inline int count_shared_calls(const std::vector<std::vector<RefCall>>& defs,
                              const std::vector<int>& subset) {
    int shared = 0;
    for (std::size_t a = 0; a < subset.size(); ++a) {
        for (std::size_t b = a + 1; b < subset.size(); ++b) {
            for (const RefCall& ca : defs[subset[a]])
                for (const RefCall& cb : defs[subset[b]])
                    if (std::string(ca.port) == cb.port) ++shared;
        }
    }
    return shared;
}

inline void subsets_of_size(int n, int k, std::vector<int>& cur,
                            std::vector<std::vector<int>>& out, int start) {
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (int i = start; i < n; ++i) {
        cur.push_back(i);
        subsets_of_size(n, k, cur, out, i + 1);
        cur.pop_back();
    }
}

}  // namespace detail

// Deterministic instance generator. Routes come from the reference network
// when a subset of its rotations covers exactly n_ports (preferring the
// subset with the most shared port calls); otherwise synthetic hub-and-spoke
// rotations are built. Demand is drawn uniformly in [0, demand_scale] for
// every connected OD pair.
inline Instance generate_instance(int n_ports, int n_routes, int n_vessels,
                                  std::uint64_t seed, double demand_scale) {
    if (n_ports < 2) throw std::invalid_argument("n_ports must be >= 2");
    if (n_routes < 1) throw std::invalid_argument("n_routes must be >= 1");
    if (n_vessels < 1 || n_vessels > 5)
        throw std::invalid_argument("n_vessels must be in [1, 5]");
    if (demand_scale < 0) throw std::invalid_argument("negative demand_scale");

    const auto& defs = detail::reference_routes();
    Instance inst;

    // try the reference network first
    std::vector<int> chosen;
    if (n_routes <= static_cast<int>(defs.size())) {
        std::vector<std::vector<int>> subsets;
        std::vector<int> cur;
        detail::subsets_of_size(static_cast<int>(defs.size()), n_routes, cur,
                                subsets, 0);
        int best_shared = -1;
        for (const auto& subset : subsets) {
            std::vector<std::string> names;
            for (int r : subset)
                for (const auto& call : defs[r])
                    if (std::find(names.begin(), names.end(), call.port) ==
                        names.end())
                        names.emplace_back(call.port);
            if (static_cast<int>(names.size()) != n_ports) continue;
            const int shared = detail::count_shared_calls(defs, subset);
            if (shared > best_shared) {
                best_shared = shared;
                chosen = subset;
            }
        }
    }

    if (!chosen.empty()) {
        std::vector<std::string> names;
        for (int r : chosen)
            for (const auto& call : defs[r])
                if (std::find(names.begin(), names.end(), call.port) ==
                    names.end())
                    names.emplace_back(call.port);
        int idx = 0;
        for (const auto& name : names) inst.ports.push_back({name, idx++});
        auto port_index = [&](const char* name) {
            for (const Port& p : inst.ports)
                if (p.id == name) return p.index;
            return -1;
        };
        int rid = 1;
        for (int r : chosen) {
            Route route;
            route.id = rid++;
            for (const auto& call : defs[r]) {
                route.port_calls.push_back(port_index(call.port));
                route.leg_lengths_nm.push_back(call.leg_nm);
            }
            inst.routes.push_back(std::move(route));
        }
        for (int v = 0; v < n_vessels; ++v) {
            const auto& ref = detail::reference_vessels()[v];
            VesselClass vc;
            vc.id = ref.id;
            vc.capacity_teu = ref.capacity_teu;
            vc.c_opr = ref.c_opr;
            vc.c_berth = ref.c_berth;
            for (int r : chosen) vc.c_fix.push_back(ref.c_fix[r]);
            vc.handling_time_h_per_teu = ref.handling_h_per_teu;
            vc.empty_weight_t = ref.empty_weight_t;
            inst.vessels.push_back(std::move(vc));
        }
    } else {
        // synthetic hub-and-spoke rotations over generated ports
        if (n_routes >= 2 && n_ports < n_routes + 1)
            throw std::invalid_argument(
                "infeasible size combination: routes cannot cover n_ports");
        for (int p = 0; p < n_ports; ++p) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "P%02d", p);
            inst.ports.push_back({buf, p});
        }
        Rng legs = sub_stream(seed, "gen/legs");
        if (n_routes == 1) {
            Route route;
            route.id = 1;
            for (int p = 0; p < n_ports; ++p) {
                route.port_calls.push_back(p);
                route.leg_lengths_nm.push_back(
                    static_cast<double>(legs.uniform_int(100, 2000)));
            }
            inst.routes.push_back(std::move(route));
        } else {
            // port 0 is the shared hub; the rest is sliced evenly
            const int rest = n_ports - 1;
            int next = 1;
            for (int r = 0; r < n_routes; ++r) {
                const int take = rest / n_routes + (r < rest % n_routes ? 1 : 0);
                Route route;
                route.id = r + 1;
                route.port_calls.push_back(0);
                route.leg_lengths_nm.push_back(
                    static_cast<double>(legs.uniform_int(100, 2000)));
                for (int k = 0; k < take; ++k) {
                    route.port_calls.push_back(next++);
                    route.leg_lengths_nm.push_back(
                        static_cast<double>(legs.uniform_int(100, 2000)));
                }
                inst.routes.push_back(std::move(route));
            }
        }
        for (int v = 0; v < n_vessels; ++v) {
            const auto& ref = detail::reference_vessels()[v];
            VesselClass vc;
            vc.id = ref.id;
            vc.capacity_teu = ref.capacity_teu;
            vc.c_opr = ref.c_opr;
            vc.c_berth = ref.c_berth;
            for (int r = 0; r < n_routes; ++r)
                vc.c_fix.push_back(ref.c_fix[r % 6]);
            vc.handling_time_h_per_teu = ref.handling_h_per_teu;
            vc.empty_weight_t = ref.empty_weight_t;
            inst.vessels.push_back(std::move(vc));
        }
    }

    inst.rates = detail::reference_rates();
    inst.speed_min_kn = 14;
    inst.speed_max_kn = 24;
    inst.demand_teu_per_week.assign(inst.ports.size(),
                                    std::vector<double>(inst.ports.size(), 0.0));
    Rng demand = sub_stream(seed, "gen/demand");
    const std::int64_t cap = static_cast<std::int64_t>(demand_scale);
    for (int o = 0; o < inst.num_ports(); ++o) {
        for (int d = 0; d < inst.num_ports(); ++d) {
            if (o == d) continue;
            if (enumerate_paths(inst, o, d).empty()) continue;
            if (cap > 0)
                inst.demand_teu_per_week[o][d] =
                    static_cast<double>(demand.uniform_int(0, cap));
        }
    }

    validate_structure(inst);
    validate_connectivity(inst);
    return inst;
}

}  // namespace linermoo
