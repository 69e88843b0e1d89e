#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "linermoo/evaluation.hpp"
#include "linermoo/genotype.hpp"

namespace linermoo {

enum class VarKind { Binary, Integer, Continuous };

struct MilpVar {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lb = 0;
    double ub = std::numeric_limits<double>::infinity();
};

struct LinTerm {
    int var = 0;
    double coeff = 0;
};

struct LinRow {
    std::string name;
    std::vector<LinTerm> terms;
    char sense = '<';  // '<' is <=, '>' is >=, '=' is equality
    double rhs = 0;
};

struct LinObjective {
    std::vector<LinTerm> terms;
    double constant = 0;
};

enum class MilpObjective { Cost, Time };

// Linearized model over a discrete speed grid and an integer hour grid for
// transshipment lags. Hour-dependent holding terms are emitted only for the
// port each quadruple actually uses (the port indicator is zero everywhere
// else, which makes those rows vacuous).
struct MilpModel {
    std::vector<MilpVar> vars;
    std::vector<LinRow> rows;
    LinObjective obj_cost;
    LinObjective obj_time;

    std::vector<double> speed_grid;  // shared across legs
    std::vector<TransshipmentQuad> quads;
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0, m5 = 0, m6 = 0;

    // least-squares fit of (empty_weight + w)^(2/3) per vessel class
    std::vector<double> fit_a, fit_b, fit_residual;

    // variable index maps
    std::vector<std::vector<int>> x_idx, n_idx, u_idx, t_idx;   // r,(v|i)
    std::vector<std::vector<std::vector<int>>> zl_idx, zd_idx, f_idx,  // r,i,o
        z_idx;                                                  // r,i,v
    std::vector<std::vector<std::vector<int>>> psi_idx;         // r,i,a
    std::vector<std::vector<std::vector<std::vector<int>>>> phi_idx,
        w_idx;                                                  // r,i,v,a
    std::vector<int> theta_idx, gamma_idx;                      // q
    std::vector<std::vector<int>> lam_idx, del_idx;             // q,h-1
    int const_one_idx = -1;

    std::vector<std::pair<std::string, std::size_t>> var_groups;
    std::vector<std::pair<std::string, std::size_t>> row_groups;

    std::size_t variable_count() const { return vars.size(); }
    std::size_t constraint_count() const { return rows.size(); }
};

namespace detail {

inline std::string idx_name(const char* base, std::initializer_list<int> ids) {
    std::string s = base;
    for (int v : ids) {
        s += '_';
        s += std::to_string(v);
    }
    return s;
}

struct ModelBuilder {
    MilpModel& model;
    std::size_t group_mark = 0;
    std::size_t row_mark = 0;

    int add_var(std::string name, VarKind kind, double lb, double ub) {
        model.vars.push_back({std::move(name), kind, lb, ub});
        return static_cast<int>(model.vars.size()) - 1;
    }
    void close_var_group(const std::string& label) {
        model.var_groups.emplace_back(label, model.vars.size() - group_mark);
        group_mark = model.vars.size();
    }
    LinRow& add_row(std::string name, char sense, double rhs) {
        model.rows.push_back({std::move(name), {}, sense, rhs});
        return model.rows.back();
    }
    void close_row_group(const std::string& label) {
        model.row_groups.emplace_back(label, model.rows.size() - row_mark);
        row_mark = model.rows.size();
    }
};

inline void fit_two_thirds(const Instance& inst, MilpModel& model) {
    for (const VesselClass& v : inst.vessels) {
        const double wmax = v.capacity_teu * inst.rates.teu_weight_t;
        const int samples = 101;
        double sw = 0, sww = 0, sy = 0, swy = 0;
        for (int s = 0; s < samples; ++s) {
            const double w = wmax * s / (samples - 1);
            const double y = std::pow(v.empty_weight_t + w, 2.0 / 3.0);
            sw += w;
            sww += w * w;
            sy += y;
            swy += w * y;
        }
        const double n = samples;
        const double denom = n * sww - sw * sw;
        const double b = (n * swy - sw * sy) / denom;
        const double a = (sy - b * sw) / n;
        double res = 0;
        for (int s = 0; s < samples; ++s) {
            const double w = wmax * s / (samples - 1);
            const double y = std::pow(v.empty_weight_t + w, 2.0 / 3.0);
            res = std::max(res, std::abs(y - (a + b * w)));
        }
        model.fit_a.push_back(a);
        model.fit_b.push_back(b);
        model.fit_residual.push_back(res);
    }
}

}  // namespace detail

// Builds the full linearized model. The speed grid step must split
// [speed_min, speed_max] into a whole number of intervals.
inline MilpModel build_milp(const Instance& inst, double speed_grid_step = 1.0) {
    if (!(speed_grid_step > 0))
        throw std::invalid_argument("speed grid step must be positive");
    const double span = inst.speed_max_kn - inst.speed_min_kn;
    const double levels_d = span / speed_grid_step;
    if (std::abs(levels_d - std::round(levels_d)) > 1e-9)
        throw std::invalid_argument(
            "speed grid step must divide the speed range evenly");
    const int levels = static_cast<int>(std::round(levels_d)) + 1;

    MilpModel model;
    detail::ModelBuilder b{model};
    for (int a = 0; a < levels; ++a)
        model.speed_grid.push_back(inst.speed_min_kn + a * speed_grid_step);
    model.quads = derive_transshipments(inst);
    detail::fit_two_thirds(inst, model);

    const int nr = inst.num_routes();
    const int nv = inst.num_vessels();
    const int np = inst.num_ports();
    const int nq = static_cast<int>(model.quads.size());
    const double total_demand = inst.total_demand();
    const double teu_w = inst.rates.teu_weight_t;

    int n_max_all = 0;
    for (const Route& r : inst.routes) n_max_all = std::max(n_max_all, r.n_max);
    model.m1 = n_max_all;
    model.m2 = 2.0 * total_demand;
    model.m3 = 2.0 * total_demand;
    double t_max = 0;
    for (const VesselClass& v : inst.vessels)
        t_max = std::max(t_max, v.handling_time_h_per_teu);
    double m4 = 0;
    for (const Route& r : inst.routes) {
        double rt = r.num_calls() * inst.fixed_port_hours;
        for (double l : r.leg_lengths_nm) rt += l / inst.speed_min_kn;
        m4 = std::max(m4, rt);
    }
    model.m4 = m4 + t_max * 2.0 * total_demand;
    model.m5 = kHoursPerWeek * total_demand;
    model.m6 = teu_w * 2.0 * total_demand;

    // ---- variables ----
    auto for_calls = [&](auto&& fn) {
        for (int r = 0; r < nr; ++r)
            for (int i = 0; i < inst.routes[r].num_calls(); ++i) fn(r, i);
    };

    model.x_idx.assign(nr, std::vector<int>(nv));
    for (int r = 0; r < nr; ++r)
        for (int v = 0; v < nv; ++v)
            model.x_idx[r][v] =
                b.add_var(detail::idx_name("x", {r, v}), VarKind::Binary, 0, 1);
    b.close_var_group("x");

    model.n_idx.assign(nr, std::vector<int>(nv));
    for (int r = 0; r < nr; ++r)
        for (int v = 0; v < nv; ++v)
            model.n_idx[r][v] = b.add_var(detail::idx_name("n", {r, v}),
                                          VarKind::Integer, 0,
                                          inst.routes[r].n_max);
    b.close_var_group("n");

    model.u_idx.assign(nr, {});
    for (int r = 0; r < nr; ++r)
        for (int i = 0; i < inst.routes[r].num_legs(); ++i)
            model.u_idx[r].push_back(
                b.add_var(detail::idx_name("u", {r, i}), VarKind::Continuous,
                          inst.speed_min_kn, inst.speed_max_kn));
    b.close_var_group("u");

    model.t_idx.assign(nr, {});
    for (int r = 0; r < nr; ++r) {
        const int calls = inst.routes[r].num_calls();
        for (int i = 0; i <= calls; ++i) {
            const double ub = i == 0 ? kStartWindowH
                                     : std::numeric_limits<double>::infinity();
            model.t_idx[r].push_back(b.add_var(detail::idx_name("t", {r, i}),
                                               VarKind::Continuous, 0, ub));
        }
    }
    b.close_var_group("t");

    auto flow_block = [&](const char* base) {
        std::vector<std::vector<std::vector<int>>> idx(nr);
        for (int r = 0; r < nr; ++r) {
            idx[r].resize(inst.routes[r].num_calls());
            for (int i = 0; i < inst.routes[r].num_calls(); ++i)
                for (int o = 0; o < np; ++o)
                    idx[r][i].push_back(
                        b.add_var(detail::idx_name(base, {r, i, o}),
                                  VarKind::Continuous, 0,
                                  std::numeric_limits<double>::infinity()));
        }
        return idx;
    };
    model.zl_idx = flow_block("zl");
    b.close_var_group("z_load");
    model.zd_idx = flow_block("zd");
    b.close_var_group("z_disc");
    model.f_idx = flow_block("f");
    b.close_var_group("f");

    model.z_idx.assign(nr, {});
    for (int r = 0; r < nr; ++r) {
        model.z_idx[r].resize(inst.routes[r].num_calls());
        for (int i = 0; i < inst.routes[r].num_calls(); ++i)
            for (int v = 0; v < nv; ++v)
                model.z_idx[r][i].push_back(
                    b.add_var(detail::idx_name("z", {r, i, v}),
                              VarKind::Continuous, 0,
                              std::numeric_limits<double>::infinity()));
    }
    b.close_var_group("z_riv");

    model.psi_idx.assign(nr, {});
    for (int r = 0; r < nr; ++r) {
        model.psi_idx[r].resize(inst.routes[r].num_legs());
        for (int i = 0; i < inst.routes[r].num_legs(); ++i)
            for (int a = 0; a < levels; ++a)
                model.psi_idx[r][i].push_back(b.add_var(
                    detail::idx_name("psi", {r, i, a}), VarKind::Binary, 0, 1));
    }
    b.close_var_group("psi");

    model.phi_idx.assign(nr, {});
    model.w_idx.assign(nr, {});
    for (int r = 0; r < nr; ++r) {
        model.phi_idx[r].resize(inst.routes[r].num_legs());
        model.w_idx[r].resize(inst.routes[r].num_legs());
        for (int i = 0; i < inst.routes[r].num_legs(); ++i) {
            model.phi_idx[r][i].resize(nv);
            model.w_idx[r][i].resize(nv);
            for (int v = 0; v < nv; ++v)
                for (int a = 0; a < levels; ++a)
                    model.phi_idx[r][i][v].push_back(
                        b.add_var(detail::idx_name("phi", {r, i, v, a}),
                                  VarKind::Binary, 0, 1));
        }
    }
    b.close_var_group("phi");
    for (int r = 0; r < nr; ++r)
        for (int i = 0; i < inst.routes[r].num_legs(); ++i)
            for (int v = 0; v < nv; ++v)
                for (int a = 0; a < levels; ++a)
                    model.w_idx[r][i][v].push_back(
                        b.add_var(detail::idx_name("w", {r, i, v, a}),
                                  VarKind::Continuous, 0,
                                  std::numeric_limits<double>::infinity()));
    b.close_var_group("w");

    for (int q = 0; q < nq; ++q)
        model.theta_idx.push_back(b.add_var(detail::idx_name("th", {q}),
                                            VarKind::Continuous, 0, kThetaMaxH));
    b.close_var_group("theta");
    for (int q = 0; q < nq; ++q)
        model.gamma_idx.push_back(b.add_var(detail::idx_name("gam", {q}),
                                            VarKind::Integer, -n_max_all,
                                            n_max_all));
    b.close_var_group("gamma");

    model.lam_idx.assign(nq, {});
    for (int q = 0; q < nq; ++q)
        for (int h = 1; h <= 168; ++h)
            model.lam_idx[q].push_back(b.add_var(
                detail::idx_name("lam", {q, h}), VarKind::Binary, 0, 1));
    b.close_var_group("lambda");

    model.del_idx.assign(nq, {});
    for (int q = 0; q < nq; ++q)
        for (int h = 1; h <= 168; ++h)
            model.del_idx[q].push_back(b.add_var(
                detail::idx_name("del", {model.quads[q].port, q, h}),
                VarKind::Continuous, 0,
                std::numeric_limits<double>::infinity()));
    b.close_var_group("delta");

    model.const_one_idx =
        b.add_var("const_one", VarKind::Continuous, 1, 1);
    b.close_var_group("aux");

    // ---- rows ----
    for (int r = 0; r < nr; ++r) {
        LinRow& row = b.add_row(detail::idx_name("one_class", {r}), '=', 1);
        for (int v = 0; v < nv; ++v) row.terms.push_back({model.x_idx[r][v], 1});
    }
    b.close_row_group("one_class");

    for (int r = 0; r < nr; ++r)
        for (int v = 0; v < nv; ++v) {
            LinRow& row = b.add_row(detail::idx_name("fleet_lb", {r, v}), '>', 0);
            row.terms.push_back({model.n_idx[r][v], 1});
            row.terms.push_back(
                {model.x_idx[r][v], -static_cast<double>(inst.routes[r].n_min)});
        }
    b.close_row_group("fleet_lb");

    for (int r = 0; r < nr; ++r)
        for (int v = 0; v < nv; ++v) {
            LinRow& row = b.add_row(detail::idx_name("fleet_guard", {r, v}), '<', 0);
            row.terms.push_back({model.n_idx[r][v], 1});
            row.terms.push_back({model.x_idx[r][v], -model.m1});
        }
    b.close_row_group("fleet_guard");

    for_calls([&](int r, int i) {
        LinRow& row = b.add_row(detail::idx_name("capacity", {r, i}), '<', 0);
        for (int o = 0; o < np; ++o)
            row.terms.push_back({model.f_idx[r][i][o], 1});
        for (int v = 0; v < nv; ++v)
            row.terms.push_back(
                {model.x_idx[r][v], -inst.vessels[v].capacity_teu});
    });
    b.close_row_group("capacity");

    for (int o = 0; o < np; ++o)
        for (int d = 0; d < np; ++d) {
            if (o == d) continue;
            LinRow& row = b.add_row(detail::idx_name("demand", {o, d}), '=',
                                    inst.demand(o, d));
            for (int r = 0; r < nr; ++r) {
                const Route& route = inst.routes[r];
                for (int i = 0; i < route.num_calls(); ++i) {
                    if (route.port_calls[i] != d) continue;
                    row.terms.push_back({model.zd_idx[r][i][o], 1});
                    row.terms.push_back({model.zl_idx[r][i][o], -1});
                }
            }
        }
    b.close_row_group("demand");

    for_calls([&](int r, int i) {
        const int n = inst.routes[r].num_calls();
        for (int o = 0; o < np; ++o) {
            LinRow& row = b.add_row(detail::idx_name("flow_balance", {r, i, o}), '=', 0);
            row.terms.push_back({model.f_idx[r][(i + n - 1) % n][o], 1});
            row.terms.push_back({model.zl_idx[r][i][o], 1});
            row.terms.push_back({model.f_idx[r][i][o], -1});
            row.terms.push_back({model.zd_idx[r][i][o], -1});
        }
    });
    b.close_row_group("flow_balance");

    const int levels_n = static_cast<int>(model.speed_grid.size());
    for_calls([&](int r, int i) {
        LinRow& row = b.add_row(detail::idx_name("schedule", {r, i}), '=',
                                inst.fixed_port_hours);
        row.terms.push_back({model.t_idx[r][i + 1], 1});
        row.terms.push_back({model.t_idx[r][i], -1});
        for (int v = 0; v < nv; ++v)
            row.terms.push_back({model.z_idx[r][i][v],
                                 -inst.vessels[v].handling_time_h_per_teu});
        for (int v = 0; v < nv; ++v)
            for (int a = 0; a < levels_n; ++a)
                row.terms.push_back(
                    {model.phi_idx[r][i][v][a],
                     -inst.routes[r].leg_lengths_nm[i] / model.speed_grid[a]});
    });
    b.close_row_group("schedule");

    for (int q = 0; q < nq; ++q) {
        const TransshipmentQuad& quad = model.quads[q];
        LinRow& row = b.add_row(detail::idx_name("lag_link", {q}), '=', 0);
        row.terms.push_back({model.t_idx[quad.r_prime][quad.i_prime], 1});
        row.terms.push_back({model.t_idx[quad.r][quad.i], -1});
        row.terms.push_back({model.gamma_idx[q], kHoursPerWeek});
        row.terms.push_back({model.theta_idx[q], -1});
    }
    b.close_row_group("lag_link");

    for (int q = 0; q < nq; ++q) {
        const TransshipmentQuad& quad = model.quads[q];
        LinRow& lo = b.add_row(detail::idx_name("wrap_lo", {q}), '>', 0);
        lo.terms.push_back({model.gamma_idx[q], 1});
        for (int v = 0; v < nv; ++v)
            lo.terms.push_back({model.n_idx[quad.r_prime][v], 1});
        LinRow& hi = b.add_row(detail::idx_name("wrap_hi", {q}), '<', 0);
        hi.terms.push_back({model.gamma_idx[q], 1});
        for (int v = 0; v < nv; ++v)
            hi.terms.push_back({model.n_idx[quad.r][v], -1});
    }
    b.close_row_group("wrap_bounds");

    for_calls([&](int r, int i) {
        LinRow& row = b.add_row(detail::idx_name("one_speed", {r, i}), '=', 1);
        for (int a = 0; a < levels_n; ++a)
            row.terms.push_back({model.psi_idx[r][i][a], 1});
    });
    b.close_row_group("one_speed");

    for_calls([&](int r, int i) {
        LinRow& row = b.add_row(detail::idx_name("speed_link", {r, i}), '=', 0);
        for (int a = 0; a < levels_n; ++a)
            row.terms.push_back({model.psi_idx[r][i][a], model.speed_grid[a]});
        row.terms.push_back({model.u_idx[r][i], -1});
    });
    b.close_row_group("speed_link");

    for_calls([&](int r, int i) {
        for (int v = 0; v < nv; ++v)
            for (int a = 0; a < levels_n; ++a) {
                LinRow& r42 =
                    b.add_row(detail::idx_name("sel_speed", {r, i, v, a}), '<', 0);
                r42.terms.push_back({model.phi_idx[r][i][v][a], 1});
                r42.terms.push_back({model.psi_idx[r][i][a], -1});
            }
    });
    b.close_row_group("sel_speed");
    for_calls([&](int r, int i) {
        for (int v = 0; v < nv; ++v)
            for (int a = 0; a < levels_n; ++a) {
                LinRow& r43 =
                    b.add_row(detail::idx_name("sel_class", {r, i, v, a}), '<', 0);
                r43.terms.push_back({model.phi_idx[r][i][v][a], 1});
                r43.terms.push_back({model.x_idx[r][v], -1});
            }
    });
    b.close_row_group("sel_class");
    for_calls([&](int r, int i) {
        for (int v = 0; v < nv; ++v)
            for (int a = 0; a < levels_n; ++a) {
                LinRow& r44 =
                    b.add_row(detail::idx_name("sel_join", {r, i, v, a}), '>', -1);
                r44.terms.push_back({model.phi_idx[r][i][v][a], 1});
                r44.terms.push_back({model.psi_idx[r][i][a], -1});
                r44.terms.push_back({model.x_idx[r][v], -1});
            }
    });
    b.close_row_group("sel_join");

    // payload gating (tons): w <= Cap*teu_w*phi, and w covers the actual
    // onboard payload whenever phi is on; without the lower link a solver
    // could zero out the fuel term.
    for_calls([&](int r, int i) {
        for (int v = 0; v < nv; ++v)
            for (int a = 0; a < levels_n; ++a) {
                LinRow& row =
                    b.add_row(detail::idx_name("payload_cap", {r, i, v, a}), '<', 0);
                row.terms.push_back({model.w_idx[r][i][v][a], 1});
                row.terms.push_back({model.phi_idx[r][i][v][a],
                                     -inst.vessels[v].capacity_teu * teu_w});
            }
    });
    b.close_row_group("payload_cap");
    for_calls([&](int r, int i) {
        for (int v = 0; v < nv; ++v)
            for (int a = 0; a < levels_n; ++a) {
                LinRow& row = b.add_row(detail::idx_name("payload_link", {r, i, v, a}),
                                        '>', -model.m6);
                row.terms.push_back({model.w_idx[r][i][v][a], 1});
                for (int o = 0; o < np; ++o)
                    row.terms.push_back({model.f_idx[r][i][o], -teu_w});
                row.terms.push_back({model.phi_idx[r][i][v][a], -model.m6});
            }
    });
    b.close_row_group("payload_link");

    for_calls([&](int r, int i) {
        for (int v = 0; v < nv; ++v) {
            LinRow& row = b.add_row(detail::idx_name("handled_guard", {r, i, v}), '<', 0);
            row.terms.push_back({model.z_idx[r][i][v], 1});
            row.terms.push_back({model.x_idx[r][v], -model.m2});
        }
    });
    b.close_row_group("handled_guard");
    for_calls([&](int r, int i) {
        for (int v = 0; v < nv; ++v) {
            LinRow& row = b.add_row(detail::idx_name("handled_link", {r, i, v}), '>',
                                    -model.m3);
            row.terms.push_back({model.z_idx[r][i][v], 1});
            for (int o = 0; o < np; ++o) {
                row.terms.push_back({model.zl_idx[r][i][o], -1});
                row.terms.push_back({model.zd_idx[r][i][o], -1});
            }
            row.terms.push_back({model.x_idx[r][v], -model.m3});
        }
    });
    b.close_row_group("handled_link");

    for (int r = 0; r < nr; ++r)
        for (int v = 0; v < nv; ++v) {
            const Route& route = inst.routes[r];
            LinRow& row =
                b.add_row(detail::idx_name("weekly", {r, v}), '>',
                          route.num_calls() * inst.fixed_port_hours - model.m4);
            row.terms.push_back({model.n_idx[r][v], kHoursPerWeek});
            for (int i = 0; i < route.num_calls(); ++i)
                row.terms.push_back({model.z_idx[r][i][v],
                                     -inst.vessels[v].handling_time_h_per_teu});
            for (int i = 0; i < route.num_legs(); ++i)
                for (int a = 0; a < levels_n; ++a)
                    row.terms.push_back(
                        {model.psi_idx[r][i][a],
                         -route.leg_lengths_nm[i] / model.speed_grid[a]});
            row.terms.push_back({model.x_idx[r][v], -model.m4});
        }
    b.close_row_group("weekly");

    for (int q = 0; q < nq; ++q) {
        LinRow& row = b.add_row(detail::idx_name("one_hour", {q}), '=', 1);
        for (int h = 0; h < 168; ++h)
            row.terms.push_back({model.lam_idx[q][h], 1});
    }
    b.close_row_group("one_hour");
    for (int q = 0; q < nq; ++q) {
        LinRow& row = b.add_row(detail::idx_name("hour_link", {q}), '=', 0);
        for (int h = 0; h < 168; ++h)
            row.terms.push_back(
                {model.lam_idx[q][h], static_cast<double>(h + 1)});
        row.terms.push_back({model.theta_idx[q], -1});
    }
    b.close_row_group("hour_link");

    for (int q = 0; q < nq; ++q) {
        const int p = model.quads[q].port;
        double direct = 0;
        for (int o = 0; o < np; ++o) direct += inst.demand(o, p);
        for (int h = 1; h <= 168; ++h) {
            LinRow& row = b.add_row(detail::idx_name("holding", {q, h}), '>',
                                    -0.5 * h * direct - model.m5);
            row.terms.push_back({model.del_idx[q][h - 1], 1});
            for (int r = 0; r < nr; ++r) {
                const Route& route = inst.routes[r];
                for (int i = 0; i < route.num_calls(); ++i) {
                    if (route.port_calls[i] != p) continue;
                    for (int o = 0; o < np; ++o) {
                        if (o == p) continue;
                        row.terms.push_back({model.zl_idx[r][i][o], -0.5 * h});
                        row.terms.push_back({model.zd_idx[r][i][o], -0.5 * h});
                    }
                }
            }
            row.terms.push_back({model.lam_idx[q][h - 1], -model.m5});
        }
    }
    b.close_row_group("holding");

    for_calls([&](int r, int i) {
        const Route& route = inst.routes[r];
        LinRow& row = b.add_row(detail::idx_name("no_return", {r, i}), '=', 0);
        row.terms.push_back(
            {model.f_idx[r][i][route.port_calls[(i + 1) % route.num_calls()]],
             1});
    });
    b.close_row_group("no_return");
    for_calls([&](int r, int i) {
        LinRow& row = b.add_row(detail::idx_name("no_origin_disc", {r, i}), '=', 0);
        row.terms.push_back(
            {model.zd_idx[r][i][inst.routes[r].port_calls[i]], 1});
    });
    b.close_row_group("no_origin_disc");

    // ---- objectives ----
    const CostRates& rates = inst.rates;
    double constant = 0;
    for (int r = 0; r < nr; ++r)
        for (int v = 0; v < nv; ++v) {
            model.obj_cost.terms.push_back(
                {model.n_idx[r][v], inst.vessels[v].c_opr});
            model.obj_cost.terms.push_back(
                {model.x_idx[r][v], inst.vessels[v].c_fix[r]});
        }
    for_calls([&](int r, int i) {
        for (int v = 0; v < nv; ++v)
            model.obj_cost.terms.push_back(
                {model.z_idx[r][i][v],
                 inst.vessels[v].c_berth * inst.vessels[v].handling_time_h_per_teu +
                     rates.c_emis * rates.e_port});
    });
    for_calls([&](int r, int i) {
        const int p = inst.routes[r].port_calls[i];
        for (int o = 0; o < np; ++o) {
            if (o == p) continue;
            model.obj_cost.terms.push_back(
                {model.zl_idx[r][i][o], 0.5 * rates.c_trans});
            model.obj_cost.terms.push_back(
                {model.zd_idx[r][i][o], 0.5 * rates.c_trans});
        }
    });
    for (int p = 0; p < np; ++p) {
        double inbound = 0;
        for (int o = 0; o < np; ++o) inbound += inst.demand(o, p);
        constant -= 0.5 * rates.c_trans * inbound;
    }
    for (int q = 0; q < nq; ++q)
        for (int h = 0; h < 168; ++h)
            model.obj_cost.terms.push_back(
                {model.del_idx[q][h], rates.c_hold});
    for (int o = 0; o < np; ++o)
        for (int d = 0; d < np; ++d)
            constant += (rates.c_load + rates.c_disc) * inst.demand(o, d);
    const double fuel_rate = rates.c_fuel + rates.c_emis * rates.e_sea;
    for_calls([&](int r, int i) {
        const double leg = inst.routes[r].leg_lengths_nm[i];
        for (int v = 0; v < nv; ++v) {
            const double k = inst.vessels[v].fuel_coeff_k;
            for (int a = 0; a < levels_n; ++a) {
                const double alpha = model.speed_grid[a];
                const double base = fuel_rate * leg / 24.0 * k * alpha * alpha;
                model.obj_cost.terms.push_back(
                    {model.phi_idx[r][i][v][a], base * model.fit_a[v]});
                model.obj_cost.terms.push_back(
                    {model.w_idx[r][i][v][a], base * model.fit_b[v]});
            }
        }
    });
    model.obj_cost.constant = constant;
    if (constant != 0)
        model.obj_cost.terms.push_back({model.const_one_idx, constant});

    for_calls([&](int r, int i) {
        const double leg = inst.routes[r].leg_lengths_nm[i];
        for (int v = 0; v < nv; ++v)
            for (int a = 0; a < levels_n; ++a)
                model.obj_time.terms.push_back(
                    {model.phi_idx[r][i][v][a], leg / model.speed_grid[a]});
    });
    for_calls([&](int r, int i) {
        for (int v = 0; v < nv; ++v)
            model.obj_time.terms.push_back(
                {model.z_idx[r][i][v], inst.vessels[v].handling_time_h_per_teu});
    });
    return model;
}

namespace detail {

inline std::string fmt_coeff(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_terms(std::ostream& os, const MilpModel& model,
                        const std::vector<LinTerm>& terms) {
    int on_line = 0;
    bool first = true;
    for (const LinTerm& t : terms) {
        if (t.coeff == 0) continue;
        if (on_line == 8) {
            os << "\n   ";
            on_line = 0;
        }
        const double mag = std::abs(t.coeff);
        if (first) {
            if (t.coeff < 0) os << "- ";
            first = false;
        } else {
            os << (t.coeff < 0 ? " - " : " + ");
        }
        os << fmt_coeff(mag) << ' ' << model.vars[t.var].name;
        ++on_line;
    }
    if (first) os << "0 const_one";  // empty expression guard
}

}  // namespace detail

// Writes the model in CPLEX-style LP text. `epsilon_f2` adds the
// time objective as a budget row (epsilon-constraint scalarization).
inline void write_lp(const MilpModel& model, std::ostream& os,
                     MilpObjective objective,
                     std::optional<double> epsilon_f2 = std::nullopt) {
    const LinObjective& obj =
        objective == MilpObjective::Cost ? model.obj_cost : model.obj_time;
    os << "\\ liner shipping model, "
       << (objective == MilpObjective::Cost ? "cost" : "time")
       << " objective\n";
    os << "\\ speed grid:";
    for (double a : model.speed_grid) os << ' ' << detail::fmt_coeff(a);
    os << "\n";
    os << "Minimize\n obj: ";
    detail::write_terms(os, model, obj.terms);
    os << "\nSubject To\n";
    for (const LinRow& row : model.rows) {
        os << ' ' << row.name << ": ";
        detail::write_terms(os, model, row.terms);
        os << (row.sense == '<' ? " <= " : row.sense == '>' ? " >= " : " = ")
           << detail::fmt_coeff(row.rhs) << "\n";
    }
    if (epsilon_f2) {
        os << " eps_f2: ";
        detail::write_terms(os, model, model.obj_time.terms);
        os << " <= " << detail::fmt_coeff(*epsilon_f2) << "\n";
    }
    os << "Bounds\n";
    for (const MilpVar& v : model.vars) {
        const bool inf_ub = std::isinf(v.ub);
        if (v.lb == 0 && inf_ub) continue;  // LP default
        if (v.kind == VarKind::Binary) continue;
        if (v.lb == v.ub) {
            os << ' ' << v.name << " = " << detail::fmt_coeff(v.lb) << "\n";
        } else if (inf_ub) {
            os << ' ' << detail::fmt_coeff(v.lb) << " <= " << v.name << "\n";
        } else {
            os << ' ' << detail::fmt_coeff(v.lb) << " <= " << v.name << " <= "
               << detail::fmt_coeff(v.ub) << "\n";
        }
    }
    os << "Binaries\n";
    int on_line = 0;
    for (const MilpVar& v : model.vars) {
        if (v.kind != VarKind::Binary) continue;
        os << ' ' << v.name;
        if (++on_line == 12) {
            os << "\n";
            on_line = 0;
        }
    }
    if (on_line) os << "\n";
    os << "Generals\n";
    on_line = 0;
    for (const MilpVar& v : model.vars) {
        if (v.kind != VarKind::Integer) continue;
        os << ' ' << v.name;
        if (++on_line == 12) {
            os << "\n";
            on_line = 0;
        }
    }
    if (on_line) os << "\n";
    os << "End\n";
}

inline void write_lp(const MilpModel& model, const std::string& path,
                     MilpObjective objective,
                     std::optional<double> epsilon_f2 = std::nullopt) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write LP file: " + path);
    write_lp(model, out, objective, epsilon_f2);
}

// Minimal reader for the LP subset emitted above, used to verify exports
// round-trip.
struct ParsedLp {
    std::map<std::string, double> objective;  // name -> coefficient
    struct Row {
        std::string name;
        std::map<std::string, double> terms;
        char sense = '<';
        double rhs = 0;
    };
    std::vector<Row> rows;
    std::map<std::string, std::pair<double, double>> bounds;
    std::set<std::string> binaries;
    std::set<std::string> generals;
};

inline ParsedLp read_lp(std::istream& in) {
    ParsedLp lp;
    enum Section { None, Objective, Rows, Bnds, Bins, Gens } section = None;
    std::string line;
    std::string pending;  // accumulated logical line
    auto parse_expr = [](const std::string& text, std::size_t pos,
                         std::map<std::string, double>& out,
                         char* sense, double* rhs) {
        double sign = 1;
        double coeff = std::nan("");
        std::istringstream ss(text.substr(pos));
        std::string tok;
        while (ss >> tok) {
            if (tok == "+") {
                sign = 1;
            } else if (tok == "-") {
                sign = -1;
            } else if (tok == "<=" || tok == ">=" || tok == "=") {
                *sense = tok[0] == '<' ? '<' : tok[0] == '>' ? '>' : '=';
                ss >> *rhs;
            } else {
                char* end = nullptr;
                const double v = std::strtod(tok.c_str(), &end);
                if (end && *end == '\0') {
                    coeff = sign * v;
                } else {
                    out[tok] += std::isnan(coeff) ? sign : coeff;
                    coeff = std::nan("");
                    sign = 1;
                }
            }
        }
    };
    auto flush = [&](const std::string& logical) {
        if (logical.empty()) return;
        if (section == Objective || section == Rows) {
            const std::size_t colon = logical.find(':');
            if (colon == std::string::npos) return;
            std::string name = logical.substr(0, colon);
            name.erase(0, name.find_first_not_of(" \t"));
            name.erase(name.find_last_not_of(" \t") + 1);
            char sense = 0;
            double rhs = 0;
            std::map<std::string, double> terms;
            parse_expr(logical, colon + 1, terms, &sense, &rhs);
            if (section == Objective) {
                lp.objective = std::move(terms);
            } else {
                lp.rows.push_back({name, std::move(terms), sense, rhs});
            }
        }
    };
    auto section_of = [](const std::string& s) -> int {
        std::string low;
        for (char c : s) low += static_cast<char>(std::tolower(c));
        if (low == "minimize" || low == "maximize") return Objective;
        if (low == "subject to" || low == "st" || low == "s.t.") return Rows;
        if (low == "bounds") return Bnds;
        if (low == "binaries" || low == "binary") return Bins;
        if (low == "generals" || low == "general") return Gens;
        if (low == "end") return None;
        return -1;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '\\') continue;
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
        const int sec = section_of(trimmed);
        if (sec >= 0) {
            flush(pending);
            pending.clear();
            section = static_cast<Section>(sec);
            continue;
        }
        if (trimmed.empty()) continue;
        switch (section) {
            case Objective:
            case Rows:
                // a new logical line starts when a "name:" prefix appears
                if (trimmed.find(':') != std::string::npos) {
                    flush(pending);
                    pending = trimmed;
                } else {
                    pending += ' ';
                    pending += trimmed;
                }
                break;
            case Bnds: {
                std::istringstream ss(trimmed);
                std::vector<std::string> toks;
                std::string t;
                while (ss >> t) toks.push_back(t);
                const double inf = std::numeric_limits<double>::infinity();
                if (toks.size() == 3 && toks[1] == "=") {
                    const double v = std::strtod(toks[2].c_str(), nullptr);
                    lp.bounds[toks[0]] = {v, v};
                } else if (toks.size() == 3 && toks[1] == "<=") {
                    lp.bounds[toks[2]].first =
                        std::strtod(toks[0].c_str(), nullptr);
                    if (lp.bounds[toks[2]].second == 0)
                        lp.bounds[toks[2]].second = inf;
                } else if (toks.size() == 5 && toks[1] == "<=" &&
                           toks[3] == "<=") {
                    lp.bounds[toks[2]] = {std::strtod(toks[0].c_str(), nullptr),
                                          std::strtod(toks[4].c_str(), nullptr)};
                }
                break;
            }
            case Bins: {
                std::istringstream ss(trimmed);
                std::string t;
                while (ss >> t) lp.binaries.insert(t);
                break;
            }
            case Gens: {
                std::istringstream ss(trimmed);
                std::string t;
                while (ss >> t) lp.generals.insert(t);
                break;
            }
            default:
                break;
        }
    }
    flush(pending);
    return lp;
}

inline ParsedLp read_lp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read LP file: " + path);
    return read_lp(in);
}

struct VerifyReport {
    bool rows_ok = false;
    std::string first_violated_row;
    double max_row_violation = 0;
    double f1_linear = 0;
    double f1_nonlinear = 0;
    double f2_linear = 0;
    double f2_nonlinear = 0;
    double f1_fit_bound = 0;  // fuel-approximation error bound for this point
    Solution solution;        // reconstructed nonlinear-model solution
};

// Builds the variable assignment that represents a decoded solution.
// Requires on-grid speeds and integer lags within the hour grid.
inline std::vector<double> assignment_from_solution(const MilpModel& model,
                                                    const Instance& inst,
                                                    const Solution& sol) {
    std::vector<double> val(model.vars.size(), 0.0);
    const int nv = inst.num_vessels();
    const double teu_w = inst.rates.teu_weight_t;
    for (int r = 0; r < inst.num_routes(); ++r) {
        const int chosen = sol.vessel_class[r];
        val[model.x_idx[r][chosen]] = 1;
        val[model.n_idx[r][chosen]] = sol.n_r[r];
        const Route& route = inst.routes[r];
        for (int i = 0; i <= route.num_calls(); ++i)
            val[model.t_idx[r][i]] = sol.arrival_h[r][i];
        for (int i = 0; i < route.num_legs(); ++i) {
            const double u = sol.speeds_kn[r][i];
            val[model.u_idx[r][i]] = u;
            int level = -1;
            for (std::size_t a = 0; a < model.speed_grid.size(); ++a)
                if (std::abs(model.speed_grid[a] - u) <= 1e-9)
                    level = static_cast<int>(a);
            if (level < 0)
                throw std::invalid_argument("off-grid speed in assignment");
            val[model.psi_idx[r][i][level]] = 1;
            val[model.phi_idx[r][i][chosen][level]] = 1;
            val[model.w_idx[r][i][chosen][level]] =
                teu_w * sol.flow.leg_flow(r, i);
        }
        for (int i = 0; i < route.num_calls(); ++i) {
            for (int o = 0; o < inst.num_ports(); ++o) {
                val[model.zl_idx[r][i][o]] = sol.flow.zl(r, i, o);
                val[model.zd_idx[r][i][o]] = sol.flow.zd(r, i, o);
                val[model.f_idx[r][i][o]] = sol.flow.fl(r, i, o);
            }
            for (int v = 0; v < nv; ++v)
                val[model.z_idx[r][i][v]] =
                    v == chosen ? sol.flow.handled(r, i) : 0.0;
        }
    }
    for (std::size_t q = 0; q < model.quads.size(); ++q) {
        const double theta = sol.theta_h[q];
        const long long h = std::llround(theta);
        if (std::abs(theta - static_cast<double>(h)) > 1e-9 || h < 1 ||
            h > 168)
            throw std::invalid_argument(
                "transshipment lag is not on the hour grid");
        val[model.theta_idx[q]] = static_cast<double>(h);
        val[model.gamma_idx[q]] = sol.gamma[q];
        val[model.lam_idx[q][static_cast<int>(h) - 1]] = 1;
        const int p = model.quads[q].port;
        double handled = 0;
        for (int r = 0; r < inst.num_routes(); ++r) {
            const Route& route = inst.routes[r];
            for (int i = 0; i < route.num_calls(); ++i) {
                if (route.port_calls[i] != p) continue;
                for (int o = 0; o < inst.num_ports(); ++o) {
                    if (o == p) continue;
                    handled += sol.flow.zl(r, i, o) + sol.flow.zd(r, i, o);
                }
            }
        }
        double inbound = 0;
        for (int o = 0; o < inst.num_ports(); ++o) inbound += inst.demand(o, p);
        val[model.del_idx[q][static_cast<int>(h) - 1]] =
            std::max(0.0, 0.5 * h * (handled - inbound));
    }
    if (model.const_one_idx >= 0) val[model.const_one_idx] = 1;
    return val;
}

inline double eval_objective(const LinObjective& obj,
                             const std::vector<double>& val) {
    double s = 0;
    for (const LinTerm& t : obj.terms) s += t.coeff * val[t.var];
    return s;
}

// Checks an assignment against every exported row, then reconstructs the
// nonlinear solution from it and reports the objective gaps. The F1 gap is
// attributable to the fitted 2/3-power term and must stay within the
// reported bound; F2 has no approximation on the grid.
inline VerifyReport verify_assignment(const MilpModel& model,
                                      const Instance& inst,
                                      const std::vector<double>& val,
                                      double row_tol = 1e-6) {
    if (val.size() != model.vars.size())
        throw std::invalid_argument("assignment size mismatch");
    VerifyReport rep;
    rep.rows_ok = true;
    for (std::size_t i = 0; i < model.vars.size(); ++i) {
        const MilpVar& v = model.vars[i];
        double viol = std::max(v.lb - val[i], val[i] - v.ub);
        if (v.kind != VarKind::Continuous)
            viol = std::max(
                viol, std::abs(val[i] - std::round(val[i])) > 1e-9 ? 1.0 : 0.0);
        if (viol > row_tol) {
            rep.rows_ok = false;
            if (rep.first_violated_row.empty())
                rep.first_violated_row = "bound:" + v.name;
            rep.max_row_violation = std::max(rep.max_row_violation, viol);
        }
    }
    for (const LinRow& row : model.rows) {
        double lhs = 0;
        for (const LinTerm& t : row.terms) lhs += t.coeff * val[t.var];
        double viol = 0;
        if (row.sense == '<') viol = lhs - row.rhs;
        else if (row.sense == '>') viol = row.rhs - lhs;
        else viol = std::abs(lhs - row.rhs);
        if (viol > row_tol) {
            rep.rows_ok = false;
            if (rep.first_violated_row.empty())
                rep.first_violated_row = row.name;
            rep.max_row_violation = std::max(rep.max_row_violation, viol);
        }
    }

    // reconstruct the nonlinear-model solution
    Solution sol;
    const int nr = inst.num_routes();
    sol.vessel_class.resize(nr);
    sol.n_r.resize(nr);
    sol.speeds_kn.resize(nr);
    sol.arrival_h.resize(nr);
    sol.flow = FlowAssignment::zeros(inst);
    for (int r = 0; r < nr; ++r) {
        int chosen = 0;
        for (int v = 0; v < inst.num_vessels(); ++v)
            if (val[model.x_idx[r][v]] > 0.5) chosen = v;
        sol.vessel_class[r] = chosen;
        double n = 0;
        for (int v = 0; v < inst.num_vessels(); ++v)
            n += val[model.n_idx[r][v]];
        sol.n_r[r] = static_cast<int>(std::llround(n));
        const Route& route = inst.routes[r];
        sol.speeds_kn[r].resize(route.num_legs());
        for (int i = 0; i < route.num_legs(); ++i) {
            double u = 0;
            for (std::size_t a = 0; a < model.speed_grid.size(); ++a)
                if (val[model.psi_idx[r][i][a]] > 0.5) u = model.speed_grid[a];
            if (u == 0)
                throw std::invalid_argument("assignment selects no speed level");
            sol.speeds_kn[r][i] = u;
        }
        sol.arrival_h[r].resize(route.num_calls() + 1);
        for (int i = 0; i <= route.num_calls(); ++i)
            sol.arrival_h[r][i] = val[model.t_idx[r][i]];
        for (int i = 0; i < route.num_calls(); ++i)
            for (int o = 0; o < inst.num_ports(); ++o) {
                sol.flow.zl(r, i, o) = val[model.zl_idx[r][i][o]];
                sol.flow.zd(r, i, o) = val[model.zd_idx[r][i][o]];
                sol.flow.fl(r, i, o) = val[model.f_idx[r][i][o]];
            }
    }
    sol.theta_h.resize(model.quads.size());
    sol.gamma.resize(model.quads.size());
    for (std::size_t q = 0; q < model.quads.size(); ++q) {
        double theta = 0;
        for (int h = 0; h < 168; ++h)
            theta += (h + 1) * val[model.lam_idx[q][h]];
        sol.theta_h[q] = theta;
        sol.gamma[q] = val[model.gamma_idx[q]];
    }
    evaluate_solution(inst, model.quads, sol);

    rep.f1_linear = eval_objective(model.obj_cost, val);
    rep.f2_linear = eval_objective(model.obj_time, val);
    rep.f1_nonlinear = sol.f1_usd;
    rep.f2_nonlinear = sol.f2_hours;
    const double fuel_rate =
        inst.rates.c_fuel + inst.rates.c_emis * inst.rates.e_sea;
    for (int r = 0; r < nr; ++r) {
        const Route& route = inst.routes[r];
        const int v = sol.vessel_class[r];
        for (int i = 0; i < route.num_legs(); ++i) {
            const double u = sol.speeds_kn[r][i];
            rep.f1_fit_bound += fuel_rate * route.leg_lengths_nm[i] / 24.0 *
                                inst.vessels[v].fuel_coeff_k * u * u *
                                model.fit_residual[v];
        }
    }
    rep.solution = std::move(sol);
    return rep;
}

}  // namespace linermoo
