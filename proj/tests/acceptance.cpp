// Acceptance suite: one test case per criterion, each printing a single
// PASS/FAIL line. Run all of them via ctest or one with e.g.
// `acceptance "[c1]"`.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "linermoo/instance_io.hpp"
#include "linermoo/milp.hpp"
#include "linermoo/nsga2.hpp"
#include "linermoo/ocea.hpp"
#include "linermoo/oracle.hpp"
#include "linermoo/solution_io.hpp"
#include "toys.hpp"

using namespace linermoo;
namespace fs = std::filesystem;

namespace {

void report(int criterion, const std::string& name, bool ok) {
    std::printf("ACCEPTANCE %d (%s): %s\n", criterion, name.c_str(),
                ok ? "PASS" : "FAIL");
    std::fflush(stdout);
    CHECK(ok);
}

double front_hv(const RankedPopulation& pop, Point2 ref) {
    return hv_union(objective_points(pop.members, feasible_front1(pop)), ref);
}

struct ToySetup {
    std::string name;
    Instance instance;
    OracleParams grids;
};

std::vector<ToySetup> acceptance_toys() {
    std::vector<ToySetup> toys;
    {
        ToySetup t{"single-route", toys::single_route(), {}};
        t.grids.speed_step = 0.5;
        t.grids.offset_levels = 1;
        toys.push_back(std::move(t));
    }
    {
        ToySetup t{"hub", toys::hub(), {}};
        t.grids.speed_step = 2.0;
        t.grids.offset_levels = 7;
        toys.push_back(std::move(t));
    }
    {
        // four candidate paths split demand; the two-level weight grid still
        // covers the all-or-nothing and (via repair) the even splits
        ToySetup t{"parallel", toys::parallel(), {}};
        t.grids.speed_step = 2.5;
        t.grids.offset_levels = 5;
        t.grids.weight_levels = 2;
        toys.push_back(std::move(t));
    }
    return toys;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(LINERMOO_CLI_PATH) + " " + args;
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("criterion 1: metaheuristics reach the oracle front", "[c1]") {
    bool ok = true;
    for (const ToySetup& toy : acceptance_toys()) {
        Problem prob = Problem::build(toy.instance);
        OracleResult oracle = oracle_front(prob, toy.grids);
        if (oracle.front.empty()) {
            ok = false;
            std::printf("  %s: oracle front is empty\n", toy.name.c_str());
            continue;
        }
        std::vector<Point2> oracle_pts;
        for (const Member& m : oracle.front)
            oracle_pts.push_back({m.solution.f1_usd, m.solution.f2_hours});
        const Point2 ref = scaled_nadir_ref(oracle_pts);
        const double oracle_hv = hv_union(oracle_pts, ref);
        for (const std::string algo : {"nsga2", "ocea"}) {
            int hits = 0;
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                const auto start = std::chrono::steady_clock::now();
                double hv = 0;
                if (algo == "nsga2") {
                    Nsga2Params params;
                    params.pop_size = 100;
                    params.generations = 200;
                    params.seed = seed;
                    hv = front_hv(nsga2_evolve(prob, params), ref);
                } else {
                    OceaParams params;
                    params.archive_size = 100;
                    params.generations = 200;
                    params.seed = seed;
                    Archive arch = run_ocea(prob, params);
                    hv = front_hv(rank_members(std::move(arch.entries)), ref);
                }
                const double secs =
                    std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
                if (secs > 60.0) ok = false;
                if (hv >= 0.95 * oracle_hv) ++hits;
            }
            std::printf("  %s/%s: %d of 5 seeds reached 95%% oracle HV\n",
                        toy.name.c_str(), algo.c_str(), hits);
            if (hits < 4) ok = false;
        }
    }
    report(1, "oracle equivalence", ok);
}

TEST_CASE("criterion 2: emitted and decoded solutions are feasible", "[c2]") {
    bool ok = true;
    Instance inst = load_instance(toys::data_path("instance_10_2_3.json"));
    Problem prob = Problem::build(inst);

    // emitted front: every residual within tolerance, integers exact
    Nsga2Params params;
    params.pop_size = 60;
    params.generations = 60;
    params.seed = 3;
    std::vector<Member> front = front_members(nsga2_evolve(prob, params));
    if (front.empty()) ok = false;
    for (const Member& m : front) {
        const ConstraintReport& r = m.solution.residuals;
        if (!(r.capacity <= kFeasTol && r.weekly <= kFeasTol &&
              r.theta_link <= kFeasTol && r.gamma_bounds <= kFeasTol &&
              r.speed_bounds <= kFeasTol && r.start_bounds <= kFeasTol))
            ok = false;
        for (int rt = 0; rt < inst.num_routes(); ++rt) {
            if (m.solution.n_r[rt] < inst.routes[rt].n_min ||
                m.solution.n_r[rt] > inst.routes[rt].n_max)
                ok = false;
            if (m.solution.vessel_class[rt] < 0 ||
                m.solution.vessel_class[rt] >= inst.num_vessels())
                ok = false;
            if (m.solution.gamma[0] != std::floor(m.solution.gamma[0]))
                ok = false;
        }
    }

    // structural identities are exactly zero on random decoded genotypes
    Rng rng = sub_stream(2024, "acceptance-feasibility");
    for (int k = 0; k < 10000; ++k) {
        Solution sol = decode(prob, repair(prob, random_genotype(prob, rng)));
        if (sol.residuals.demand_balance != 0.0 ||
            sol.residuals.flow_conservation != 0.0 ||
            sol.residuals.no_return != 0.0 ||
            sol.residuals.no_origin_discharge != 0.0 ||
            sol.residuals.negativity != 0.0) {
            ok = false;
            break;
        }
    }
    report(2, "feasibility by construction", ok);
}

TEST_CASE("criterion 3: nondominated sorting matches the pairwise oracle",
          "[c3]") {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 100 && ok; ++seed) {
        Rng rng = sub_stream(seed, "acceptance-sort");
        std::vector<ObjPoint> pts(1000);
        for (ObjPoint& p : pts) {
            p.f1 = rng.uniform(0, 1000);
            p.f2 = rng.uniform(0, 1000);
            p.violation = rng.uniform01() < 0.25 ? rng.uniform(0, 10) : 0;
        }
        const auto fast = fast_nondominated_sort(pts);
        // oracle: peel layers with pairwise scans
        std::vector<std::vector<int>> oracle;
        std::vector<bool> done(pts.size(), false);
        std::size_t left = pts.size();
        while (left > 0) {
            std::vector<int> layer;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (done[i]) continue;
                bool dominated = false;
                for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
                    dominated = !done[j] && i != j &&
                                constrained_dominates(pts[j], pts[i]);
                if (!dominated) layer.push_back(static_cast<int>(i));
            }
            for (int i : layer) done[i] = true;
            left -= layer.size();
            oracle.push_back(std::move(layer));
        }
        if (fast != oracle) ok = false;
    }
    report(3, "dominance sorting oracle", ok);
}

TEST_CASE("criterion 4: hypervolume against Monte Carlo", "[c4]") {
    bool ok = true;
    Rng gen = sub_stream(77, "acceptance-hv-fronts");
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point2> pts;
        double x = gen.uniform(0, 4);
        double y = gen.uniform(120, 160);
        for (int k = 0; k < 20; ++k) {
            pts.push_back({x, y});
            x += gen.uniform(0.5, 6);
            y -= gen.uniform(0.5, 6);
        }
        Front2D front(pts);
        const Point2 lo = {front.points().front()[0],
                           front.points().back()[1]};
        const Point2 ref = {front.points().back()[0] + 2,
                            front.points().front()[1] + 2};
        const double exact = hypervolume_2d(front, ref);
        // stratified jittered sampling, 10^6 cells
        Rng mc = sub_stream(1000 + trial, "acceptance-hv-mc");
        const int grid = 1000;
        const double dx = (ref[0] - lo[0]) / grid;
        const double dy = (ref[1] - lo[1]) / grid;
        std::int64_t hits = 0;
        // front sorted ascending in x with strictly descending y: for a
        // sample, binary search the last point with px <= sx
        const auto& fp = front.points();
        for (int cx = 0; cx < grid; ++cx) {
            for (int cy = 0; cy < grid; ++cy) {
                const double sx = lo[0] + (cx + mc.uniform01()) * dx;
                const double sy = lo[1] + (cy + mc.uniform01()) * dy;
                auto it = std::upper_bound(
                    fp.begin(), fp.end(), sx,
                    [](double v, const Point2& p) { return v < p[0]; });
                if (it != fp.begin() && (*std::prev(it))[1] <= sy) ++hits;
            }
        }
        const double box = (ref[0] - lo[0]) * (ref[1] - lo[1]);
        const double estimate =
            box * static_cast<double>(hits) / (1.0 * grid * grid);
        if (std::abs(exact - estimate) > 1e-3 * exact) {
            std::printf("  front %d: exact %.8f vs MC %.8f\n", trial, exact,
                        estimate);
            ok = false;
        }
        // contributions equal the two-subtraction definition exactly
        for (std::size_t i = 0; i < front.size(); ++i) {
            const double direct = hv_contribution(front, i, ref);
            const double two_sub =
                hypervolume_2d(front, ref) -
                hypervolume_2d(front.without(i), ref);
            if (direct != two_sub) ok = false;
        }
    }
    report(4, "hypervolume correctness", ok);
}

TEST_CASE("criterion 5: archive invariants over a full OCEA run", "[c5]") {
    bool ok = true;
    Instance inst = toys::hub();
    Problem prob = Problem::build(inst);
    OceaParams params;
    params.archive_size = 100;
    params.generations = 60;
    params.seed = 11;
    int updates = 0;
    int hv_checks = 0;
    params.on_update = [&](const EsocEvent& ev) {
        ++updates;
        if (ev.archive_size != 100) ok = false;
        if (ev.cluster_count > params.max_clusters) ok = false;
        if (ev.hv_checked) {
            ++hv_checks;
            if (ev.hv_post < ev.hv_pre - 1e-9) ok = false;
        }
    };
    Archive arch = run_ocea(prob, params);
    if (updates != params.archive_size * params.generations) ok = false;
    if (hv_checks == 0) ok = false;
    if (arch.entries.size() != 100) ok = false;
    if (static_cast<int>(arch.clusters.size()) > params.max_clusters)
        ok = false;
    std::printf("  %d updates, %d single-front hypervolume checks\n", updates,
                hv_checks);
    report(5, "archive update invariants", ok);
}

TEST_CASE("criterion 6: fuel model laws", "[c6]") {
    bool ok = true;
    Instance inst = toys::hub();
    for (const VesselClass& v : inst.vessels)
        for (double u : {14.0, 16.5, 20.0, 24.0})
            for (double payload : {0.0, 1000.0, 4000.0})
                if (fuel_tons_per_day(v, 2 * u, payload, inst.rates) !=
                    8.0 * fuel_tons_per_day(v, u, payload, inst.rates))
                    ok = false;
    // emission-to-fuel cost ratio: 32 * 3.082 / 500
    Problem prob = Problem::build(inst);
    Rng rng = sub_stream(6, "acceptance-fuel");
    const double expected = 32.0 * 3.082 / 500.0;
    for (int k = 0; k < 50; ++k) {
        Solution sol = decode(prob, repair(prob, random_genotype(prob, rng)));
        const double ratio = sol.breakdown.emission_sea / sol.breakdown.fuel;
        if (std::abs(ratio - expected) > 1e-12) ok = false;
    }
    report(6, "fuel model", ok);
}

TEST_CASE("criterion 7: the exported MILP is faithful", "[c7]") {
    bool ok = true;
    Instance inst = toys::hub();
    Problem prob = Problem::build(inst);
    MilpModel model = build_milp(inst, 1.0);
    // on-grid feasible solution (integer speeds, whole-hour lags)
    Genotype g;
    g.genes.assign(prob.layout.size(), 0.0);
    for (int r = 0; r < 2; ++r)
        for (int i = 0; i < 2; ++i)
            g.genes[prob.layout.speed_start[r] + i] = 20;
    g.genes[prob.layout.class_start + 0] = 1;
    g.genes[prob.layout.class_start + 1] = 1;
    g.genes[prob.layout.offset_start + 0] = 0.56;
    g.genes[prob.layout.offset_start + 1] = 48;
    for (const auto& grp : prob.layout.weight_groups)
        for (int k = 0; k < grp.count; ++k) g.genes[grp.start + k] = 1.0;
    Solution sol = decode(prob, g);
    if (!sol.residuals.feasible()) ok = false;
    try {
        const std::vector<double> val =
            assignment_from_solution(model, inst, sol);
        const VerifyReport rep = verify_assignment(model, inst, val);
        if (!rep.rows_ok) {
            ok = false;
            std::printf("  violated row: %s\n",
                        rep.first_violated_row.c_str());
        }
        if (std::abs(rep.f2_linear - rep.f2_nonlinear) > 1e-9) ok = false;
        if (std::abs(rep.f1_linear - rep.f1_nonlinear) >
            rep.f1_fit_bound + 1e-9)
            ok = false;
        std::printf("  F1 gap %.6f within fit bound %.6f; F2 gap %.3g\n",
                    std::abs(rep.f1_linear - rep.f1_nonlinear),
                    rep.f1_fit_bound,
                    std::abs(rep.f2_linear - rep.f2_nonlinear));
    } catch (const std::exception& e) {
        std::printf("  conversion failed: %s\n", e.what());
        ok = false;
    }
    report(7, "MILP faithfulness", ok);
}

TEST_CASE("criterion 8: desk-scale magnitudes and front-size trend", "[c8]") {
    bool ok = true;
    {
        Instance inst = load_instance(toys::data_path("instance_10_2_3.json"));
        Problem prob = Problem::build(inst);
        OceaParams params;
        params.archive_size = 100;
        params.generations = 150;
        params.seed = 1;
        Archive arch = run_ocea(prob, params);
        RankedPopulation pop = rank_members(std::move(arch.entries));
        const auto front = feasible_front1(pop);
        if (front.empty()) ok = false;
        double best_f1 = 1e300, best_f2 = 1e300;
        for (int i : front) {
            best_f1 = std::min(best_f1, pop.members[i].solution.f1_usd);
            best_f2 = std::min(best_f2, pop.members[i].solution.f2_hours);
        }
        std::printf("  (10,2,3): best F1 %.4g USD/week, best F2 %.4g h\n",
                    best_f1, best_f2);
        if (!(best_f1 >= 1e5 && best_f1 <= 1e7)) ok = false;
        if (!(best_f2 >= 1e2 && best_f2 <= 1e4)) ok = false;
    }
    {
        Instance inst = load_instance(toys::data_path("instance_13_2_3.json"));
        Problem prob = Problem::build(inst);
        std::vector<std::size_t> ocea_sizes, nsga_sizes;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            OceaParams op;
            op.archive_size = 100;
            op.generations = 120;
            op.seed = seed;
            Archive arch = run_ocea(prob, op);
            RankedPopulation oc = rank_members(std::move(arch.entries));
            ocea_sizes.push_back(feasible_front1(oc).size());
            Nsga2Params np;
            np.pop_size = 100;
            np.generations = 120;
            np.seed = seed;
            RankedPopulation ns = nsga2_evolve(prob, np);
            nsga_sizes.push_back(feasible_front1(ns).size());
        }
        std::sort(ocea_sizes.begin(), ocea_sizes.end());
        std::sort(nsga_sizes.begin(), nsga_sizes.end());
        std::printf("  (13,2,3): median front size OCEA %zu vs NSGA-II %zu\n",
                    ocea_sizes[2], nsga_sizes[2]);
        if (ocea_sizes[2] < nsga_sizes[2]) ok = false;
    }
    report(8, "magnitude bands and trend", ok);
}

TEST_CASE("criterion 9: byte-identical reruns", "[c9]") {
    bool ok = true;
    fs::remove_all("acceptance_c9");
    fs::create_directories("acceptance_c9");
    const std::string inst =
        toys::data_path("instance_10_2_3.json");
    for (const char* threads : {"1", "2"}) {
        const std::string base =
            std::string("acceptance_c9/t") + threads;
        const std::string common =
            "solve --instance " + inst +
            " --algo ocea --seed 5 --generations 30 --pop 40 --out ";
        const std::string env =
            std::string("LINERMOO_THREADS=") + threads + " ";
        if (std::system((env + LINERMOO_CLI_PATH + " " + common + base +
                         "_a > /dev/null")
                            .c_str()) != 0)
            ok = false;
        if (std::system((env + LINERMOO_CLI_PATH + " " + common + base +
                         "_b > /dev/null")
                            .c_str()) != 0)
            ok = false;
        if (slurp(base + "_a/front.csv") != slurp(base + "_b/front.csv"))
            ok = false;
        if (slurp(base + "_a/front.csv").empty()) ok = false;
        if (slurp(base + "_a/progress.csv") != slurp(base + "_b/progress.csv"))
            ok = false;
    }
    // LP exports byte-identical
    if (cli("export-milp --instance " + inst +
            " --out acceptance_c9/a.lp --speed-grid-step 2 > /dev/null") != 0)
        ok = false;
    if (cli("export-milp --instance " + inst +
            " --out acceptance_c9/b.lp --speed-grid-step 2 > /dev/null") != 0)
        ok = false;
    if (slurp("acceptance_c9/a.lp") != slurp("acceptance_c9/b.lp")) ok = false;
    if (slurp("acceptance_c9/a.lp").empty()) ok = false;
    fs::remove_all("acceptance_c9");
    report(9, "determinism", ok);
}
