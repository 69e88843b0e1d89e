// Command-line front end: instance generation, solving, evaluation, exact
// oracle enumeration, MILP export and plot-data extraction.
//
// Exit codes: 0 success, 2 configuration/input error, 3 guard refusal or
// infeasible-only outcome.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "linermoo/instance_io.hpp"
#include "linermoo/milp.hpp"
#include "linermoo/nsga2.hpp"
#include "linermoo/ocea.hpp"
#include "linermoo/oracle.hpp"
#include "linermoo/solution_io.hpp"

namespace fs = std::filesystem;
using namespace linermoo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;

struct InstanceSource {
    std::string path;
    int gen_ports = 0, gen_routes = 0, gen_vessels = 0;
    double gen_demand_scale = 0;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--instance", path, "Instance JSON file");
        auto* gp = cmd->add_option("--gen-ports", gen_ports, "Generate: ports");
        cmd->add_option("--gen-routes", gen_routes, "Generate: routes")
            ->needs(gp);
        cmd->add_option("--gen-vessels", gen_vessels, "Generate: vessel classes")
            ->needs(gp);
        cmd->add_option("--gen-demand-scale", gen_demand_scale,
                        "Generate: demand scale (TEU)")
            ->needs(gp);
    }

    Instance resolve(CLI::App* cmd, std::uint64_t seed) const {
        const bool gen = cmd->count("--gen-ports") > 0;
        const bool file = !path.empty();
        if (gen == file)
            throw std::invalid_argument(
                "exactly one instance source required (--instance or the "
                "--gen-* options)");
        if (file) return load_instance(path);
        return generate_instance(gen_ports, gen_routes, gen_vessels, seed,
                                 gen_demand_scale);
    }
};

void write_file(const fs::path& p, const std::function<void(std::ostream&)>& fn) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    fn(out);
}

int emit_results(const Problem& prob, const std::vector<Member>& front,
                 const std::string& out_dir, const std::string& progress) {
    if (front.empty()) {
        std::cerr << "error: no feasible solutions found\n";
        return kExitGuard;
    }
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "front.csv", [&](std::ostream& os) {
        write_front_csv(os, prob.inst, front);
    });
    write_file(fs::path(out_dir) / "front.json", [&](std::ostream& os) {
        write_front_json(os, prob, front);
    });
    if (!progress.empty())
        write_file(fs::path(out_dir) / "progress.csv",
                   [&](std::ostream& os) { os << progress; });
    std::cout << "front size: " << front.size() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"liner shipping bi-objective solver toolkit"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "Generate an instance file");
    int g_ports = 10, g_routes = 2, g_vessels = 3;
    std::uint64_t g_seed = 0;
    double g_scale = 100;
    std::string g_out = "instance.json";
    gen->add_option("--ports", g_ports)->required();
    gen->add_option("--routes", g_routes)->required();
    gen->add_option("--vessels", g_vessels)->required();
    gen->add_option("--seed", g_seed)->required();
    gen->add_option("--demand-scale", g_scale)->required();
    gen->add_option("--out", g_out)->required();

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "Run a solver, write the front");
    InstanceSource s_src;
    s_src.add_options(solve);
    std::string s_algo = "nsga2";
    std::uint64_t s_seed = 0;
    int s_generations = 500, s_pop = 100;
    std::string s_out = "out";
    double s_speed_step = 2.0;
    int s_weight_levels = 3, s_offset_levels = 7;
    solve->add_option("--algo", s_algo, "nsga2 | ocea | oracle")
        ->check(CLI::IsMember({"nsga2", "ocea", "oracle"}));
    auto* seed_opt = solve->add_option("--seed", s_seed, "Random seed");
    solve->add_option("--generations", s_generations);
    solve->add_option("--pop", s_pop, "Population / archive size");
    solve->add_option("--out", s_out, "Output directory");
    solve->add_option("--speed-grid-step", s_speed_step, "Oracle speed grid");
    solve->add_option("--weight-levels", s_weight_levels, "Oracle weight grid");
    solve->add_option("--offset-levels", s_offset_levels, "Oracle offset grid");

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "Evaluate one genotype");
    std::string e_instance, e_genotype;
    eval->add_option("--instance", e_instance)->required();
    eval->add_option("--genotype", e_genotype, "Genotype JSON file")->required();

    // ---- oracle ----
    auto* oracle = app.add_subcommand("oracle", "Exact grid-enumeration front");
    std::string o_instance, o_out = "out";
    double o_speed_step = 2.0;
    int o_weight_levels = 3, o_offset_levels = 7;
    oracle->add_option("--instance", o_instance)->required();
    oracle->add_option("--out", o_out);
    oracle->add_option("--speed-grid-step", o_speed_step);
    oracle->add_option("--weight-levels", o_weight_levels);
    oracle->add_option("--offset-levels", o_offset_levels);

    // ---- export-milp ----
    auto* milp = app.add_subcommand("export-milp", "Write the linearized model");
    std::string m_instance, m_out = "model.lp", m_objective = "cost";
    double m_step = 1.0;
    std::optional<double> m_epsilon;
    double m_epsilon_value = 0;
    milp->add_option("--instance", m_instance)->required();
    milp->add_option("--out", m_out);
    milp->add_option("--objective", m_objective)
        ->check(CLI::IsMember({"cost", "time"}));
    milp->add_option("--speed-grid-step", m_step);
    auto* eps_opt = milp->add_option("--epsilon", m_epsilon_value,
                                     "Add time budget row F2 <= epsilon (hours)");

    // ---- plotdata ----
    auto* plot = app.add_subcommand("plotdata", "Two-column plot files");
    std::vector<std::string> p_fronts;
    std::string p_out = "plots";
    plot->add_option("--front", p_fronts, "front.csv input (repeatable)")
        ->required();
    plot->add_option("--out", p_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (gen->parsed()) {
            Instance inst =
                generate_instance(g_ports, g_routes, g_vessels, g_seed, g_scale);
            save_instance(inst, g_out);
            std::cout << "wrote " << g_out << " (" << inst.num_ports()
                      << " ports, " << inst.num_routes() << " routes, "
                      << inst.num_vessels() << " vessel classes)\n";
            return kExitOk;
        }

        if (solve->parsed()) {
            if (s_algo != "oracle" && seed_opt->count() == 0) {
                std::cerr << "error: --seed is required for stochastic runs\n";
                return kExitConfig;
            }
            Instance inst = s_src.resolve(solve, s_seed);
            Problem prob = Problem::build(std::move(inst));
            std::vector<Member> front;
            std::string progress;
            if (s_algo == "nsga2") {
                std::ostringstream plog;
                Nsga2Params params;
                params.pop_size = s_pop;
                params.generations = s_generations;
                params.seed = s_seed;
                params.progress = &plog;
                RankedPopulation pop = nsga2_evolve(prob, params);
                front = front_members(pop);
                progress = plog.str();
            } else if (s_algo == "ocea") {
                std::ostringstream plog;
                OceaParams params;
                params.archive_size = s_pop;
                params.generations = s_generations;
                params.seed = s_seed;
                params.progress = &plog;
                Archive archive = run_ocea(prob, params);
                front = front_members(rank_members(std::move(archive.entries)));
                progress = plog.str();
            } else {
                OracleParams params;
                params.speed_step = s_speed_step;
                params.weight_levels = s_weight_levels;
                params.offset_levels = s_offset_levels;
                OracleResult res = oracle_front(prob, params);
                front = std::move(res.front);
            }
            return emit_results(prob, front, s_out, progress);
        }

        if (eval->parsed()) {
            Instance inst = load_instance(e_instance);
            Problem prob = Problem::build(std::move(inst));
            std::ifstream in(e_genotype);
            if (!in) {
                std::cerr << "error: cannot open genotype file\n";
                return kExitConfig;
            }
            ordered_json gj;
            in >> gj;
            Genotype g = genotype_from_json(prob, gj);
            Solution sol = decode(prob, g);
            std::cout << "term,value\n";
            for (const auto& [name, value] : sol.breakdown.items())
                std::cout << name << ',' << detail::g17(value) << "\n";
            std::cout << "F1_total," << detail::g17(sol.f1_usd) << "\n";
            std::cout << "F2_hours," << detail::g17(sol.f2_hours) << "\n";
            std::cout << "total_violation,"
                      << detail::g17(sol.residuals.total_violation) << "\n";
            std::cout << "feasible," << (sol.residuals.feasible() ? 1 : 0)
                      << "\n";
            return kExitOk;
        }

        if (oracle->parsed()) {
            Instance inst = load_instance(o_instance);
            Problem prob = Problem::build(std::move(inst));
            OracleParams params;
            params.speed_step = o_speed_step;
            params.weight_levels = o_weight_levels;
            params.offset_levels = o_offset_levels;
            OracleResult res = oracle_front(prob, params);
            std::cout << "enumerated " << res.enumerated << " genotypes\n";
            return emit_results(prob, res.front, o_out, "");
        }

        if (milp->parsed()) {
            Instance inst = load_instance(m_instance);
            MilpModel model = build_milp(inst, m_step);
            if (eps_opt->count()) m_epsilon = m_epsilon_value;
            write_lp(model, m_out,
                     m_objective == "cost" ? MilpObjective::Cost
                                           : MilpObjective::Time,
                     m_epsilon);
            std::cout << "variables=" << model.variable_count()
                      << " constraints=" << model.constraint_count() << "\n";
            for (const auto& [label, count] : model.var_groups)
                std::cout << "var_group " << label << "=" << count << "\n";
            for (const auto& [label, count] : model.row_groups)
                std::cout << "row_group " << label << "=" << count << "\n";
            return kExitOk;
        }

        if (plot->parsed()) {
            fs::create_directories(p_out);
            for (const std::string& fpath : p_fronts) {
                std::ifstream in(fpath);
                if (!in) {
                    std::cerr << "error: cannot open " << fpath << "\n";
                    return kExitConfig;
                }
                std::string header;
                if (!std::getline(in, header)) {
                    std::cerr << "error: malformed front CSV (empty file)\n";
                    return kExitConfig;
                }
                std::vector<std::string> cols;
                std::stringstream hs(header);
                std::string col;
                while (std::getline(hs, col, ',')) cols.push_back(col);
                int f1_col = -1, f2_col = -1;
                for (std::size_t c = 0; c < cols.size(); ++c) {
                    if (cols[c] == "F1_usd") f1_col = static_cast<int>(c);
                    if (cols[c] == "F2_hours") f2_col = static_cast<int>(c);
                }
                if (f1_col < 0 || f2_col < 0) {
                    std::cerr << "error: malformed front CSV (missing F1_usd/"
                                 "F2_hours columns)\n";
                    return kExitConfig;
                }
                std::vector<Point2> pts;
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    std::vector<std::string> fields;
                    std::stringstream ls(line);
                    std::string f;
                    while (std::getline(ls, f, ',')) fields.push_back(f);
                    if (static_cast<int>(fields.size()) <=
                        std::max(f1_col, f2_col)) {
                        std::cerr << "error: malformed front CSV row\n";
                        return kExitConfig;
                    }
                    char* end1 = nullptr;
                    char* end2 = nullptr;
                    const double f1 =
                        std::strtod(fields[f1_col].c_str(), &end1);
                    const double f2 =
                        std::strtod(fields[f2_col].c_str(), &end2);
                    if (*end1 != '\0' || *end2 != '\0') {
                        std::cerr << "error: malformed front CSV value\n";
                        return kExitConfig;
                    }
                    pts.push_back({f1, f2});
                }
                std::sort(pts.begin(), pts.end());
                if (pts.empty())
                    std::cerr << "warning: empty front in " << fpath << "\n";
                const fs::path out_path =
                    fs::path(p_out) / (fs::path(fpath).stem().string() + ".dat");
                write_file(out_path, [&](std::ostream& os) {
                    for (const Point2& p : pts)
                        os << detail::g17(p[0]) << ' ' << detail::g17(p[1])
                           << "\n";
                });
            }
            return kExitOk;
        }
    } catch (const OracleGuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
