#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "linermoo/solution_io.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(LINERMOO_CLI_PATH) + " " + args;
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("gen, solve, eval and plotdata chain together", "[cli]") {
    TempDir dir("cli_chain");
    const std::string inst = (dir.path / "inst.json").string();
    REQUIRE(run("gen --ports 10 --routes 2 --vessels 3 --seed 42 "
                "--demand-scale 200 --out " + inst + " > /dev/null") == 0);
    linermoo::Instance loaded = linermoo::load_instance(inst);
    CHECK(loaded.num_ports() == 10);

    const std::string out = (dir.path / "run").string();
    REQUIRE(run("solve --instance " + inst +
                " --algo nsga2 --seed 1 --generations 20 --pop 30 --out " +
                out + " > /dev/null") == 0);
    CHECK(fs::exists(out + "/front.csv"));
    CHECK(fs::exists(out + "/front.json"));
    CHECK(fs::exists(out + "/progress.csv"));
    const std::string front = slurp(out + "/front.csv");
    CHECK(front.rfind("solution_id,F1_usd,F2_hours,feasible,", 0) == 0);

    // every front row re-evaluates to its printed objectives, and rows are
    // mutually nondominated
    {
        std::ifstream fin(out + "/front.csv");
        std::string line;
        std::getline(fin, line);  // header
        std::vector<std::array<double, 2>> rows;
        while (std::getline(fin, line)) {
            std::stringstream ls(line);
            std::string field;
            std::vector<std::string> fields;
            while (std::getline(ls, field, ',')) fields.push_back(field);
            REQUIRE(fields.size() >= 4);
            rows.push_back({std::strtod(fields[1].c_str(), nullptr),
                            std::strtod(fields[2].c_str(), nullptr)});
            CHECK(fields[3] == "1");
        }
        REQUIRE_FALSE(rows.empty());
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < rows.size(); ++b)
                if (a != b)
                    CHECK_FALSE(rows[a][0] <= rows[b][0] &&
                                rows[a][1] <= rows[b][1]);
        std::ifstream jin(out + "/front.json");
        linermoo::ordered_json fj;
        jin >> fj;
        REQUIRE(fj["solutions"].size() == rows.size());
        linermoo::Problem prob = linermoo::Problem::build(loaded);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            linermoo::Genotype g = linermoo::genotype_from_json(
                prob, fj["solutions"][k]["genotype"]);
            linermoo::Solution sol = linermoo::decode(prob, g);
            CHECK_THAT(sol.f1_usd,
                       Catch::Matchers::WithinRel(rows[k][0], 1e-6));
            CHECK_THAT(sol.f2_hours,
                       Catch::Matchers::WithinRel(rows[k][1], 1e-6));
        }
    }

    // evaluate the first solution from front.json and compare to front.csv
    {
        std::ifstream in(out + "/front.json");
        linermoo::ordered_json fj;
        in >> fj;
        REQUIRE_FALSE(fj["solutions"].empty());
        const std::string gpath = (dir.path / "geno.json").string();
        std::ofstream(gpath) << fj["solutions"][0]["genotype"].dump();
        const std::string epath = (dir.path / "eval.csv").string();
        REQUIRE(run("eval --instance " + inst + " --genotype " + gpath +
                    " > " + epath) == 0);
        const std::string eval_out = slurp(epath);
        CHECK(eval_out.find("term,value") == 0);
        CHECK(eval_out.find("F1_total,") != std::string::npos);
        CHECK(eval_out.find("feasible,1") != std::string::npos);
        const double f1 = fj["solutions"][0]["f1_usd"].get<double>();
        std::istringstream lines(eval_out);
        std::string line;
        double f1_eval = -1;
        while (std::getline(lines, line))
            if (line.rfind("F1_total,", 0) == 0)
                f1_eval = std::strtod(line.c_str() + 9, nullptr);
        CHECK_THAT(f1_eval, Catch::Matchers::WithinRel(f1, 1e-12));
    }

    // the oracle is also reachable as a solve algorithm
    const std::string tiny = (dir.path / "tiny.json").string();
    const std::string oracle_out = (dir.path / "oracle").string();
    REQUIRE(run("gen --ports 3 --routes 2 --vessels 1 --seed 2 "
                "--demand-scale 40 --out " + tiny + " > /dev/null") == 0);
    REQUIRE(run("solve --instance " + tiny +
                " --algo oracle --speed-grid-step 2 --out " + oracle_out +
                " > /dev/null") == 0);
    CHECK(fs::exists(oracle_out + "/front.csv"));

    const std::string plots = (dir.path / "plots").string();
    REQUIRE(run("plotdata --front " + out + "/front.csv --out " + plots +
                " > /dev/null 2>&1") == 0);
    REQUIRE(fs::exists(plots + "/front.dat"));
    // two columns, sorted by the first
    std::istringstream data(slurp(plots + "/front.dat"));
    double prev = -1, x, y;
    int rows = 0;
    while (data >> x >> y) {
        CHECK(x >= prev);
        prev = x;
        ++rows;
    }
    CHECK(rows > 0);
}

TEST_CASE("config errors exit with code 2", "[cli]") {
    TempDir dir("cli_errors");
    SECTION("missing seed for a stochastic run") {
        CHECK(run("solve --gen-ports 4 --gen-routes 2 --gen-vessels 1 "
                  "--gen-demand-scale 10 --algo nsga2 --out " +
                  (dir.path / "x").string() + " 2> /dev/null") == 2);
    }
    SECTION("two instance sources") {
        const std::string inst = (dir.path / "i.json").string();
        REQUIRE(run("gen --ports 4 --routes 2 --vessels 1 --seed 1 "
                    "--demand-scale 10 --out " + inst + " > /dev/null") == 0);
        CHECK(run("solve --instance " + inst +
                  " --gen-ports 4 --gen-routes 2 --gen-vessels 1 "
                  "--gen-demand-scale 10 --algo nsga2 --seed 1 --out " +
                  (dir.path / "x").string() + " 2> /dev/null") == 2);
    }
    SECTION("unknown option") {
        CHECK(run("solve --frobnicate 2> /dev/null") == 2);
    }
    SECTION("missing instance file") {
        CHECK(run("eval --instance nope.json --genotype nope.json "
                  "2> /dev/null") == 2);
    }
    SECTION("malformed plotdata input") {
        const std::string bad = (dir.path / "bad.csv").string();
        std::ofstream(bad) << "not,a,front\n1,2,3\n";
        CHECK(run("plotdata --front " + bad + " --out " +
                  (dir.path / "p").string() + " 2> /dev/null") == 2);
    }
}

TEST_CASE("oracle refuses oversized enumerations with code 3", "[cli]") {
    TempDir dir("cli_guard");
    const std::string inst = (dir.path / "big.json").string();
    REQUIRE(run("gen --ports 24 --routes 6 --vessels 5 --seed 7 "
                "--demand-scale 20 --out " + inst + " > /dev/null") == 0);
    CHECK(run("oracle --instance " + inst + " --out " +
              (dir.path / "o").string() + " 2> /dev/null") == 3);
}

TEST_CASE("empty plotdata input warns but succeeds", "[cli]") {
    TempDir dir("cli_empty");
    const std::string empty = (dir.path / "empty.csv").string();
    std::ofstream(empty)
        << "solution_id,F1_usd,F2_hours,feasible,vessel_classes,n_vessels,"
           "mean_speed_kn\n";
    CHECK(run("plotdata --front " + empty + " --out " +
              (dir.path / "p").string() + " 2> /dev/null") == 0);
    CHECK(fs::exists(dir.path / "p" / "empty.dat"));
    CHECK(slurp(dir.path / "p" / "empty.dat").empty());
}

TEST_CASE("plotdata sorts unsorted fronts", "[cli]") {
    TempDir dir("cli_unsorted");
    const std::string csv = (dir.path / "three.csv").string();
    std::ofstream(csv)
        << "solution_id,F1_usd,F2_hours,feasible,vessel_classes,n_vessels,"
           "mean_speed_kn\n"
           "0,681345,1654,1,1,3,20\n"
           "1,671307,1682,1,1,3,18\n"
           "2,676548,1681,1,1,3,19\n";
    REQUIRE(run("plotdata --front " + csv + " --out " +
                (dir.path / "p").string() + " > /dev/null") == 0);
    std::istringstream data(slurp(dir.path / "p" / "three.dat"));
    std::vector<double> f1s;
    double x, y;
    while (data >> x >> y) f1s.push_back(x);
    REQUIRE(f1s.size() == 3);
    CHECK(f1s == std::vector<double>{671307, 676548, 681345});
}

TEST_CASE("export-milp writes a deterministic model", "[cli]") {
    TempDir dir("cli_milp");
    const std::string inst = (dir.path / "i.json").string();
    REQUIRE(run("gen --ports 3 --routes 2 --vessels 2 --seed 5 "
                "--demand-scale 50 --out " + inst + " > /dev/null") == 0);
    const std::string lp1 = (dir.path / "m1.lp").string();
    const std::string lp2 = (dir.path / "m2.lp").string();
    REQUIRE(run("export-milp --instance " + inst + " --out " + lp1 +
                " > /dev/null") == 0);
    REQUIRE(run("export-milp --instance " + inst + " --out " + lp2 +
                " > /dev/null") == 0);
    CHECK(slurp(lp1) == slurp(lp2));
    CHECK(slurp(lp1).find("Minimize") != std::string::npos);
    // counts are reported
    const std::string report = (dir.path / "counts.txt").string();
    REQUIRE(run("export-milp --instance " + inst + " --out " + lp1 + " > " +
                report) == 0);
    CHECK(slurp(report).find("variables=") != std::string::npos);
    // the epsilon-constraint variant adds one row
    const std::string lp3 = (dir.path / "m3.lp").string();
    REQUIRE(run("export-milp --instance " + inst + " --out " + lp3 +
                " --objective cost --epsilon 500 > /dev/null") == 0);
    CHECK(slurp(lp3).find("eps_f2:") != std::string::npos);
}
