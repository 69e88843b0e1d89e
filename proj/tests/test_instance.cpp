#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "linermoo/instance_io.hpp"
#include "toys.hpp"

using namespace linermoo;

namespace {
std::string write_temp(const ordered_json& j) {
    static int counter = 0;
    std::string path = "test_instance_tmp_" + std::to_string(counter++) + ".json";
    std::ofstream out(path);
    out << j.dump(2);
    return path;
}
}  // namespace

TEST_CASE("bundled reference instance loads", "[instance]") {
    Instance inst = load_instance(toys::data_path("paper_6routes.json"));
    CHECK(inst.num_ports() == 24);
    CHECK(inst.num_routes() == 6);
    CHECK(inst.num_vessels() == 5);
    // circular rotations: leg count equals call count on every route
    for (const Route& r : inst.routes) CHECK(r.num_legs() == r.num_calls());
    // reference rotation lengths
    CHECK(inst.routes[0].roundtrip_nm() == 2361);
    CHECK(inst.vessels[0].capacity_teu == 2400);
    CHECK(inst.vessels[4].c_opr == 173076);
    CHECK(inst.rates.e_sea == 3.082);
}

TEST_CASE("validation names the violated invariant", "[instance]") {
    Instance base = toys::hub();
    SECTION("self demand") {
        ordered_json j = instance_to_json(base);
        j["demand"].push_back({{"o", 1}, {"d", 1}, {"teu", 5}});
        const std::string path = write_temp(j);
        CHECK_THROWS_WITH(load_instance(path),
                          Catch::Matchers::ContainsSubstring("self-demand"));
        std::remove(path.c_str());
    }
    SECTION("nonpositive leg") {
        ordered_json j = instance_to_json(base);
        j["routes"][0]["leg_lengths_nm"][1] = 0;
        const std::string path = write_temp(j);
        CHECK_THROWS_WITH(load_instance(path),
                          Catch::Matchers::ContainsSubstring("nonpositive leg"));
        std::remove(path.c_str());
    }
    SECTION("malformed file") {
        const std::string path = "test_instance_bad.json";
        std::ofstream(path) << "{ not json";
        CHECK_THROWS_AS(load_instance(path), ParseError);
        std::remove(path.c_str());
    }
    SECTION("repeated port within a rotation") {
        ordered_json j = instance_to_json(base);
        j["routes"][0]["port_calls"] = {0, 0};
        const std::string path = write_temp(j);
        CHECK_THROWS_WITH(load_instance(path),
                          Catch::Matchers::ContainsSubstring("repeats port"));
        std::remove(path.c_str());
    }
}

TEST_CASE("transshipment quadruples", "[instance]") {
    SECTION("two routes sharing one port give both directions") {
        const auto quads = derive_transshipments(toys::hub());
        REQUIRE(quads.size() == 2);
        CHECK(quads[0].port == 1);
        CHECK(quads[1].port == 1);
        CHECK(quads[0].r != quads[1].r);
    }
    SECTION("single route with distinct ports gives none") {
        CHECK(derive_transshipments(toys::single_route()).empty());
    }
    SECTION("reference routes 1 and 5 share four ports, eight quadruples") {
        Instance inst = generate_instance(24, 6, 5, 7, 0);
        const auto quads = derive_transshipments(inst);
        int between = 0;
        for (const auto& q : quads)
            if ((q.r == 0 && q.r_prime == 4) || (q.r == 4 && q.r_prime == 0))
                ++between;
        CHECK(between == 8);
    }
    SECTION("symmetry and lexicographic order") {
        Instance inst = generate_instance(24, 6, 5, 7, 0);
        const auto quads = derive_transshipments(inst);
        auto key = [](const TransshipmentQuad& q) {
            return std::array<int, 4>{q.r, q.i, q.r_prime, q.i_prime};
        };
        for (std::size_t k = 1; k < quads.size(); ++k)
            CHECK(key(quads[k - 1]) < key(quads[k]));
        for (const auto& q : quads) {
            const bool mirrored =
                std::any_of(quads.begin(), quads.end(), [&](const auto& m) {
                    return m.r == q.r_prime && m.i == q.i_prime &&
                           m.r_prime == q.r && m.i_prime == q.i;
                });
            CHECK(mirrored);
        }
    }
}

TEST_CASE("instance generator", "[instance]") {
    SECTION("problem-size row 1") {
        Instance inst = generate_instance(10, 2, 3, 42, 200);
        CHECK(inst.num_ports() == 10);
        CHECK(inst.num_routes() == 2);
        CHECK(inst.num_vessels() == 3);
        CHECK(inst.total_demand() > 0);
    }
    SECTION("zero-demand toy") {
        Instance inst = generate_instance(2, 1, 1, 0, 0);
        CHECK(inst.num_ports() == 2);
        CHECK(inst.total_demand() == 0);
    }
    SECTION("deterministic byte-for-byte") {
        const std::string a = instance_to_json(generate_instance(13, 2, 3, 9, 80)).dump(2);
        const std::string b = instance_to_json(generate_instance(13, 2, 3, 9, 80)).dump(2);
        CHECK(a == b);
    }
    SECTION("synthetic sizes outside the reference network") {
        Instance inst = generate_instance(27, 4, 5, 3, 50);
        CHECK(inst.num_ports() == 27);
        CHECK(inst.num_routes() == 4);
        validate_connectivity(inst);
    }
    SECTION("infeasible combinations are refused") {
        CHECK_THROWS_AS(generate_instance(3, 5, 1, 0, 0), std::invalid_argument);
        CHECK_THROWS_AS(generate_instance(10, 2, 6, 0, 0), std::invalid_argument);
        CHECK_THROWS_AS(generate_instance(1, 1, 1, 0, 0), std::invalid_argument);
    }
    SECTION("save/load round trip") {
        Instance inst = generate_instance(10, 2, 3, 42, 200);
        const std::string path = "test_instance_roundtrip.json";
        save_instance(inst, path);
        Instance back = load_instance(path);
        CHECK(instance_to_json(back).dump() == instance_to_json(inst).dump());
        std::remove(path.c_str());
    }
}
