#include "frp/cli.hpp"
#include "frp/laminate_io.hpp"
#include "test_support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

using namespace frp;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome frp_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "frp");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string path(const std::string& rel) { return test::data(rel).string(); }

// Seed database built once per test binary.
const std::string& seed_db() {
    static test::TempDir dir;
    static const std::string db = [] {
        const auto p = (dir / "seed.json").string();
        const auto r = frp_cli({"--db", p, "ingest", "--polymers", path("seed/polymers.csv"), "--fibers",
                                path("seed/fibers.csv")});
        REQUIRE(r.code == cli::kExitOk);
        return p;
    }();
    return db;
}

}  // namespace

TEST_CASE("ingest reports counts and writes the database") {
    const auto& db = seed_db();
    CHECK(std::filesystem::exists(db));
    test::TempDir tmp;
    const auto r = frp_cli({"--db", (tmp / "db.json").string(), "ingest", "--polymers",
                            path("seed/polymers.csv"), "--fibers", path("seed/fibers.csv")});
    CHECK(r.code == 0);
    CHECK(r.out.find("11 ingested, 0 rejected") != std::string::npos);
    CHECK(r.out.find("7 ingested, 0 rejected") != std::string::npos);
}

TEST_CASE("ingest with a bad row exits 1 and writes nothing") {
    test::TempDir tmp;
    auto csv = test::slurp(test::data("seed/polymers.csv"));
    const auto at = csv.find("Very High");
    csv.replace(at, 9, "Exellent");
    test::write_file(tmp / "bad.csv", csv);
    const auto r = frp_cli({"--db", (tmp / "db.json").string(), "ingest", "--polymers",
                            (tmp / "bad.csv").string(), "--fibers", path("seed/fibers.csv")});
    CHECK(r.code == cli::kExitValidation);
    CHECK(r.err.find("Exellent") != std::string::npos);
    CHECK(r.err.find("thermal_expansion") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(tmp / "db.json"));
}

TEST_CASE("select-matrix CSV and JSON") {
    const auto csv = frp_cli({"--db", seed_db(), "select-matrix", "--requirements",
                              path("requirements/matrix_reference.json"), "--top", "3"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("rank,name,strength\n1,Polyetherimide,0.999995\n", 0) == 0);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 4);

    const auto js = frp_cli({"--db", seed_db(), "--format", "json", "select-matrix", "--requirements",
                             path("requirements/matrix_reference.json")});
    REQUIRE(js.code == 0);
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j["results"].size() == 11);
    CHECK(j["results"][0]["name"] == "Polyetherimide");
    CHECK(j["results"][0]["strength"].get<double>() == doctest::Approx(0.99999466990884722).epsilon(1e-13));

    const auto none = frp_cli({"--db", seed_db(), "select-matrix", "--requirements",
                               path("requirements/matrix_reference.json"), "--top", "0"});
    CHECK(none.code == 0);
    CHECK(none.out.empty());
}

TEST_CASE("select-fiber with a matrix and with a bond-strength override") {
    const auto shortc = frp_cli({"--db", seed_db(), "select-fiber", "--requirements",
                                 path("requirements/fiber_reference.json"), "--matrix", "Polyetherimide"});
    REQUIRE(shortc.code == 0);
    CHECK(shortc.out.rfind("class=Short", 0) == 0);
    CHECK(shortc.out.find("1,S-Glass,") != std::string::npos);

    const auto longc = frp_cli({"--db", seed_db(), "--tau-c", "4381.5", "--format", "json", "select-fiber",
                                "--requirements", path("requirements/fiber_reference.json")});
    REQUIRE(longc.code == 0);
    const auto j = nlohmann::json::parse(longc.out);
    CHECK(j["class"] == "Long");
    CHECK(j["results"][0]["name"] == "S-Glass");
    CHECK(j["results"].size() == 7);

    const auto unknown = frp_cli({"--db", seed_db(), "select-fiber", "--requirements",
                                  path("requirements/fiber_reference.json"), "--matrix", "Unobtainium"});
    CHECK(unknown.code == cli::kExitValidation);
    const auto neither = frp_cli({"--db", seed_db(), "select-fiber", "--requirements",
                                  path("requirements/fiber_reference.json")});
    CHECK(neither.code == cli::kExitValidation);
}

TEST_CASE("classify-fiber") {
    const auto named = frp_cli({"--db", seed_db(), "classify-fiber", "--fiber", "S-Glass", "--matrix",
                                "Polyetherimide"});
    CHECK(named.code == 0);
    CHECK(named.out == "l_c=26.0804 class=Short\n");

    const auto raw = frp_cli({"--tau-c", "4381.5", "classify-fiber", "--sigma", "3450", "--diameter", "0.635",
                              "--length", "25"});
    CHECK(raw.code == 0);
    CHECK(raw.out == "l_c=0.25 class=Long\n");

    const auto zero = frp_cli({"--tau-c", "0", "classify-fiber", "--sigma", "3450", "--diameter", "0.635",
                               "--length", "25"});
    CHECK(zero.code == cli::kExitValidation);
    CHECK(zero.err.find("tau_c") != std::string::npos);

    const auto incomplete = frp_cli({"--tau-c", "42", "classify-fiber", "--sigma", "3450"});
    CHECK(incomplete.code == cli::kExitValidation);
}

TEST_CASE("analyze and sweep outputs re-parse") {
    test::TempDir tmp;
    const auto a = frp_cli({"analyze", "--laminate", path("laminates/graded_7ply.json"), "--out",
                            (tmp / "r.csv").string()});
    REQUIRE(a.code == 0);
    CHECK(a.out.rfind("mean_clme=17000.1", 0) == 0);
    std::ifstream report(tmp / "r.csv");
    const auto table = laminate::parse_report_csv(report);
    CHECK(table.rows.size() == 7);
    CHECK(table.means.clme == doctest::Approx(17000.11275195346).epsilon(1e-15));

    const auto s = frp_cli({"sweep", "--laminate", path("laminates/aligned_7ply.json"), "--thetas", "0:90:15"});
    REQUIRE(s.code == 0);
    std::istringstream sweep(s.out);
    const auto rows = laminate::parse_sweep_csv(sweep);
    REQUIRE(rows.size() == 7);
    CHECK(rows[1].mean_clme == doctest::Approx(27335.700883980637).epsilon(1e-15));
}

TEST_CASE("commands are deterministic") {
    const std::vector<std::vector<std::string>> cmds{
        {"--db", seed_db(), "select-matrix", "--requirements", path("requirements/matrix_reference.json")},
        {"--db", seed_db(), "--format", "json", "--normalize", "select-matrix", "--requirements",
         path("requirements/matrix_reference.json")},
        {"analyze", "--laminate", path("laminates/graded_7ply.json")},
        {"--format", "json", "sweep", "--laminate", path("laminates/aligned_7ply.json"), "--thetas", "0:90:1"},
    };
    for (const auto& c : cmds) {
        const auto first = frp_cli(c);
        const auto second = frp_cli(c);
        CHECK(first.code == 0);
        CHECK(first.out == second.out);
    }
}

TEST_CASE("exit codes") {
    test::TempDir tmp;
    test::write_file(tmp / "bad.json", "{\"plane_volume_cm3\": 250, \"planes\": []}");
    struct Case {
        std::vector<std::string> args;
        int code;
    };
    const std::vector<Case> cases{
        {{}, cli::kExitValidation},
        {{"frobnicate"}, cli::kExitValidation},
        {{"--format", "xml", "analyze", "--laminate", path("laminates/graded_7ply.json")}, cli::kExitValidation},
        {{"analyze"}, cli::kExitValidation},
        {{"analyze", "--laminate", (tmp / "absent.json").string()}, cli::kExitIo},
        {{"analyze", "--laminate", (tmp / "bad.json").string()}, cli::kExitValidation},
        {{"sweep", "--laminate", path("laminates/aligned_7ply.json"), "--thetas", "90:0:15"}, cli::kExitValidation},
        {{"select-matrix", "--requirements", path("requirements/matrix_reference.json")}, cli::kExitValidation},
        {{"--db", (tmp / "nodb.json").string(), "select-matrix", "--requirements",
          path("requirements/matrix_reference.json")},
         cli::kExitIo},
        {{"--db", seed_db(), "select-matrix", "--requirements", path("requirements/fiber_reference.json")},
         cli::kExitValidation},
        {{"--db", seed_db(), "select-matrix", "--requirements", (tmp / "absent.json").string()}, cli::kExitIo},
        {{"analyze", "--laminate", path("laminates/graded_7ply.json"), "--out", (tmp / "no/such/dir.csv").string()},
         cli::kExitIo},
        {{"--help"}, cli::kExitOk},
    };
    for (const auto& c : cases) {
        std::string joined;
        for (const auto& a : c.args) joined += a + " ";
        CAPTURE(joined);
        CHECK(frp_cli(c.args).code == c.code);
    }
}
