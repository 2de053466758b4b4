// End-to-end CLI tests: golden files, formats, exit codes, determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#ifndef FRACSUM_CLI_PATH
#error "FRACSUM_CLI_PATH must be defined"
#endif
#ifndef FRACSUM_GOLDEN_DIR
#error "FRACSUM_GOLDEN_DIR must be defined"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(FRACSUM_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("default phi table matches the golden file byte for byte") {
    auto r = run_cli("table --function phi");
    CHECK(r.exit_code == 0);
    CHECK(r.out == slurp(std::string(FRACSUM_GOLDEN_DIR) + "/table_phi_default.csv"));
}

TEST_CASE("default sigma table matches the golden file byte for byte") {
    auto r = run_cli("table --function sigma");
    CHECK(r.exit_code == 0);
    CHECK(r.out == slurp(std::string(FRACSUM_GOLDEN_DIR) + "/table_sigma_default.csv"));
}

TEST_CASE("psi extension row") {
    auto r = run_cli("table --function psi --xs 10");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("psi,10,39,35.00,4.00,blocks") != std::string::npos);
    CHECK(r.out.find("extension data") != std::string::npos);
}

TEST_CASE("the phi x=1000 sign flag appears whenever that row is present") {
    auto r = run_cli("table --function phi --xs 1000");
    CHECK(r.out.find("-146.41") != std::string::npos);
    CHECK(r.out.find("reference data prints E1(1000) as 146.41") != std::string::npos);
}

TEST_CASE("output determinism for identical configs") {
    std::string args = "table --function all --xs 10,100,1000 --strategy all";
    auto a = run_cli(args);
    auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    auto c = run_cli("scan --function phi --xs '10:100000:geometric(10)'");
    auto d = run_cli("scan --function phi --xs '10:100000:geometric(10)'");
    CHECK(c.out == d.out);
}

TEST_CASE("csv round-trip recovers each numeric field at the emitted precision") {
    auto r = run_cli("table --function all --precision 3");
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() >= 16);  // header + 15 rows
    for (size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 6);
        // sum parses exactly as an integer
        CHECK(std::to_string(std::stoull(rows[i][2])) == rows[i][2]);
        // main/error re-render identically at the emitted precision
        for (int col : {3, 4}) {
            double v = std::stod(rows[i][static_cast<size_t>(col)]);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3f", v);
            CHECK(std::string(buf) == rows[i][static_cast<size_t>(col)]);
        }
    }
}

TEST_CASE("json rows carry the documented keys") {
    auto r = run_cli("table --function phi --xs 10,100 --format json");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 2);
    for (const auto& row : j) {
        CHECK(row.contains("fn"));
        CHECK(row.contains("x"));
        CHECK(row.contains("sum"));
        CHECK(row.contains("main"));
        CHECK(row.contains("error"));
        CHECK(row.contains("strategy"));
    }
    CHECK(j[0]["sum"] == 17);
    CHECK(j[1]["sum"] == 275);
}

TEST_CASE("verify passes and prints the suite summary") {
    auto r = run_cli("verify");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("all 7 suites passed") != std::string::npos);
}

TEST_CASE("fault injection is caught by the strategy-agreement suite") {
    auto r = run_cli("verify --inject-fault sigma-table-off-by-one");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("strategy agreement: FAIL") != std::string::npos);
    CHECK(r.out.find("smallest failing x = 7") != std::string::npos);
}

TEST_CASE("verify json format") {
    auto r = run_cli("verify --format json");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["all_passed"] == true);
    CHECK(j["suites"].size() == 7);
}

TEST_CASE("config errors exit with code 2") {
    CHECK(run_cli("table --function nope").exit_code == 2);
    CHECK(run_cli("table --xs abc").exit_code == 2);
    CHECK(run_cli("table --strategy sideways").exit_code == 2);
    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("scan --format yaml").exit_code == 2);
}

TEST_CASE("budget violations exit with code 3 and leave an error row") {
    auto r = run_cli("table --strategy decomposition --xs 2000 --budget 1000");
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("exceeds decomposition budget") != std::string::npos);
    auto ok = run_cli("table --strategy decomposition --xs 2000 --budget 3000");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("phi,2000,") != std::string::npos);
}

TEST_CASE("scan output: sign changes, extension flags") {
    auto r = run_cli("scan --function all --xs '10:1000000:geometric(10)'");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("phi: E1 sign changes: [10,100]") != std::string::npos);
    CHECK(r.out.find("sigma: E2 sign changes: none") != std::string::npos);
    CHECK(r.out.find(",extension") != std::string::npos);
    CHECK(r.out.find("E_psi") != std::string::npos);
    CHECK(r.out.find("rows with x > 100000 extend the reference data range") !=
          std::string::npos);
}

TEST_CASE("bench reports rows, skips, and restates strategy agreement") {
    auto r = run_cli("bench --function phi --xs 1000,10000 --strategy all");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 5);  // header + naive x2 + blocks x2
    uint64_t naive_sum = std::stoull(rows[1][4]);
    uint64_t blocks_sum = std::stoull(rows[3][4]);
    CHECK(naive_sum == blocks_sum);

    auto skip = run_cli("bench --function phi --xs 1000000000 --strategy naive");
    CHECK(skip.out.find("exceeds sieve budget") != std::string::npos);
}

TEST_CASE("bench blocks handles x = 1e9 and scales gently") {
    auto r = run_cli("bench --function phi --xs 1000000,100000000,1000000000 --strategy blocks");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 4);
    double t6 = std::stod(rows[1][3]);
    double t8 = std::stod(rows[2][3]);
    double t9 = std::stod(rows[3][3]);
    CHECK(std::stoull(rows[3][4]) > 0);  // 1e9 row completed with a sum
    CHECK(t9 < 10000.0);                 // well under ten seconds
    CHECK(t8 / t6 <= 30.0);              // measured two-decade growth stays tame
}

TEST_CASE("--out writes the same bytes as stdout") {
    std::string path = "/tmp/fracsum_cli_out_test.csv";
    auto direct = run_cli("table --function phi --xs 10,100");
    auto filed = run_cli("table --function phi --xs 10,100 --out " + path);
    CHECK(filed.exit_code == 0);
    CHECK(filed.out.empty());
    CHECK(slurp(path) == direct.out);
    std::remove(path.c_str());
}

TEST_CASE("precision flag widens the real columns") {
    auto r = run_cli("table --function phi --xs 10 --precision 4");
    CHECK(r.out.find("phi,10,17,13.9980,3.0020,blocks") != std::string::npos);
}

TEST_CASE("markdown format renders a table") {
    auto r = run_cli("table --function phi --xs 10 --format md");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("| fn") != std::string::npos);
    CHECK(r.out.find("| phi") != std::string::npos);
}

TEST_CASE("constants command carries the reference values") {
    auto r = run_cli("constants");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("inv_zeta2,0.607927101854") != std::string::npos);
    CHECK(r.out.find("neg_zeta_prime_2,0.937548254316") != std::string::npos);
    CHECK(r.out.find("OEIS A073002") != std::string::npos);
    CHECK(r.out.find("series mu/n^2 @ 1e6,0.6079271") != std::string::npos);
}
