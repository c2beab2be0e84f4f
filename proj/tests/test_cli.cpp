#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nonres/format.hpp"
#include "nonres/scan.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path tmp = fs::temp_directory_path() /
                         ("nonres_cli_test_" + std::to_string(counter++) + ".out");
    const std::string cmd =
        std::string(NONRES_CLI_PATH) + " " + args + " > " + tmp.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (fs::exists(tmp)) {
        result.out = read_file(tmp);
        fs::remove(tmp);
    }
    return result;
}

std::string golden(const std::string& name) {
    return read_file(fs::path(NONRES_GOLDEN_DIR) / name);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

TEST_CASE("scan output matches the frozen golden file") {
    const RunResult res = run_cli("scan --lo 3 --hi 100 --targets all");
    REQUIRE(res.code == 0);
    CHECK(res.out == golden("scan_3_100.csv"));
}

TEST_CASE("every scan row re-validates against the library") {
    const auto rows = parse_csv(golden("scan_3_100.csv"));
    REQUIRE(rows.size() > 1);
    REQUIRE(rows[0] ==
            std::vector<std::string>{"p", "r", "targets", "g", "n", "ratio", "H", "m"});
    bool saw_seven = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const nonres::u64 p = std::stoull(row[0]);
        const auto ctx = nonres::ModulusContext::with_all_targets(p);
        REQUIRE(std::to_string(ctx.r()) == row[1]);
        REQUIRE(std::to_string(ctx.g()) == row[3]);
        const nonres::u64 n = nonres::least_simultaneous_nonresidue(ctx);
        REQUIRE(std::to_string(n) == row[4]);
        REQUIRE(nonres::format_real(std::log(double(n)) / std::log(double(p))) == row[5]);
        const auto tp = nonres::bound_parameters(p, ctx.r(), 1.0);
        REQUIRE(nonres::format_real(tp.H) == row[6]);
        REQUIRE(std::to_string(tp.m) == row[7]);
        if (p == 7) {
            saw_seven = true;
            CHECK(row[3] == "3");
            CHECK(row[4] == "3");
        }
    }
    CHECK(saw_seven);
    CHECK(rows.size() == 25);  // header + the 24 primes in [3, 100]
}

TEST_CASE("worker count does not change the bytes") {
    const RunResult one = run_cli("scan --lo 3 --hi 2000 --targets all --workers 1");
    const RunResult eight = run_cli("scan --lo 3 --hi 2000 --targets all --workers 8");
    REQUIRE(one.code == 0);
    REQUIRE(eight.code == 0);
    CHECK(one.out == eight.out);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("scan --lo 10 --hi 5").code == 2);
    CHECK(run_cli("scan").code == 2);
    CHECK(run_cli("scan --lo 3 --hi 10 --primes 7").code == 2);
    CHECK(run_cli("scan --primes 9 ").code == 2);
    CHECK(run_cli("spacing --x 10 --t 5 --c 1.5").code == 2);
    CHECK(run_cli("spacing --x 100 --t 2 --c 1.5 --rho 0.5").code == 2);
    CHECK(run_cli("count --primes 7 --H-rule junk").code == 2);
    CHECK(run_cli("scan --lo 3 --hi 10 --format yaml").code == 2);
    CHECK(run_cli("nonsense").code == 2);
}

TEST_CASE("empty prime range produces only the header") {
    const RunResult res = run_cli("scan --lo 24 --hi 28");
    REQUIRE(res.code == 0);
    CHECK(res.out == "p,r,targets,g,n,ratio,H,m\n");
}

TEST_CASE("a singleton range yields a single row") {
    const RunResult res = run_cli("scan --lo 5 --hi 5");
    REQUIRE(res.code == 0);
    const auto rows = parse_csv(res.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][0] == "5");
}

TEST_CASE("explicit target lists restrict the prime set") {
    // only p = 1 (mod 3) qualifies for a forced target 3
    const RunResult res = run_cli("scan --lo 3 --hi 50 --targets list:3");
    REQUIRE(res.code == 0);
    const auto rows = parse_csv(res.out);
    REQUIRE(rows.size() > 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stoull(rows[i][0]) % 3 == 1);
        CHECK(rows[i][2] == "3");
    }
    CHECK(rows.size() == 1 + 6);  // 7, 13, 19, 31, 37, 43
}

TEST_CASE("frac H-rule clamps to the full period") {
    const RunResult res = run_cli("count --primes 13 --targets all --H-rule frac:0.25,1.0");
    REQUIRE(res.code == 0);
    const auto rows = parse_csv(res.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][3] == "3");   // floor(13/4)
    CHECK(rows[2][3] == "12");  // frac 1.0 means p-1
}

TEST_CASE("a cap below every qualifying start flags none-found") {
    // required_length({2,3}) = 7 forces tau(n) >= 7, so nothing under 11 works
    const RunResult res = run_cli("reduce --primes 7 --targets all --cap 11");
    REQUIRE(res.code == 0);
    CHECK(parse_csv(res.out)[1][1] == "none-found");
}

TEST_CASE("count golden rows") {
    const RunResult both = run_cli("count --primes 7 --targets list:2,3 --H-rule list:6");
    REQUIRE(both.code == 0);
    CHECK(both.out == golden("count_7_t23_H6.csv"));
    const auto rows = parse_csv(both.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][4] == "2");  // J = 2 (n = 3, 5)

    const RunResult single = run_cli("count --primes 7 --targets list:2 --H-rule list:6");
    REQUIRE(single.code == 0);
    CHECK(single.out == golden("count_7_t2_H6.csv"));
    CHECK(parse_csv(single.out)[1][4] == "3");  // n = 3, 5, 6
}

TEST_CASE("charsum golden rows") {
    const RunResult legendre = run_cli("charsum --primes 5 --k 2 --H-rule list:4");
    REQUIRE(legendre.code == 0);
    CHECK(legendre.out == golden("charsum_5_k2_H4.csv"));
    const auto rows = parse_csv(legendre.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][6]) < 1e-6);  // |S| vanishes for the Legendre pattern

    const RunResult seven = run_cli("charsum --primes 7 --k 3 --H-rule list:3");
    REQUIRE(seven.code == 0);
    CHECK(seven.out == golden("charsum_7_k3_H3.csv"));
    CHECK(std::abs(std::stod(parse_csv(seven.out)[1][4]) - 1.0) < 1e-9);
}

TEST_CASE("spacing golden rows") {
    const RunResult density = run_cli("spacing --x 100 --t 2 --c 1.5");
    REQUIRE(density.code == 0);
    CHECK(density.out == golden("spacing_100_2_1.5.csv"));
    const auto rows = parse_csv(density.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][4] == "95");
    CHECK(rows[1][7] == "");  // clustered column empty for c >= 1/log 2

    const RunResult probe = run_cli("spacing --x 1000 --t 4 --c 1.0");
    REQUIRE(probe.code == 0);
    CHECK(probe.out == golden("spacing_1000_4_1.0.csv"));
    CHECK(parse_csv(probe.out)[1][7] == "449");
}

TEST_CASE("reduce golden rows") {
    const RunResult res = run_cli("reduce --primes 7 --targets list:2 --cap 100");
    REQUIRE(res.code == 0);
    CHECK(res.out == golden("reduce_7_t2_cap100.csv"));
    const auto rows = parse_csv(res.out);
    REQUIRE(rows.size() == 2);
    // least qualifying start is 6 (tau = 4), one step 6 -> 3
    CHECK(rows[1] == std::vector<std::string>{"7", "ok", "6", "1", "3"});

    const RunResult capped = run_cli("reduce --primes 7 --targets list:2 --cap 0");
    REQUIRE(capped.code == 0);
    CHECK(parse_csv(capped.out)[1][1] == "none-found");
}

TEST_CASE("json output mirrors the csv columns") {
    const RunResult res = run_cli("scan --primes 7 --format json");
    REQUIRE(res.code == 0);
    CHECK(res.out == golden("scan_7.json"));
    const nlohmann::json doc = nlohmann::json::parse(res.out);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["p"] == 7);
    CHECK(doc[0]["g"] == 3);
    CHECK(doc[0]["n"] == 3);
    CHECK(doc[0]["targets"] == "2;3");

    const RunResult reduce_json = run_cli("reduce --primes 7 --targets list:2 --cap 0 --format json");
    REQUIRE(reduce_json.code == 0);
    const nlohmann::json rj = nlohmann::json::parse(reduce_json.out);
    CHECK(rj[0]["status"] == "none-found");
    CHECK(rj[0]["n"].is_null());
}

TEST_CASE("output lands in --out when given") {
    const fs::path tmp = fs::temp_directory_path() / "nonres_out_test.csv";
    const RunResult res = run_cli("count --primes 7 --targets list:2,3 --H-rule list:6 --out " +
                                  tmp.string());
    REQUIRE(res.code == 0);
    CHECK(res.out.empty());
    CHECK(read_file(tmp) == golden("count_7_t23_H6.csv"));
    fs::remove(tmp);
}
