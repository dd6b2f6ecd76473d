#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "smt/cli.hpp"
#include "smt/report.hpp"

using namespace smt;

namespace {

int spawn_cli(const std::string& args) {
    std::string cmd = std::string(SMT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) { return read_text_file(path); }

std::string tmp_root() {
    static int counter = 0;
    std::filesystem::create_directories("cli_scratch");
    return "cli_scratch/" + std::to_string(counter++);
}

}  // namespace

TEST_CASE("fnv1a64 known vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("check rows and tolerance reapplication") {
    CheckRow close = check_close("c", "", 1.0, 1.0 + 1e-9, 1e-8);
    CHECK(close.pass);
    CHECK(close.residual == doctest::Approx(1e-9).epsilon(1e-6));
    CHECK_FALSE(close.one_sided);
    reapply_tolerance(close, 1e-10);
    CHECK_FALSE(close.pass);

    CheckRow bound = check_bound("b", "", 5.0, 1.0, 0.0);  // margin 4, passes
    CHECK(bound.pass);
    CHECK(bound.one_sided);
    CHECK(bound.residual == doctest::Approx(4.0).epsilon(1e-15));
    reapply_tolerance(bound, 1e-12);  // a tiny tol must not break a large margin
    CHECK(bound.pass);
    CheckRow neg = check_bound("b", "", 1.0, 5.0, 1.0);  // margin -4 under tol 1
    CHECK_FALSE(neg.pass);
    reapply_tolerance(neg, 5.0);
    CHECK(neg.pass);

    CheckRow nan_row = check_close("n", "", std::nan(""), 1.0, 1e99);
    CHECK_FALSE(nan_row.pass);
}

TEST_CASE("report append prefixes the check names") {
    Report a, b;
    a.add(check_close("x", "", 1.0, 1.0, 1e-12));
    b.add(check_bound("y", "p", 2.0, 1.0, 0.0));
    a.append(b, "sub/");
    REQUIRE(a.rows.size() == 2);
    CHECK(a.rows[1].check == "sub/y");
    CHECK(a.all_pass());
}

TEST_CASE("csv writer emits the exact fixed header and LF rows") {
    Report rep;
    rep.add(check_close("alpha_check", "k=1", 1.25, 1.0, 0.5));
    std::ostringstream oss;
    write_report_csv(rep, oss);
    CHECK(oss.str() ==
          "check,param,lhs,rhs,residual,tol,pass\n"
          "alpha_check,k=1,1.25,1,0.25,0.5,1\n");
}

TEST_CASE("json writer sorts keys and round-trips doubles at 17 digits") {
    Report rep;
    rep.set_meta("command", "demo");
    double lhs = 1.0 / 3.0;
    rep.add(check_close("c", "", lhs, 0.0, 1.0));
    std::ostringstream oss;
    write_report_json(rep, oss);
    nlohmann::json j = nlohmann::json::parse(oss.str());
    CHECK(j["meta"]["command"] == "demo");
    CHECK(j["pass"] == true);
    CHECK(j["rows"][0]["lhs"].get<double>() == lhs);
    // keys appear sorted in the serialization itself
    std::string s = oss.str();
    CHECK(s.find("\"check\"") < s.find("\"lhs\""));
    CHECK(s.find("\"lhs\"") < s.find("\"param\""));
    CHECK(s.find("\"residual\"") < s.find("\"rhs\""));
}

TEST_CASE("config serialization round-trips and rejects junk") {
    ExperimentConfig c;
    c.command = "moser";
    c.alpha = 2.0 * M_PI;
    c.beta = 1.0;
    c.pole_x = 0.3;
    c.indices = {1, 2, 5};
    c.levels = {0.5, 1.0};
    c.tol["moser_unit_energy"] = 1e-9;
    c.seed = 0xdeadbeefcafef00dULL;
    std::string text = config_to_json(c);
    ExperimentConfig back = config_from_json(text);
    CHECK(config_to_json(back) == text);  // lossless round trip
    CHECK(back.alpha == c.alpha);
    CHECK(back.seed == c.seed);
    CHECK(back.indices == c.indices);
    CHECK(back.tol == c.tol);
    CHECK(config_hash(back) == config_hash(c));

    CHECK_THROWS_AS(config_from_json("{\"frobnicate\": 1}"), usage_error);
    CHECK_THROWS_AS(config_from_json("{\"n\": \"two\"}"), usage_error);
    CHECK_THROWS_AS(config_from_json("not json"), usage_error);
    CHECK_THROWS_AS(config_from_json("[1,2]"), usage_error);
    CHECK_THROWS_AS(config_from_json("{\"seed\": -4}"), usage_error);
}

TEST_CASE("text file helpers throw io_error") {
    CHECK_THROWS_AS(read_text_file("definitely/not/here.txt"), io_error);
    CHECK_THROWS_AS(write_text_file("no_dir_here/x/y.txt", "data"), io_error);
}

TEST_CASE("cli: quick run exits zero and writes the fixed csv header") {
    std::string dir = tmp_root();
    CHECK(spawn_cli("moser --out " + dir) == 0);
    std::string csv = slurp(dir + "/moser.csv");
    CHECK(csv.rfind("check,param,lhs,rhs,residual,tol,pass\n", 0) == 0);
    CHECK(csv.find("\r") == std::string::npos);
}

TEST_CASE("cli: usage problems exit with code two") {
    std::string dir = tmp_root();
    std::string bad = dir + "_bad.json";
    write_text_file(bad, "{\"frobnicate\": 1}\n");
    CHECK(spawn_cli("moser --config " + bad + " --out " + dir) == 2);
    CHECK(spawn_cli("no-such-command") == 2);
    CHECK(spawn_cli("moser --format yaml --out " + dir) == 2);
    CHECK(spawn_cli("moser --tol broken --out " + dir) == 2);
    // config written for another command
    std::string mismatch = dir + "_mm.json";
    write_text_file(mismatch, "{\"command\": \"transplant\"}\n");
    CHECK(spawn_cli("moser --config " + mismatch + " --out " + dir) == 2);
}

TEST_CASE("cli: failing checks exit with code one, io problems with three") {
    std::string dir = tmp_root();
    CHECK(spawn_cli("moser --tol moser_unit_energy=1e-22 --out " + dir) == 1);
    CHECK(spawn_cli("moser --out /proc/nope/out") == 3);
}

TEST_CASE("cli: reruns are byte-identical in csv and json") {
    std::string cfg_path = tmp_root() + "_cfg.json";
    write_text_file(cfg_path,
                    "{\"command\":\"green-verify\",\"beta\":1.0,\"pole_x\":0.3,"
                    "\"levels\":[0.5,1.0],\"rays\":256}\n");
    std::string d1 = tmp_root(), d2 = tmp_root();
    CHECK(spawn_cli("green-verify --config " + cfg_path + " --out " + d1) == 0);
    CHECK(spawn_cli("green-verify --config " + cfg_path + " --out " + d2) == 0);
    CHECK(slurp(d1 + "/green-verify.csv") == slurp(d2 + "/green-verify.csv"));
    CHECK(spawn_cli("green-verify --config " + cfg_path + " --format json --out " + d1) == 0);
    CHECK(spawn_cli("green-verify --config " + cfg_path + " --format json --out " + d2) == 0);
    std::string j1 = slurp(d1 + "/green-verify.json");
    CHECK(j1 == slurp(d2 + "/green-verify.json"));
    // serialized records carry the config hash and digest in the meta block
    nlohmann::json j = nlohmann::json::parse(j1);
    CHECK(j["meta"].contains("config_hash"));
    CHECK(j["meta"].contains("config_digest"));
    CHECK(j["meta"]["verdict"] == "pass");
}

TEST_CASE("cli: the serial flag changes nothing in the output bytes") {
    std::string d1 = tmp_root(), d2 = tmp_root();
    CHECK(spawn_cli("iso-check --out " + d1) == 0);
    CHECK(spawn_cli("iso-check --serial --out " + d2) == 0);
    CHECK(slurp(d1 + "/iso-check.csv") == slurp(d2 + "/iso-check.csv"));
}

TEST_CASE("cli: plot format writes the csv and script pair") {
    std::string dir = tmp_root();
    CHECK(spawn_cli("moser --format plot --out " + dir) == 0);
    std::string gp = slurp(dir + "/moser.gp");
    CHECK(gp.find("moser.csv") != std::string::npos);
    CHECK(slurp(dir + "/moser.csv").rfind("check,param,", 0) == 0);
}
