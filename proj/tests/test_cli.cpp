#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using macrofield::cli::figure_ids;
using macrofield::cli::run_cli;
using nlohmann::json;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "macrofield");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

std::string config_path(const char* name) { return std::string(MACROFIELD_CONFIG_DIR) + "/" + name; }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("help exits 0 and lists the subcommands") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    for (const char* sub : {"derive", "simulate", "analytic", "calibrate", "phases", "inflation", "debt", "scenario",
                            "report"}) {
        CHECK(r.out.find(sub) != std::string::npos);
    }
    const auto s = run({"simulate", "--help"});
    CHECK(s.code == 0);
    for (const char* flag : {"--config", "--step", "--method", "--horizon", "--population-table", "--out", "--format"}) {
        CHECK(s.out.find(flag) != std::string::npos);
    }
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"simulate", "--method", "heun"}).code == 2);
    CHECK(run({"derive", "--format", "xml"}).code == 2);
}

TEST_CASE("derive on the built-in dataset") {
    const auto r = run({"derive", "--frg"});
    REQUIRE(r.code == 0);
    const auto rows = split_csv(r.out);
    CHECK(rows.front().front() == "year");
    CHECK(rows.size() == 64);
    CHECK(rows[1][0] == "1950");
    const auto j = run({"derive", "--frg", "--format", "json", "--from", "2000", "--to", "2002"});
    REQUIRE(j.code == 0);
    const auto arr = json::parse(j.out);
    CHECK(arr.size() == 3);
    CHECK(arr[0]["year"] == 2000);
}

TEST_CASE("derive reads decimal-comma input") {
    const auto p = temp_file("macrofield_cli_dc.csv",
                             "year;assets;loans;gdp;state_debt;savings_rate;population;cpi\n"
                             "2000;10,5;5;4;1;0,1;100;0,02\n"
                             "2001;11,5;5,5;4,2;1,1;0,1;101;0,02\n");
    const auto r = run({"derive", "--input", p.string(), "--decimal-comma"});
    CHECK(r.code == 0);
    const auto rows = split_csv(r.out);
    CHECK(rows.size() == 3);
    std::filesystem::remove(p);
}

TEST_CASE("bad input file exits 2 and names the row and column") {
    const auto p = temp_file("macrofield_cli_bad.csv",
                             "year,assets,loans,gdp,state_debt,savings_rate,population,cpi\n"
                             "2000,10,5,4,1,0.1,100,0.02\n"
                             "2001,11,abc,4,1,0.1,100,0.02\n");
    const auto r = run({"derive", "--input", p.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("loans") != std::string::npos);
    CHECK(r.err.find('3') != std::string::npos);
    CHECK(run({"derive", "--input", "/nonexistent/x.csv"}).code == 2);
    std::filesystem::remove(p);
}

TEST_CASE("simulate reproduces the basic peak and collapse") {
    const auto r = run({"simulate", "--config", config_path("frg_basic.json"), "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["summary"]["peak_year"] == 2005);
    CHECK(j["summary"]["collapse_year"] == 2032);
    CHECK(j["summary"]["method"] == "rk4");
    CHECK(j["trajectory"].back()["year"] == 2032);
}

TEST_CASE("simulate flags override the config and carry method metadata") {
    const auto summary = std::filesystem::temp_directory_path() / "macrofield_cli_summary.json";
    const auto e = run({"simulate", "--config", config_path("frg_basic.json"), "--method", "euler", "--step", "1",
                        "--summary", summary.string()});
    REQUIRE(e.code == 0);
    std::ifstream in(summary);
    const auto s = json::parse(in);
    CHECK(s["method"] == "euler");
    CHECK(s["step"] == 1.0);
    const auto rk = run({"simulate", "--config", config_path("frg_basic.json")});
    REQUIRE(rk.code == 0);
    CHECK(rk.out != e.out);
    CHECK(rk.out.rfind("year,t,Y,K,", 0) == 0);
    std::filesystem::remove(summary);
    CHECK(run({"simulate", "--step", "2"}).code == 2);
}

TEST_CASE("population table produces the 1990 GDP step") {
    const auto run_y = [](bool pop) {
        std::vector<std::string> args{"simulate", "--format", "json", "--horizon", "45"};
        if (pop) {
            args.emplace_back("--population-table");
            args.emplace_back("frg");
        }
        const auto r = run(args);
        REQUIRE(r.code == 0);
        const auto j = json::parse(r.out);
        std::map<int, double> y;
        for (const auto& row : j["trajectory"]) y[row["year"].get<int>()] = row["Y"].get<double>();
        return y;
    };
    const auto plain = run_y(false);
    const auto pop = run_y(true);
    const double jump_pop = pop.at(1991) / pop.at(1990);
    const double jump_plain = plain.at(1991) / plain.at(1990);
    CHECK(jump_pop > jump_plain + 0.1);
}

TEST_CASE("numeric failures exit 3") {
    const auto r = run({"analytic", "tc", "--p-n", "0.05", "--p-s", "0.1"});
    CHECK(r.code == 3);
    const auto ok = run({"analytic", "tc", "--p-n", "-0.055", "--p-s", "0.1"});
    REQUIRE(ok.code == 0);
    CHECK(json::parse(ok.out)["T_c"].get<double>() > 0.0);
}

TEST_CASE("analytic subcommands") {
    const auto reg = run({"analytic", "regime", "--p-v", "0.055", "--p-rel", "1", "--p-s", "0.1"});
    REQUIRE(reg.code == 0);
    const auto j = json::parse(reg.out);
    CHECK(j["regime"] == "growth");
    CHECK(j["condition_holds"] == true);
    CHECK(j["p_n"].get<double>() == doctest::Approx(-0.055));
    const auto tm = run({"analytic", "tmax", "--t-h", "80"});
    REQUIRE(tm.code == 0);
    CHECK(json::parse(tm.out)["t_max"].get<double>() == doctest::Approx(55.451774).epsilon(1e-7));
    const auto sol = run({"analytic", "solution", "--p-n", "0.02", "--p-s", "0.1", "--y0", "1", "--k0", "0.5",
                          "--horizon", "5"});
    REQUIRE(sol.code == 0);
    const auto rows = split_csv(sol.out);
    CHECK(rows.size() == 7);
    CHECK(rows[1][1] == "1");
    CHECK(run({"analytic"}).code == 2);
}

TEST_CASE("calibrate fits") {
    const auto yk = run({"calibrate", "yk", "--frg"});
    REQUIRE(yk.code == 0);
    const auto j = json::parse(yk.out);
    CHECK(j["a_K"].get<double>() > 0.0);
    CHECK(j["extremes"]["K_max"].get<double>() > 0.0);
    const auto prel = run({"calibrate", "prel", "--frg", "--constrained"});
    REQUIRE(prel.code == 0);
    const auto p = json::parse(prel.out);
    CHECK(p["constrained"] == true);
    CHECK(p["p_rel0"] == 1.0);
    CHECK(p["T_h"].get<double>() > 0.0);
}

TEST_CASE("phases report the crossing years") {
    const auto r = run({"phases", "--frg"});
    REQUIRE(r.code == 0);
    const auto c = json::parse(r.out)["crossings"];
    CHECK(c["capital_exceeds_gdp"] == 1966);
    CHECK(c["loans_exceed_gdp"] == 1982);
    CHECK(c["prel_below_half"] == 2000);
    CHECK(c["capital_triple_gdp"] == 2000);
}

TEST_CASE("inflation and debt tables") {
    const auto inf = run({"inflation", "--frg", "--method", "core"});
    REQUIRE(inf.code == 0);
    const auto rows = split_csv(inf.out);
    CHECK(rows.front() == std::vector<std::string>{"year", "value", "cpi"});
    CHECK(rows.size() == 64);
    CHECK(run({"inflation", "--method", "magic"}).code == 2);
    const auto debt = run({"debt", "--frg", "--p-a", "0.03"});
    REQUIRE(debt.code == 0);
    CHECK(split_csv(debt.out).front() == std::vector<std::string>{"year", "modeled", "official"});
}

TEST_CASE("scenario runs the export experiment") {
    const auto r = run({"scenario", "--config", config_path("fig29_world.json"), "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    const auto& e = j["economies"];
    REQUIRE(e.size() == 2);
    CHECK(e[1]["peak_gdp"].get<double>() > e[0]["peak_gdp"].get<double>());
    CHECK(e[0]["alone_collapse_year"] == 2032);
    CHECK(e[1]["alone_collapse_year"] == 2057);
    CHECK(e[0]["collapse_year"].get<int>() > 2032);
    CHECK(e[1]["collapse_year"].get<int>() < 2057);
    const auto csv = run({"scenario", "--config", config_path("fig29_world.json")});
    REQUIRE(csv.code == 0);
    CHECK(split_csv(csv.out).front() == std::vector<std::string>{"year", "Y_strong", "K_strong", "Y_weak", "K_weak"});
    CHECK(run({"scenario"}).code == 2);
}

TEST_CASE("report figures") {
    const auto f7 = run({"report", "fig7"});
    REQUIRE(f7.code == 0);
    CHECK(split_csv(f7.out).front() == std::vector<std::string>{"year", "kt_data", "kt_model"});
    const auto f13 = run({"report", "fig13"});
    REQUIRE(f13.code == 0);
    CHECK(split_csv(f13.out).front() == std::vector<std::string>{"year", "p_rel_percent"});
    const auto bad = run({"report", "fig99"});
    CHECK(bad.code == 2);
    for (const auto& id : figure_ids()) CHECK(bad.err.find(id) != std::string::npos);
}

TEST_CASE("every report re-parses as a rectangular numeric CSV") {
    for (const auto& id : figure_ids()) {
        CAPTURE(id);
        const auto r = run({"report", id});
        REQUIRE(r.code == 0);
        const auto rows = split_csv(r.out);
        REQUIRE(rows.size() > 1);
        CHECK(rows.front().front() == "year");
        for (std::size_t i = 1; i < rows.size(); ++i) {
            REQUIRE(rows[i].size() == rows.front().size());
            for (const auto& cell : rows[i]) {
                if (cell.empty()) continue;
                std::size_t pos = 0;
                (void)std::stod(cell, &pos);
                CHECK(pos == cell.size());
            }
        }
        const auto j = run({"report", id, "--format", "json"});
        REQUIRE(j.code == 0);
        CHECK(json::parse(j.out).size() == rows.size() - 1);
    }
}

TEST_CASE("commands are deterministic and --out writes the same bytes") {
    const auto a = run({"report", "fig29"});
    const auto b = run({"report", "fig29"});
    CHECK(a.out == b.out);
    const auto path = std::filesystem::temp_directory_path() / "macrofield_cli_out.csv";
    REQUIRE(run({"report", "fig29", "--out", path.string()}).code == 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == a.out);
    std::filesystem::remove(path);
}

}
