#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "srdt/cli.hpp"
#include "srdt/errors.hpp"
#include "srdt/json_io.hpp"

using namespace srdt;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "srdt");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

double h2(double a) {
  if (a <= 0.0 || a >= 1.0) return 0.0;
  return -a * std::log2(a) - (1 - a) * std::log2(1 - a);
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "srdt_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

const char* kExperiment = R"({
  "scheme": "HELPER_B",
  "source": {"dsbs": 0.25},
  "channel": {"kind": "dsbs_cond_rd", "D1": 0.1},
  "rates": {"w00": 0.5, "w10": 0.5, "w01": 0.2, "w11": 0.7},
  "n": 5,
  "delta": 0.3,
  "trials": 40,
  "seed": 11
})";

}  // namespace

TEST_CASE("helper-b sweep boundary column") {
  auto r = cli({"region", "--model", "HELPER_B", "--p", "0.25", "--d1", "0,0.05,0.1,0.2,0.25,0.3",
                "--r", "0.5", "--r1", "1", "--delta", "0.5"});
  REQUIRE(r.code == 0);
  auto rows = csv(r.out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == std::vector<std::string>{"model", "p", "D1", "R", "R1", "R2", "delta",
                                            "member", "witness_id", "boundary"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double d1 = std::stod(rows[i][2]);
    double want = 1 + std::max(h2(0.25) - h2(std::min(d1, 0.5)), 0.0);
    CHECK(std::stod(rows[i][9]) == doctest::Approx(want).epsilon(1e-8));
    CHECK(rows[i][7] == (1.5 >= want - 1e-9 ? "1" : "0"));
  }
}

TEST_CASE("gw-a points mode") {
  auto r = cli({"region", "--model", "GW_A", "--p", "0.2", "--points"});
  REQUIRE(r.code == 0);
  auto rows = csv(r.out);
  REQUIRE(rows.size() == 7);
  std::vector<std::string> names;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    names.push_back(rows[i][8]);
    CHECK(rows[i][7] == "1");
  }
  CHECK(names == std::vector<std::string>{"A", "B", "F", "G", "F~", "G~"});
  CHECK(std::stod(rows[1][3]) == doctest::Approx(1 + h2(0.2)).epsilon(1e-8));
}

TEST_CASE("empty grid gives a header-only csv") {
  auto r = cli({"region", "--model", "HELPER_B", "--r", "", "--r1", "1"});
  REQUIRE(r.code == 0);
  CHECK(csv(r.out).size() == 1);
}

TEST_CASE("figure data") {
  auto r = cli({"figure", "fig9", "--p", "0.2"});
  REQUIRE(r.code == 0);
  auto rows = csv(r.out);
  double h = h2(0.2);
  std::map<std::string, std::pair<double, double>> corner;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i][1].size() == 1) corner[rows[i][0] + rows[i][1]] = {std::stod(rows[i][2]), std::stod(rows[i][3])};
  CHECK(corner.at("secretA").first == doctest::Approx(1 + h).epsilon(1e-8));
  CHECK(corner.at("secretA").second == doctest::Approx(0.0));
  CHECK(corner.at("secretB").first == doctest::Approx(1.0));
  CHECK(corner.at("secretB").second == doctest::Approx(2 * h).epsilon(1e-8));
  CHECK(corner.at("no_secrecyC").first == doctest::Approx(h).epsilon(1e-8));
  CHECK(corner.at("no_secrecyC").second == doctest::Approx(1.0));
  CHECK(corner.at("no_secrecyD").first == doctest::Approx(0.0));
  CHECK(corner.at("no_secrecyD").second == doctest::Approx(1 + 2 * h).epsilon(1e-8));
  CHECK(corner.at("secretB").second == doctest::Approx(1.443856).epsilon(1e-6));

  // At D1 = p both boundaries have sum rate 1.
  auto f6 = csv(cli({"figure", "fig6", "--p", "0.25", "--d1", "0.25"}).out);
  for (std::size_t i = 1; i < f6.size(); ++i)
    if (f6[i][0] == "secret" || f6[i][0] == "no_secrecy")
      CHECK(std::stod(f6[i][2]) + std::stod(f6[i][3]) == doctest::Approx(1.0).epsilon(1e-8));

  auto f7 = csv(cli({"figure", "fig7", "--p", "0"}).out);
  std::map<std::string, std::vector<std::string>> byname;
  for (std::size_t i = 1; i < f7.size(); ++i)
    if (f7[i][0] == "inner_bound") byname[f7[i][1]] = f7[i];
  CHECK(byname.at("F")[2] == byname.at("G")[2]);
  CHECK(byname.at("F")[3] == byname.at("G")[3]);

  CHECK(cli({"figure", "fig8"}).code == 2);
}

TEST_CASE("fme command") {
  auto r = cli({"fme", "eq92.sys", "--project", "R00,R01,R10,R11", "--check", "eq14.sys",
                "--samples", "100"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("equivalent: true") != std::string::npos);
  auto bad = cli({"fme", "eq92.sys", "--project", "Q"});
  CHECK(bad.code == 2);
  CHECK(cli({"fme", "nope.sys"}).code == 2);
}

TEST_CASE("lemma1 command") {
  auto r = cli({"lemma1", "--N", "20", "--B", "5", "--K", "8"});
  REQUIRE(r.code == 0);
  auto rows = csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"trial", "C", "N", "B", "K", "mean", "var"});
  CHECK(std::stod(rows[1][5]) == doctest::Approx(2.0));
  auto j = json::parse(cli({"lemma1", "--N", "20", "--B", "5", "--K", "8", "--json"}).out);
  CHECK(j["mean"].get<double>() == doctest::Approx(2.0));
  CHECK(j["chebyshev_bound"].get<double>() == doctest::Approx(0.236842).epsilon(1e-6));
  auto t = csv(cli({"lemma1", "--N", "20", "--B", "5", "--K", "8", "--trials", "25"}).out);
  CHECK(t.size() == 26);
  CHECK(cli({"lemma1", "--N", "20", "--B", "25", "--K", "8"}).code == 2);
}

TEST_CASE("simulate command") {
  auto cfg = scratch("exp.json");
  write(cfg, kExperiment);
  auto zero = cli({"simulate", "--config", cfg.string(), "--trials", "0"});
  REQUIRE(zero.code == 0);
  auto rep = json::parse(zero.out);
  CHECK(rep["trials"] == 0);
  CHECK(rep["decode_failures"] == 0);
  CHECK(rep["equivocation_per_symbol"].get<double>() > 0.0);

  // Byte-identical output for the same config and seed.
  auto a = cli({"simulate", "--config", cfg.string(), "--csv"});
  auto b = cli({"simulate", "--config", cfg.string(), "--csv"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(csv(a.out).size() == 2);

  // Emitted config re-parses to the same run.
  auto emitted = cli({"simulate", "--config", cfg.string(), "--seed", "12", "--emit-config"});
  REQUIRE(emitted.code == 0);
  auto spec = experiment_from_json(json::parse(emitted.out));
  auto orig = experiment_from_json(json::parse(kExperiment));
  orig.seed = 12;
  CHECK(spec == orig);
  auto cfg2 = scratch("exp2.json");
  write(cfg2, emitted.out);
  CHECK(cli({"simulate", "--config", cfg2.string(), "--csv"}).out ==
        cli({"simulate", "--config", cfg.string(), "--seed", "12", "--csv"}).out);

  auto outp = scratch("report.csv");
  fs::remove(outp);
  REQUIRE(cli({"simulate", "--config", cfg.string(), "--csv", "--out", outp.string()}).code == 0);
  std::ifstream in(outp);
  std::stringstream got;
  got << in.rdbuf();
  CHECK(got.str() == a.out);
}

TEST_CASE("exit codes") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"bogus"}).code == 2);
  CHECK(cli({"region", "--model", "HELPER_C", "--r", "1", "--r1", "1"}).code == 2);
  CHECK(cli({"region", "--model", "HELPER_B"}).code == 2);
  CHECK(cli({"simulate", "--config", "/nonexistent/x.json"}).code == 2);

  auto bad = scratch("bad.json");
  write(bad, R"({"scheme": "HELPER_B", "source": {"dsbs": 0.25}, "colour": 1})");
  auto r = cli({"simulate", "--config", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("colour") != std::string::npos);

  auto cfg = scratch("big.json");
  write(cfg, kExperiment);
  CHECK(cli({"simulate", "--config", cfg.string(), "--n", "30"}).code == 3);
}

TEST_CASE("json forms") {
  auto d = make_dsbs(0.25);
  auto j = pmf_to_json(d);
  CHECK(j.contains("alphabet_sizes"));
  auto back = pmf_from_json(j);
  CHECK(back.probs() == d.probs());
  CHECK(back.labels() == d.labels());
  json near = {{"labels", {"X"}}, {"alphabet_sizes", {2}}, {"probs", {0.5, 0.5 + 5e-10}}};
  CHECK(pmf_from_json(near).probs()[0] == doctest::Approx(0.5));
  json off = {{"labels", {"X"}}, {"alphabet_sizes", {2}}, {"probs", {0.5, 0.5 + 1e-8}}};
  CHECK_THROWS_AS(pmf_from_json(off), ArgumentError);
  CHECK(source_from_json(json{{"gw_b", 0.2}}).labels() == LabelSet{"S0", "S1", "S2"});
  CHECK(source_from_json(json{{"gw_a", 0.2}}).labels() == LabelSet{"S1", "S2"});

  ChannelKernel k({"S0"}, {2}, {"U"}, {3}, {{0.2, 0.3, 0.5}, {1, 0, 0}});
  auto kb = kernel_from_json(kernel_to_json(k));
  CHECK(kb.rows == k.rows);
  CHECK(kb.outputs == k.outputs);

  CHECK(format_number(1.0 / 3) == "0.333333333");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(2.5e-12) == "2.5e-12");

  auto spec = experiment_from_json(json::parse(kExperiment));
  CHECK(experiment_from_json(experiment_to_json(spec)) == spec);
  auto cfg = resolve(spec);
  CHECK(cfg.params.delta == 0.3);
  CHECK(cfg.channel.size() == 1);
  auto nodelta = json::parse(kExperiment);
  nodelta.erase("delta");
  CHECK(resolve(experiment_from_json(nodelta)).params.delta ==
        doctest::Approx(1 / std::sqrt(5.0)));
  CHECK(report_csv_header().find("equivocation_per_symbol") != std::string::npos);
}
