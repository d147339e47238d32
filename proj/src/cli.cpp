#include "srdt/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "srdt/codec.hpp"
#include "srdt/errors.hpp"
#include "srdt/fme.hpp"
#include "srdt/json_io.hpp"
#include "srdt/lemma1.hpp"
#include "srdt/parallel.hpp"
#include "srdt/regions.hpp"

namespace srdt {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  ss.imbue(std::locale::classic());
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream is(item);
    is.imbue(std::locale::classic());
    double x;
    if (!(is >> x) || !(is >> std::ws).eof())
      throw UsageError(std::string("bad number '") + item + "' in " + what);
    v.push_back(x);
  }
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Bundled systems resolve through SRDT_DATA_DIR (env, then build default).
std::string resolve_system(const std::string& name) {
  if (fs::exists(name)) return name;
  std::vector<std::string> roots;
  if (const char* env = std::getenv("SRDT_DATA_DIR")) roots.push_back(env);
#ifdef SRDT_DATA_DIR
  roots.push_back(SRDT_DATA_DIR);
#endif
  for (const auto& r : roots) {
    fs::path p = fs::path(r) / "systems" / name;
    if (fs::exists(p)) return p.string();
  }
  throw UsageError("system file not found: " + name);
}

// Writes to --out when given, else to `out`.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
  return s + "\n";
}

std::string num(double x) { return format_number(x); }

// ---------------------------------------------------------------- region

struct RegionArgs {
  std::string model;
  std::string config;
  double p = 0.25;
  std::string d1 = "0", r, r1, delta = "0";
  bool no_secrecy = false;
  bool points = false;
  bool r_given = false, r1_given = false;
  std::uint64_t seed = 1;
  int restarts = 6;
  std::string out;
};

std::string cmd_region(RegionArgs a) {
  std::vector<double> d1s, rs, r1s, deltas;
  bool have_r = a.r_given, have_r1 = a.r1_given;
  if (!a.config.empty()) {
    json j;
    try {
      j = json::parse(read_file(a.config));
    } catch (const json::exception& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
    auto list = [&](const char* k, std::vector<double>& dst, bool& have) {
      if (!j.contains(k)) return;
      if (!j[k].is_array()) throw UsageError(std::string("config field '") + k + "' must be a list");
      dst = j[k].get<std::vector<double>>();
      have = true;
    };
    if (j.contains("model")) a.model = j["model"].get<std::string>();
    if (j.contains("p")) a.p = j["p"].get<double>();
    if (j.contains("secrecy")) a.no_secrecy = !j["secrecy"].get<bool>();
    if (j.contains("points")) a.points = j["points"].get<bool>();
    bool h = false;
    list("D1", d1s, h);
    if (!h) d1s = parse_list(a.d1, "--d1");
    list("R", rs, have_r);
    list("R1", r1s, have_r1);
    h = false;
    list("delta", deltas, h);
    if (!h) deltas = parse_list(a.delta, "--delta");
    if (!j.contains("R")) rs = parse_list(a.r, "--r");
    if (!j.contains("R1")) r1s = parse_list(a.r1, "--r1");
  } else {
    d1s = parse_list(a.d1, "--d1");
    rs = parse_list(a.r, "--r");
    r1s = parse_list(a.r1, "--r1");
    deltas = parse_list(a.delta, "--delta");
  }
  if (a.model.empty()) throw UsageError("region: --model is required");
  Model model;
  try {
    model = parse_model(a.model);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  if (!a.points && (!have_r || !have_r1))
    throw UsageError("region: --r and --r1 grids are required (or --points for GW_A)");
  const bool secrecy = !a.no_secrecy;
  const double h = binary_entropy(a.p);

  std::string s = csv_line({"model", "p", "D1", "R", "R1", "R2", "delta", "member",
                            "witness_id", "boundary"});
  const std::string mname = model_name(model);

  if (a.points) {
    if (model != Model::GW_A) throw UsageError("region: --points is available for GW_A only");
    for (const auto& pt : gw_a_binary_points(a.p)) {
      auto chk = check_gw_a_point(a.p, pt);
      bool in = chk.ok && gw_a_pangloss(a.p, pt.R, pt.R1);
      double slack = std::min(pt.R + pt.R1 - 1.0, pt.R + 2.0 * pt.R1 - 1.0 - h);
      s += csv_line({mname, num(a.p), "0", num(pt.R), num(pt.R1), num(pt.R2), num(pt.delta),
                     in ? "1" : "0", pt.name, num(slack)});
    }
    return s;
  }

  SearchConfig sc;
  sc.seed = a.seed;
  sc.restarts = a.restarts;
  const auto ham = DistortionMeasure::hamming(2);
  for (double D1 : d1s)
    for (double R : rs)
      for (double R1 : r1s)
        for (double delta : deltas) {
          std::string member, witness, boundary, r2;
          RateTuple t;
          t.model = model;
          t.R = R;
          t.R1 = R1;
          t.D1 = D1;
          t.delta = delta;
          if (is_gw(model)) {
            t.R2 = R1;
            t.D2 = D1;
            r2 = num(R1);
          }
          t.validate();
          switch (model) {
            case Model::HELPER_A: {
              JointPmf src = make_dsbs(a.p);
              if (D1 == 0.0) {
                bool in = helper_a_lossless(src, R, R1, delta);
                member = in ? "1" : "0";
                witness = in ? "lossless-timeshare" : "";
                boundary = num(entropy(src, {"S1"}));
              } else {
                auto w = membership_search(model, src, {ham}, t, sc);
                member = w ? "1" : "unknown";
                witness = w ? w->origin : "";
              }
              break;
            }
            case Model::HELPER_B:
              member = helper_b_dsbs(a.p, t, secrecy) ? "1" : "0";
              boundary = num(helper_b_dsbs_sum_rate(a.p, D1));
              break;
            case Model::GW_A: {
              auto w = membership_search(model, make_gw_a_source(a.p), {ham, ham}, t, sc);
              member = w ? "1" : "unknown";
              witness = w ? w->origin : "";
              break;
            }
            case Model::GW_B: {
              member = gw_b_binary(a.p, R, R1, R1, secrecy) ? "1" : "0";
              // Smallest public rate at this R1.
              double rmin;
              if (secrecy)
                rmin = R1 >= 1.0 - 1e-12 ? std::max(0.0, 2.0 * (1.0 + h) - 2.0 * R1)
                                         : std::numeric_limits<double>::infinity();
              else
                rmin = std::max({0.0, 1.0 + h - R1, 1.0 + 2.0 * h - 2.0 * R1});
              boundary = num(rmin);
              break;
            }
          }
          s += csv_line({mname, num(a.p), num(D1), num(R), num(R1), r2, num(delta), member,
                         witness, boundary});
        }
  return s;
}

// ---------------------------------------------------------------- figure

std::string cmd_figure(const std::string& name, double p, double d1) {
  std::string s = csv_line({"series", "label", "R1", "R", "delta"});
  auto row = [&](const std::string& series, const std::string& label, double R1, double R,
                 double delta) { s += csv_line({series, label, num(R1), num(R), num(delta)}); };
  const double h = binary_entropy(p);
  if (name == "fig6") {
    const double sum = helper_b_dsbs_sum_rate(p, d1);
    // Boundary R + R1 = sum; best equivocation along it is min(1, R1).
    const int steps = 20;
    for (int i = 0; i <= steps; ++i) {
      double R1 = sum * i / steps;
      row("secret", "", R1, sum - R1, std::min(1.0, R1));
    }
    for (int i = 0; i <= steps; ++i) {
      double R1 = sum * i / steps;
      row("no_secrecy", "", R1, sum - R1, 0.0);
    }
    // Perfect secrecy needs R1 >= 1.
    row("perfect_secrecy", "corner", 1.0, std::max(0.0, sum - 1.0), 1.0);
    row("perfect_secrecy", "ray", 1.0, std::max(0.0, sum - 1.0) + 1.0, 1.0);
  } else if (name == "fig7") {
    for (const auto& pt : gw_a_binary_points(p)) {
      std::string series = pt.delta_exact ? "equivocation_point" : "inner_bound";
      row(series, pt.name, pt.R1, pt.R, pt.delta);
    }
    row("outer_bound", "A", 0.0, 1.0 + h, 0.0);
    row("outer_bound", "H", h, 1.0 - h, 0.0);
    row("outer_bound", "B", 1.0, 0.0, 0.0);
  } else if (name == "fig9") {
    for (const auto& c : gw_b_corners(p))
      row(c.secrecy ? "secret" : "no_secrecy", c.name, c.R1, c.R, c.secrecy ? 1.0 : 0.0);
    // Vertical ray above B.
    row("secret", "ray", 1.0, 2.0 * h + 1.0, 1.0);
    // The non-secret boundary continues from C to A.
    row("no_secrecy", "A", 1.0 + h, 0.0, 0.0);
  } else {
    throw UsageError("unknown figure '" + name + "' (fig6, fig7, fig9)");
  }
  return s;
}

// ---------------------------------------------------------------- fme

std::string cmd_fme(const std::string& system, const std::string& project,
                    const std::string& check, int samples, std::uint64_t seed) {
  LinIneqSystem sys = load_system(resolve_system(system));
  std::vector<std::string> vars;
  {
    std::stringstream ss(project);
    std::string v;
    while (std::getline(ss, v, ','))
      if (!v.empty()) vars.push_back(v);
  }
  for (const auto& v : vars)
    if (!sys.has_variable(v)) throw UsageError("unknown variable to project: " + v);
  LinIneqSystem proj = fm_project(sys, vars);
  std::string s = format_system(proj);
  if (!s.empty() && s.back() != '\n') s += '\n';
  if (!check.empty()) {
    LinIneqSystem target = load_system(resolve_system(check));
    auto rep = compare_systems(proj, target, samples, seed);
    s += std::string("equivalent: ") + (rep.equivalent ? "true" : "false") + "\n";
    if (!rep.equivalent) s += "first disagreement: " + rep.first_disagreement + "\n";
  }
  return s;
}

// ---------------------------------------------------------------- lemma1

std::string cmd_lemma1(std::uint64_t N, std::uint64_t B, std::uint64_t K, double eps,
                       int trials, std::uint64_t seed, bool as_json) {
  HypergeomParams hp{N, B, K, eps};
  auto st = hypergeom_stats(hp);
  if (as_json) {
    json j = {{"N", N}, {"B", B}, {"K", K}, {"epsilon", eps},
              {"mean", st.mean}, {"variance", st.variance},
              {"chebyshev_bound", concentration_bound(hp)},
              {"pmf_sums_to_one", hypergeom_pmf(hp).sums_to_one()}};
    return j.dump(2) + "\n";
  }
  std::string s = csv_line({"trial", "C", "N", "B", "K", "mean", "var"});
  std::vector<std::uint64_t> c(static_cast<std::size_t>(std::max(trials, 0)));
  for (std::size_t t = 0; t < c.size(); ++t) {
    auto rng = substream(seed, t, 0x1e33a2);
    c[t] = sample_hypergeometric(rng, N, B, K);
  }
  const std::string tail = "," + std::to_string(N) + "," + std::to_string(B) + "," +
                           std::to_string(K) + "," + num(st.mean) + "," + num(st.variance) + "\n";
  if (c.empty()) s += "exact," + tail;
  for (std::size_t t = 0; t < c.size(); ++t)
    s += std::to_string(t) + "," + std::to_string(c[t]) + tail;
  return s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secure rate-distortion toolkit"};
  app.require_subcommand(1);

  RegionArgs ra;
  auto* region = app.add_subcommand("region", "Region membership sweep (CSV)");
  region->add_option("--model", ra.model, "HELPER_A, HELPER_B, GW_A or GW_B");
  region->add_option("--config", ra.config, "JSON grid config");
  region->add_option("--p", ra.p, "DSBS crossover probability");
  region->add_option("--d1", ra.d1, "comma-separated D1 values");
  region->add_option("--r", ra.r, "comma-separated R values");
  region->add_option("--r1", ra.r1, "comma-separated R1 values (R2 = R1 for GW)");
  region->add_option("--delta", ra.delta, "comma-separated equivocation values");
  region->add_flag("--no-secrecy", ra.no_secrecy, "use the region without secrecy");
  region->add_flag("--points", ra.points, "GW_A corner points only");
  region->add_option("--seed", ra.seed, "search seed");
  region->add_option("--restarts", ra.restarts, "random search restarts");
  region->add_option("--out", ra.out, "output path");

  std::string fig_name, fig_out;
  double fig_p = 0.25, fig_d1 = 0.1;
  auto* figure = app.add_subcommand("figure", "Figure data (CSV)");
  figure->add_option("name", fig_name, "fig6, fig7 or fig9")->required();
  figure->add_option("--p", fig_p, "source parameter");
  figure->add_option("--d1", fig_d1, "distortion budget (fig6)");
  figure->add_option("--out", fig_out, "output path");

  std::string fme_sys, fme_project, fme_check, fme_out;
  int fme_samples = 1000;
  std::uint64_t fme_seed = 1;
  auto* fme = app.add_subcommand("fme", "Fourier-Motzkin projection");
  fme->add_option("system", fme_sys, "system file or bundled name")->required();
  fme->add_option("--project", fme_project, "comma-separated variables to eliminate");
  fme->add_option("--check", fme_check, "system to compare the projection against");
  fme->add_option("--samples", fme_samples, "constant assignments for --check");
  fme->add_option("--seed", fme_seed, "sampling seed");
  fme->add_option("--out", fme_out, "output path");

  std::uint64_t lN = 0, lB = 0, lK = 0, l_seed = 1;
  double l_eps = 1.0;
  int l_trials = 0;
  bool l_json = false;
  std::string l_out;
  auto* lemma = app.add_subcommand("lemma1", "Hypergeometric counting checks");
  lemma->add_option("--N", lN, "population size")->required();
  lemma->add_option("--B", lB, "marked count")->required();
  lemma->add_option("--K", lK, "draws")->required();
  lemma->add_option("--epsilon", l_eps, "relative deviation");
  lemma->add_option("--trials", l_trials, "sampled trials");
  lemma->add_option("--seed", l_seed, "seed");
  lemma->add_flag("--json", l_json, "print moments and bound as JSON");
  lemma->add_option("--out", l_out, "output path");

  std::string s_config, s_out;
  std::optional<std::uint64_t> s_seed;
  std::optional<int> s_trials, s_n;
  bool s_csv = false, s_emit = false;
  auto* sim = app.add_subcommand("simulate", "Coding-scheme simulation");
  sim->add_option("--config", s_config, "experiment JSON")->required();
  sim->add_option("--seed", s_seed, "override seed");
  sim->add_option("--trials", s_trials, "override trials");
  sim->add_option("--n", s_n, "override blocklength");
  sim->add_flag("--csv", s_csv, "CSV header and row instead of JSON");
  sim->add_flag("--emit-config", s_emit, "print the effective config and exit");
  sim->add_option("--out", s_out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*region) {
      ra.r_given = region->count("--r") > 0;
      ra.r1_given = region->count("--r1") > 0;
      emit(ra.out, out, cmd_region(ra));
    } else if (*figure) {
      emit(fig_out, out, cmd_figure(fig_name, fig_p, fig_d1));
    } else if (*fme) {
      emit(fme_out, out, cmd_fme(fme_sys, fme_project, fme_check, fme_samples, fme_seed));
    } else if (*lemma) {
      emit(l_out, out, cmd_lemma1(lN, lB, lK, l_eps, l_trials, l_seed, l_json));
    } else if (*sim) {
      ExperimentSpec spec;
      try {
        spec = experiment_from_json(json::parse(read_file(s_config)));
      } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
      }
      if (s_seed) spec.seed = *s_seed;
      if (s_trials) spec.trials = *s_trials;
      if (s_n) spec.n = *s_n;
      if (s_emit) {
        emit(s_out, out, experiment_to_json(spec).dump(2) + "\n");
      } else {
        SimReport rep = run_experiment(resolve(spec));
        emit(s_out, out,
             s_csv ? report_csv_header() + "\n" + report_csv_row(rep) + "\n"
                   : report_to_json(rep).dump(2) + "\n");
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {  // ArgumentError, LabelError
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace srdt
