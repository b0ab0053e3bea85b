// Copyright 2026 The st2 Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// st2: command-line front end over the C API.
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 usage or input error.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "st2/st2.h"

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a C API call fails; carries the exit code to use.
struct ApiError : std::runtime_error {
  explicit ApiError(const std::string& m) : std::runtime_error(m) {}
};

void api(st2_status s, const char* what) {
  if (s != ST2_OK) throw ApiError(std::string(what) + ": " + st2_last_error());
}

std::string take_string(const std::function<st2_status(char*, size_t*)>& f, const char* what) {
  size_t len = 0;
  api(f(nullptr, &len), what);
  std::string buf(len, '\0');
  api(f(buf.data(), &len), what);
  buf.resize(len ? len - 1 : 0);
  return buf;
}

struct ReportDeleter {
  void operator()(st2_report* r) const { st2_report_free(r); }
};
using ReportPtr = std::unique_ptr<st2_report, ReportDeleter>;

// "key = json" lines; '#' starts a comment line.
json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path);
  json cfg = json::object();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
    };
    trim(key);
    trim(value);
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    try {
      cfg[key] = json::parse(value);
    } catch (const json::exception&) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": value is not JSON");
    }
  }
  return cfg;
}

struct Globals {
  std::string config_path;
  std::string out;
  long long seed = -1;
  bool quiet = false;
  json cfg = json::object();
};

int finish(const Globals& g, ReportPtr r, const std::string& label) {
  if (!g.out.empty()) api(st2_report_write(r.get(), g.out.c_str()), "write report");
  json j = json::parse(take_string(
      [&](char* b, size_t* l) { return st2_report_json(r.get(), b, l); }, "report json"));
  const bool pass = st2_report_passed(r.get());
  const auto& checks = j["checks"];
  std::cout << label << ": " << (pass ? "PASS" : "FAIL") << " (" << checks.size() << " checks";
  if (!pass) std::cout << ", " << st2_report_failures(r.get()) << " failed";
  std::cout << ")\n";
  if (!g.quiet)
    for (const auto& c : checks)
      if (!c["pass"].get<bool>())
        std::cout << "  failed " << c["name"].get<std::string>() << ": " << c["value"].dump() << " "
                  << c["relation"].get<std::string>() << " " << c["threshold"].dump() << "\n";
  if (!g.out.empty()) std::cout << "report written to " << g.out << "\n";
  return pass ? kExitPass : kExitFail;
}

template <class T>
T pick(const CLI::Option* opt, const T& cli_value, const json& cfg, const char* key, T def) {
  if (opt && opt->count() > 0) return cli_value;
  if (cfg.contains(key)) return cfg[key].get<T>();
  return def;
}

st2_matrix* load_bm(const std::string& arg) {
  st2_matrix* m = nullptr;
  auto colon = arg.find(':');
  std::string name = arg.substr(0, colon);
  if (name == "rumin" || name == "g2" || name == "nilpotent" || name == "carnot") {
    int s = colon == std::string::npos ? 0 : std::stoi(arg.substr(colon + 1));
    api(st2_bm_standard(name.c_str(), s, &m), "bounding matrix");
  } else {
    api(st2_bm_load(arg.c_str(), &m), "bounding matrix");
  }
  return m;
}

st2_algebra* load_algebra(const std::string& arg) {
  st2_algebra* a = nullptr;
  if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json")
    api(st2_algebra_load(arg.c_str(), &a), "algebra");
  else
    api(st2_algebra_standard(arg.c_str(), &a), "algebra");
  return a;
}

std::vector<const char*> cstrs(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

int run_named(const Globals& g, const std::string& name, json config) {
  for (auto& [k, v] : g.cfg.items())
    if (k != "experiment" && k != "out" && !config.contains(k)) config[k] = v;
  if (g.seed >= 0) config["seed"] = g.seed;
  st2_report* r = nullptr;
  st2_status s = st2_run_experiment(name.c_str(), config.dump().c_str(), &r);
  if (s == ST2_ERR_UNKNOWN) {
    std::cerr << "st2: " << st2_last_error() << "\n";
    std::string sug = take_string([&](char* b, size_t* l) { return st2_suggest(name.c_str(), b, l); },
                                  "suggest");
    if (!sug.empty()) {
      std::cerr << "did you mean:\n";
      std::istringstream in(sug);
      std::string line;
      while (std::getline(in, line)) std::cerr << "  " << line << "\n";
    }
    return kExitUsage;
  }
  api(s, name.c_str());
  return finish(g, ReportPtr(r), name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"st2: verification tools for strictly tangled spectral triples"};
  app.set_version_flag("--version", std::string(st2_version()));
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "key = JSON value config file");
  app.add_option("--out", g.out, "output directory for report.json and CSV series");
  auto* seed_opt = app.add_option("--seed", g.seed, "random seed");
  app.add_flag("-q,--quiet", g.quiet, "only print the summary line");

  // cone
  auto* cone = app.add_subcommand("cone", "bounding matrices: cycle condition and cone");
  std::string matrix = "rumin";
  std::vector<std::string> t_values, rho_values;
  double margin = 1e-3;
  auto* cone_check = cone->add_subcommand("check", "decreasing cycle condition");
  auto* cone_contains = cone->add_subcommand("contains", "membership of t in the cone");
  auto* cone_sample = cone->add_subcommand("sample", "a point of the cone");
  auto* cone_bound = cone->add_subcommand("order-bound", "host order bound at t");
  for (auto* sc : {cone_check, cone_contains, cone_sample, cone_bound})
    sc->add_option("--matrix", matrix, "JSON file or rumin|g2|nilpotent:S|carnot:S");
  cone_contains->add_option("--t", t_values, "exponents, rationals")->delimiter(',')->required();
  cone_bound->add_option("--t", t_values, "exponents, rationals")->delimiter(',')->required();
  cone_bound->add_option("--rho", rho_values, "bounds, rationals or inf")->delimiter(',');
  cone_sample->add_option("--margin", margin, "log-space margin");
  cone->require_subcommand(1);

  // assemble / verify / complex
  auto* assemble = app.add_subcommand("assemble", "assemble a collection at exponents t");
  std::string collection;
  std::vector<double> t_double;
  assemble->add_option("--collection", collection, "collection JSON")->required();
  assemble->add_option("--t", t_double, "exponents")->delimiter(',')->required();
  auto* verify = app.add_subcommand("verify", "check a collection anticommutes");
  verify->add_option("--collection", collection, "collection JSON")->required();
  auto* complex_cmd = app.add_subcommand("complex", "analyze a finite Hilbert complex");
  std::string complex_file;
  double tau = 1.0;
  complex_cmd->add_option("--file", complex_file, "complex JSON")->required();
  auto* tau_complex = complex_cmd->add_option("--tau", tau, "assembly exponent");

  // nilpotent
  auto* nil = app.add_subcommand("nilpotent", "nilpotent Lie group weights");
  std::string algebra = "heisenberg", chart = "exponential", t_dil = "2";
  std::vector<double> radii;
  double radius = 3;
  std::size_t max_points = 4000;
  int samples = 1000;
  auto* nil_verify = nil->add_subcommand("verify", "translation bounds on lattice balls");
  auto* nil_trunc = nil->add_subcommand("truncate", "dense lattice truncation");
  auto* nil_dil = nil->add_subcommand("dilation", "dilation equivariance (Carnot)");
  for (auto* sc : {nil_verify, nil_trunc, nil_dil})
    sc->add_option("--algebra", algebra, "heisenberg|filiformN|nN|abelianN or JSON file");
  auto* nil_matrix = nil_verify->add_option("--matrix", matrix, "bounding matrix (default generic)");
  auto* radii_opt = nil_verify->add_option("--radii", radii, "ball radii")->delimiter(',');
  nil_verify->add_option("--chart", chart, "exponential|second_kind");
  nil_trunc->add_option("--radius", radius, "ball radius");
  nil_trunc->add_option("--max-points", max_points, "largest ball allowed");
  auto* tau_dil = nil_dil->add_option("--tau", tau, "symbol order");
  nil_dil->add_option("--t", t_dil, "dilation factor, rational");
  nil_dil->add_option("--samples", samples, "random samples");
  nil->require_subcommand(1);

  // dynamics
  auto* dyn = app.add_subcommand("dynamics", "crossed products and growth");
  std::map<std::string, std::string> dyn_names{
      {"shear", "shear-torus"}, {"nctorus", "nctorus"}, {"mobius", "mobius"}, {"nilflow", "nilflow"}};
  std::map<std::string, CLI::App*> dyn_sub;
  for (const auto& [k, v] : dyn_names) dyn_sub[k] = dyn->add_subcommand(k, "runs " + v);
  dyn->require_subcommand(1);

  // rumin
  auto* rumin = app.add_subcommand("rumin", "Rumin symbol computations");
  std::vector<double> alphas, ladder, xi;
  double lambda = 1;
  int osc_n = 64, padding = 8;
  auto* r_char = rumin->add_subcommand("characters", "character matrices F(xi)");
  auto* r_osc = rumin->add_subcommand("oscillator", "Rockland diagnostics");
  auto* r_naive = rumin->add_subcommand("naive-demo", "frozen-coefficient commutator growth");
  double char_alpha = 0;
  r_char->add_option("--xi", xi, "flat list of xi pairs")->delimiter(',');
  r_char->add_option("--alpha", char_alpha, "exponent");
  r_osc->add_option("--n", osc_n, "interior size");
  r_osc->add_option("--lambda", lambda, "central character");
  r_osc->add_option("--padding", padding, "extra basis vectors");
  auto* alpha_opt = r_naive->add_option("--alpha", alphas, "exponents")->delimiter(',');
  auto* ladder_opt = r_naive->add_option("--ladder", ladder, "radii T")->delimiter(',');
  rumin->require_subcommand(1);

  // interp
  auto* interp = app.add_subcommand("interp", "interpolation region on random instances");
  int instances = 3, dim = 60, grid = 20;
  auto* inst_opt = interp->add_option("--instances", instances, "random instances");
  auto* dim_opt = interp->add_option("--dim", dim, "matrix size");
  auto* grid_opt = interp->add_option("--grid", grid, "alpha and beta grid size");

  // report
  auto* report = app.add_subcommand("report", "list or run registered experiments");
  bool list = false;
  std::string name;
  report->add_flag("--list", list, "list experiment names and anchors");
  report->add_option("name", name, "experiment name");

  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (!g.config_path.empty()) {
      g.cfg = read_config(g.config_path);
      if (g.cfg.empty()) throw UsageError("config " + g.config_path + " sets no keys");
      if (seed_opt->count() == 0 && g.cfg.contains("seed")) g.seed = g.cfg["seed"].get<long long>();
      if (g.out.empty() && g.cfg.contains("out")) g.out = g.cfg["out"].get<std::string>();
    }
    const json& cfg = g.cfg;

    if (*cone) {
      matrix = cfg.value("matrix", matrix);
      std::unique_ptr<st2_matrix, void (*)(st2_matrix*)> m(load_bm(matrix), st2_bm_free);
      if (*cone_check) {
        st2_report* r = nullptr;
        int dec = 0;
        api(st2_bm_check(m.get(), &dec, &r), "cone check");
        return finish(g, ReportPtr(r), "cone check");
      }
      if (*cone_contains) {
        int inside = 0;
        auto c = cstrs(t_values);
        api(st2_bm_contains(m.get(), c.data(), c.size(), &inside), "cone contains");
        std::cout << (inside ? "inside" : "outside") << "\n";
        return inside ? kExitPass : kExitFail;
      }
      if (*cone_sample) {
        std::vector<double> t(st2_bm_size(m.get()));
        int empty = 0;
        api(st2_bm_sample(m.get(), margin, t.data(), t.size(), &empty), "cone sample");
        if (empty) {
          std::cout << "empty\n";
          return kExitFail;
        }
        std::cout << json(t).dump() << "\n";
        return kExitPass;
      }
      auto tc = cstrs(t_values);
      std::vector<std::string> rho = rho_values;
      if (rho.empty()) rho.assign(t_values.size(), "inf");
      if (rho.size() != t_values.size()) throw UsageError("--rho needs one value per --t value");
      auto rc = cstrs(rho);
      std::string bound = take_string(
          [&](char* b, size_t* l) { return st2_bm_order_bound(m.get(), tc.data(), rc.data(), tc.size(), b, l); },
          "order bound");
      std::cout << bound << "\n";
      return kExitPass;
    }

    if (*assemble || *verify) {
      st2_collection* c = nullptr;
      api(st2_collection_load(collection.c_str(), &c), "collection");
      std::unique_ptr<st2_collection, void (*)(st2_collection*)> cp(c, st2_collection_free);
      st2_report* r = nullptr;
      if (*verify) {
        api(st2_collection_verify(c, &r), "verify");
        return finish(g, ReportPtr(r), "verify");
      }
      std::string stem;
      if (!g.out.empty()) {
        std::filesystem::create_directories(g.out);
        stem = (std::filesystem::path(g.out) / "assembled").string();
      }
      api(st2_collection_assemble(c, t_double.data(), t_double.size(), stem.empty() ? nullptr : stem.c_str(), &r),
          "assemble");
      return finish(g, ReportPtr(r), "assemble");
    }

    if (*complex_cmd) {
      st2_complex* c = nullptr;
      api(st2_complex_load(complex_file.c_str(), &c), "complex");
      std::unique_ptr<st2_complex, void (*)(st2_complex*)> cp(c, st2_complex_free);
      st2_report* r = nullptr;
      api(st2_complex_analyze(c, pick(tau_complex, tau, cfg, "tau", 1.0), &r), "complex");
      return finish(g, ReportPtr(r), "complex");
    }

    if (*nil) {
      algebra = cfg.value("algebra", algebra);
      std::unique_ptr<st2_algebra, void (*)(st2_algebra*)> a(load_algebra(algebra), st2_algebra_free);
      st2_report* r = nullptr;
      if (*nil_verify) {
        json o = cfg;
        o.erase("algebra");
        o["radii"] = pick(radii_opt, radii, cfg, "radii", std::vector<double>{5, 10, 20, 40});
        o["chart"] = cfg.value("chart", chart);
        if (g.seed >= 0) o["seed"] = g.seed;
        st2_matrix* m = nullptr;
        if (nil_matrix->count() > 0 || cfg.contains("matrix")) m = load_bm(cfg.value("matrix", matrix));
        std::unique_ptr<st2_matrix, void (*)(st2_matrix*)> mp(m, st2_bm_free);
        api(st2_algebra_verify_bound(a.get(), m, o.dump().c_str(), &r), "nilpotent verify");
        return finish(g, ReportPtr(r), "nilpotent verify");
      }
      if (*nil_trunc) {
        api(st2_algebra_truncate(a.get(), cfg.value("radius", radius), cfg.value("max_points", max_points), &r),
            "nilpotent truncate");
        return finish(g, ReportPtr(r), "nilpotent truncate");
      }
      api(st2_algebra_dilation(a.get(), pick(tau_dil, tau, cfg, "tau", 1.0), cfg.value("t", t_dil).c_str(),
                               cfg.value("samples", samples), static_cast<uint64_t>(g.seed >= 0 ? g.seed : 1),
                               &r),
          "nilpotent dilation");
      return finish(g, ReportPtr(r), "nilpotent dilation");
    }

    if (*dyn) {
      for (const auto& [k, sc] : dyn_sub)
        if (*sc) return run_named(g, dyn_names[k], json::object());
    }

    if (*rumin) {
      st2_report* r = nullptr;
      if (*r_char) {
        std::vector<double> x = xi.empty() ? cfg.value("xi", std::vector<double>{1, 0, 0.5, 0.5, 3, -4})
                                           : xi;
        if (x.size() % 2) throw UsageError("--xi needs pairs");
        api(st2_rumin_characters(x.data(), x.size() / 2, cfg.value("alpha", char_alpha), &r), "characters");
        return finish(g, ReportPtr(r), "rumin characters");
      }
      if (*r_osc) {
        api(st2_rumin_oscillator(cfg.value("n", osc_n), cfg.value("lambda", lambda), cfg.value("padding", padding),
                                 &r),
            "oscillator");
        return finish(g, ReportPtr(r), "rumin oscillator");
      }
      auto a = pick(alpha_opt, alphas, cfg, "alphas", std::vector<double>{0.0, 0.1, 0.25});
      auto l = pick(ladder_opt, ladder, cfg, "ladder", std::vector<double>{10, 100, 1000, 10000});
      api(st2_rumin_naive_demo(a.data(), a.size(), l.data(), l.size(), &r), "naive demo");
      return finish(g, ReportPtr(r), "rumin naive-demo");
    }

    if (*interp) {
      json c = json::object();
      c["instances"] = pick(inst_opt, instances, cfg, "instances", 3);
      c["dim"] = pick(dim_opt, dim, cfg, "dim", 60);
      c["grid"] = pick(grid_opt, grid, cfg, "grid", 20);
      return run_named(g, "interp-region", c);
    }

    if (*report) {
      if (list) {
        for (size_t i = 0; i < st2_experiment_count(); ++i)
          std::cout << st2_experiment_name(i) << "\t" << st2_experiment_anchor(i) << "\n";
        return kExitPass;
      }
      if (name.empty()) name = cfg.value("experiment", std::string());
      if (name.empty()) throw UsageError("report needs --list or an experiment name");
      return run_named(g, name, json::object());
    }

    // No subcommand: the config must name an experiment.
    if (cfg.contains("experiment")) return run_named(g, cfg["experiment"].get<std::string>(), json::object());
    std::cerr << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "st2: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const ApiError& e) {
    std::cerr << "st2: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "st2: " << e.what() << "\n";
    return kExitUsage;
  }
}
