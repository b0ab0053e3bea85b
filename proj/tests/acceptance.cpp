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

// Acceptance runner: one PASS/FAIL line per criterion. A criterion passes
// when every check in its reports passes and it finishes inside its time
// budget. Tolerances live in the experiment checks; the ones restated here
// are pinned again so a change of default cannot loosen them silently.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "experiments.hpp"

using namespace st2;

namespace {

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<std::vector<Report>()> run;
  // Extra pinned conditions on the reports, by check name and bound.
  std::vector<std::pair<std::string, double>> pinned;
};

const Check* find_check(const std::vector<Report>& reps, const std::string& name) {
  for (const auto& r : reps)
    for (const auto& c : r.checks())
      if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

int main() {
  using nlohmann::json;
  const std::vector<Criterion> criteria{
      {1, "tropical golden suite", 1.0,
       [] { return std::vector<Report>{run_experiment("tropical-golden", json::object())}; },
       {}},
      {2, "assembly identity, 100 collections, dim <= 256, 5 t each", 120.0,
       [] {
         return std::vector<Report>{run_experiment(
             "assembly", {{"collections", 100}, {"max_dim", 256}, {"t_samples", 5}})};
       },
       {{"assembly_identity", 1e-10}}},
      {3, "bounded transform identity and sww PSD on 50 triples", 60.0,
       [] { return std::vector<Report>{run_experiment("bounded-transform", {{"triples", 50}})}; },
       {{"f_squared_identity", 1e-12}, {"sww_psd", 0}}},
      {4, "heisenberg weight: exact normalized bound, raw slope 1, counting exponent 4", 180.0,
       [] {
         std::vector<std::vector<long>> gs = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1},
                                              {2, -1, 3}, {-3, 2, -1}, {5, 0, -2}, {1, -4, 7}};
         return std::vector<Report>{heisenberg_weight_run({5, 10, 20, 40}, gs)};
       },
       {{"normalized_bound.violations", 0}, {"raw_sup.slope", 0.1}, {"counting_exponent", 0.4}}},
      {5, "naive rumin: ray slopes 2 alpha, alpha = 0 sup converges", 30.0,
       [] {
         return std::vector<Report>{run_experiment("rumin-naive", {{"alphas", {0.05, 0.1, 0.25}}})};
       },
       {{"ray.alpha=0.050000", 0.05},
        {"ray.alpha=0.100000", 0.05},
        {"ray.alpha=0.250000", 0.05},
        {"alpha0.sup_increase", 1e-3}}},
      {6, "rumin symbols: Rockland at lambda 1, 2, 4 (N = 64, padding 8)", 60.0,
       [] {
         return std::vector<Report>{
             run_experiment("rumin-symbols", {{"lambdas", {1, 2, 4}}, {"n", 64}, {"padding", 8}})};
       },
       {{"lambda=1.000000.composition.d1d0", 1e-10},
        {"lambda=2.000000.composition.d1d0", 1e-10},
        {"lambda=4.000000.composition.d1d0", 1e-10},
        {"lambda=4.000000.composition.d2d1", 1e-10}}},
      {7, "crossed-product shear and NC-torus closed form", 180.0,
       [] {
         return std::vector<Report>{run_experiment("shear-torus", {{"ladder", {8, 16, 32, 64}}}),
                                    run_experiment("nctorus", json::object())};
       },
       {{"eps21=1.slope", 0.05}, {"eps21=0.slope_near_1", 0.1}, {"closed_form_agreement", 1e-10}}},
      {8, "mobius closed forms", 60.0,
       [] { return std::vector<Report>{run_experiment("mobius", json::object())}; },
       {{"parabolic.n1_closed_form", 1e-12},
        {"parabolic.grid_rel", 0.01},
        {"loxodromic.closed_is_4^n", 1e-12}}},
      {9, "carnot dilation equivariance on 1000 samples", 30.0,
       [] {
         return std::vector<Report>{
             run_experiment("carnot-dilation", {{"samples", 1000}, {"tau", 1.0}, {"t", "2"}})};
       },
       {}},
      {10, "interpolation: 100 instances, dim 60, 20 x 20 grids", 300.0,
       [] {
         return std::vector<Report>{
             run_experiment("interp-region", {{"instances", 100}, {"dim", 60}, {"grid", 20}})};
       },
       {}},
      {11, "BCH oracle: 500 pairs in step <= 4 algebras", 30.0,
       [] {
         return std::vector<Report>{run_experiment(
             "bch-oracle", {{"algebras", {"heisenberg", "filiform4", "filiform5", "n4", "n5"}},
                            {"pairs", 100},
                            {"exact_pairs", 20}})};
       },
       {}},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::vector<Report> reps;
    std::string note;
    bool ok = true;
    try {
      reps = c.run();
    } catch (const std::exception& e) {
      ok = false;
      note = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::size_t checks = 0, bad = 0;
    for (const auto& r : reps) {
      checks += r.checks().size();
      bad += r.failures();
      for (const auto& ch : r.checks())
        if (!ch.pass && note.size() < 200) note += (note.empty() ? "" : ", ") + ch.name;
    }
    if (bad) ok = false;
    for (const auto& [name, bound] : c.pinned) {
      const Check* ch = find_check(reps, name);
      if (!ch) {
        ok = false;
        note += (note.empty() ? "" : ", ") + ("missing " + name);
      } else if (ch->threshold > bound || !(std::abs(ch->value) <= bound)) {
        ok = false;
        note += (note.empty() ? "" : ", ") + ("pinned " + name);
      }
    }
    if (secs >= c.budget_s) {
      ok = false;
      note += (note.empty() ? "" : ", ") + std::string("over time budget");
    }
    if (!ok) ++failed;
    std::printf("[%s] C%-2d %s (%zu checks, %.2f s of %.0f s)%s%s\n", ok ? "PASS" : "FAIL", c.id,
                c.title.c_str(), checks, secs, c.budget_s, note.empty() ? "" : ": ", note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
