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

#ifndef ST2_EXPERIMENTS_HPP_
#define ST2_EXPERIMENTS_HPP_

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nilpotent.hpp"
#include "opcalc.hpp"
#include "report.hpp"

namespace st2 {

struct ExperimentInfo {
  std::string name;
  std::string anchor;  // formula string of the verified statement
  std::string summary;
};

const std::vector<ExperimentInfo>& experiment_list();

class UnknownExperiment : public std::invalid_argument {
 public:
  UnknownExperiment(const std::string& name, std::vector<std::string> suggestions);
  const std::vector<std::string>& suggestions() const { return suggestions_; }

 private:
  std::vector<std::string> suggestions_;
};

// Close names by edit distance or shared prefix, best first.
std::vector<std::string> suggest_experiments(const std::string& name);

// Runs a registered experiment. Config keys are experiment specific; "seed"
// is common. The report anchor is the registry anchor.
Report run_experiment(const std::string& name, const nlohmann::json& config);

// Shared with the acceptance suite.

// "heisenberg", "filiformN", "nN" (strictly upper triangular), "abelianN".
GradedNilpotentAlgebra algebra_by_name(const std::string& name);

// A = Q diag(+-a_k) Q*, B = Q diag(b_k) Q* with a_k, b_k in [1, 50], T Gaussian.
InterpolationInput random_interpolation_input(int dim, std::mt19937_64& rng,
                                              std::vector<double> alpha_grid,
                                              std::vector<double> beta_grid);

// Exact integer check of |c + a b'| <= (|c| + |(a,b)|)(1 + |(a',b')|) on the
// second-kind lattice ball, unnormalized sups, and the counting exponent.
Report heisenberg_weight_run(const std::vector<double>& radii,
                             const std::vector<std::vector<long>>& g_samples);

// bch_multiply against log(exp X exp Y) in the faithful representation:
// floating comparison on `pairs` samples and exact comparison on `exact_pairs`.
Report bch_oracle(const GradedNilpotentAlgebra& g, int pairs, int exact_pairs, std::uint64_t seed);

}  // namespace st2

#endif  // ST2_EXPERIMENTS_HPP_
