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

#ifndef ST2_REPORT_HPP_
#define ST2_REPORT_HPP_

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "linalg.hpp"

namespace st2 {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "st2.report/1";

struct Check {
  std::string name;
  bool pass = false;
  double value = 0;
  double threshold = 0;
  std::string relation;  // how value is compared against threshold, e.g. "<="
  Json datum;            // violating datum; always present on failure
};

struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string to_csv() const;
};

struct FitEntry {
  double slope = 0;
  double stderr_slope = 0;
  int points = 0;
};

class Report {
 public:
  Report() = default;
  Report(std::string name, std::string anchor)
      : name_(std::move(name)), anchor_(std::move(anchor)) {}

  // Records a check. A failing check without a datum gets one built from the
  // value and threshold, so every failure carries something to look at.
  Check& check(const std::string& name, bool pass, double value, double threshold,
               const std::string& relation, Json datum = nullptr);
  // Convenience for "value <= threshold".
  Check& check_le(const std::string& name, double value, double threshold,
                  Json datum = nullptr);
  Check& check_ge(const std::string& name, double value, double threshold,
                  Json datum = nullptr);

  void set_ladder(std::vector<double> ladder) { ladder_ = std::move(ladder); }
  void add_fit(const std::string& name, const Fit& f);
  Json& data() { return data_; }
  const Json& data() const { return data_; }
  Series& series(const std::string& name) { return series_[name]; }
  const std::map<std::string, Series>& all_series() const { return series_; }

  // Appends the checks, fits, and series of `other` under `prefix`.
  void absorb(const Report& other, const std::string& prefix);

  bool passed() const;
  std::size_t failures() const;
  const std::vector<Check>& checks() const { return checks_; }
  const std::vector<double>& ladder() const { return ladder_; }
  const std::map<std::string, FitEntry>& fits() const { return fits_; }
  const std::string& name() const { return name_; }
  const std::string& anchor() const { return anchor_; }
  void set_anchor(std::string a) { anchor_ = std::move(a); }

  Json to_json() const;
  std::string dump() const;  // deterministic, two-space indented

 private:
  std::string name_;
  std::string anchor_;
  std::vector<Check> checks_;
  std::vector<double> ladder_;
  std::map<std::string, FitEntry> fits_;
  std::map<std::string, Series> series_;
  Json data_ = Json::object();
};

}  // namespace st2

#endif  // ST2_REPORT_HPP_
