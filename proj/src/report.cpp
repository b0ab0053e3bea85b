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

#include "report.hpp"

#include <charconv>
#include <cmath>

namespace st2 {

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// JSON has no inf or nan; encode them as strings.
Json num(double v) {
  if (std::isfinite(v)) return v;
  return fmt_double(v);
}

}  // namespace

std::string Series::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += fmt_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

Check& Report::check(const std::string& name, bool pass, double value,
                     double threshold, const std::string& relation, Json datum) {
  Check c{name, pass, value, threshold, relation, std::move(datum)};
  if (!pass && c.datum.is_null())
    c.datum = Json{{"value", num(value)}, {"threshold", num(threshold)}};
  checks_.push_back(std::move(c));
  return checks_.back();
}

Check& Report::check_le(const std::string& name, double value, double threshold,
                        Json datum) {
  return check(name, value <= threshold, value, threshold, "<=", std::move(datum));
}

Check& Report::check_ge(const std::string& name, double value, double threshold,
                        Json datum) {
  return check(name, value >= threshold, value, threshold, ">=", std::move(datum));
}

void Report::add_fit(const std::string& name, const Fit& f) {
  fits_[name] = FitEntry{f.slope, f.stderr_slope, f.points};
}

void Report::absorb(const Report& other, const std::string& prefix) {
  const std::string p = prefix.empty() ? "" : prefix + ".";
  for (auto c : other.checks_) {
    c.name = p + c.name;
    checks_.push_back(std::move(c));
  }
  for (const auto& [k, v] : other.fits_) fits_[p + k] = v;
  for (const auto& [k, v] : other.series_) series_[p + k] = v;
  if (other.data_.empty()) return;
  const std::string key = prefix.empty() ? other.name_ : prefix;
  if (key.empty()) {
    for (const auto& [k, v] : other.data_.items()) data_[k] = v;
  } else {
    data_[key] = other.data_;
  }
}

bool Report::passed() const { return failures() == 0; }

std::size_t Report::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks_) n += c.pass ? 0 : 1;
  return n;
}

Json Report::to_json() const {
  Json j;
  j["schema"] = kReportSchema;
  j["name"] = name_;
  j["anchor"] = anchor_;
  j["passed"] = passed();
  Json checks = Json::array();
  for (const auto& c : checks_) {
    Json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["value"] = num(c.value);
    cj["threshold"] = num(c.threshold);
    cj["relation"] = c.relation;
    if (!c.datum.is_null()) cj["datum"] = c.datum;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  Json ladder = Json::array();
  for (double v : ladder_) ladder.push_back(num(v));
  j["ladder"] = std::move(ladder);
  Json fits = Json::object();
  for (const auto& [k, f] : fits_)
    fits[k] = Json{{"slope", num(f.slope)}, {"stderr", num(f.stderr_slope)},
                   {"points", f.points}};
  j["fitted_exponents"] = std::move(fits);
  Json series = Json::array();
  for (const auto& [k, s] : series_)
    series.push_back(Json{{"name", k}, {"rows", s.rows.size()}});
  j["series"] = std::move(series);
  j["data"] = data_;
  return j;
}

std::string Report::dump() const { return to_json().dump(2); }

}  // namespace st2
