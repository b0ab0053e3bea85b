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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "matrix_io.hpp"
#include "report.hpp"

using namespace st2;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("st2_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST_CASE("inline json matrices") {
  auto j = nlohmann::json::parse(R"({"rows": 2, "cols": 2, "data": [1, [0, 2], -3, 4.5]})");
  Mat m = matrix_from_json(j, ".");
  CHECK(m(0, 1) == cd(0, 2));
  CHECK(m(1, 0) == cd(-3, 0));
  auto nested = nlohmann::json::parse(R"({"rows": 2, "cols": 2, "data": [[1, 2], [3, 4]]})");
  CHECK(matrix_from_json(nested, ".")(1, 0) == cd(3, 0));
  CHECK(matrix_from_json(matrix_to_json(m), ".") == m);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse(R"({"rows": 2, "cols": 2, "data": [1]})"), "."),
                  std::invalid_argument);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse(R"({"rows": 1, "cols": 1, "data": ["x"]})"), "."),
                  std::invalid_argument);
}

TEST_CASE("csv and binary round trips") {
  auto dir = scratch("roundtrip");
  std::mt19937_64 rng(6);
  Mat m = random_hermitian(5, rng);
  write_csv_matrix(m, dir / "m.csv");
  CHECK(max_abs(read_csv_matrix(dir / "m.csv") - m) == 0.0);
  save_matrix_binary(m, dir / "b");
  CHECK(max_abs(load_matrix(dir / "b.json") - m) == 0.0);
  write(dir / "lit.csv", "1.5-2j,3\n-1j,2+0.5j\n");
  Mat lit = read_csv_matrix(dir / "lit.csv");
  CHECK(lit(0, 0) == cd(1.5, -2));
  CHECK(lit(1, 0) == cd(0, -1));
  CHECK(lit(1, 1) == cd(2, 0.5));
  write(dir / "ragged.csv", "1,2\n3\n");
  CHECK_THROWS_AS(read_csv_matrix(dir / "ragged.csv"), std::invalid_argument);
  CHECK_THROWS_AS(load_matrix(dir / "missing.json"), IoError);
  CHECK_THROWS_AS(read_csv_matrix(dir / "missing.csv"), IoError);
}

TEST_CASE("complexes from json with references") {
  auto dir = scratch("complex");
  write(dir / "d1.csv", "1,-1\n");
  write(dir / "c.json", R"({"dims": [1, 2, 1], "orders": [1, 2],
    "differentials": [{"rows": 2, "cols": 1, "data": [1, 1]}, {"ref": "d1.csv"}]})");
  auto c = load_complex(dir / "c.json");
  CHECK(c.d.size() == 2);
  CHECK(c.d[1](0, 1) == cd(-1, 0));
  auto back = complex_from_json(complex_to_json(c), dir);
  CHECK(back.d[0] == c.d[0]);
  write(dir / "d1.csv", "1,0\n");
  CHECK_THROWS_AS(load_complex(dir / "c.json"), std::invalid_argument);
  write(dir / "bad.json", "{not json");
  CHECK_THROWS_AS(read_json_file(dir / "bad.json"), std::invalid_argument);
}

TEST_CASE("collections from json") {
  auto j = nlohmann::json::parse(R"({"ops": [{"rows": 2, "cols": 2, "data": [0, 1, 1, 0]},
    {"rows": 2, "cols": 2, "data": [0, [0, -1], [0, 1], 0]}],
    "grading": {"rows": 2, "cols": 2, "data": [1, 0, 0, -1]}})");
  auto c = collection_from_json(j, ".");
  CHECK(c.ops.size() == 2);
  CHECK(c.grading.has_value());
}

TEST_CASE("reports") {
  Report r("demo", "a <= b");
  r.check_le("small", 0.5, 1.0);
  r.check_ge("big", 0.5, 1.0);
  CHECK_FALSE(r.passed());
  CHECK(r.failures() == 1);
  CHECK_FALSE(r.checks()[1].datum.is_null());
  r.series("s").columns = {"x", "y"};
  r.series("s").rows = {{1, 2}, {3, 4.5}};
  CHECK(r.series("s").to_csv() == "x,y\n1,2\n3,4.5\n");
  Report outer("outer", "");
  outer.absorb(r, "inner");
  CHECK(outer.checks()[0].name == "inner.small");
  CHECK(outer.all_series().count("inner.s") == 1);
  auto j = nlohmann::json::parse(outer.dump());
  CHECK(j["schema"] == kReportSchema);
  CHECK(outer.dump() == outer.dump());
}
