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

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "st2/st2.h"

namespace fs = std::filesystem;

namespace {

std::string data(const char* name) { return std::string(ST2_DATA_DIR) + "/" + name; }

std::string report_json(const st2_report* r) {
  size_t len = 0;
  REQUIRE(st2_report_json(r, nullptr, &len) == ST2_OK);
  std::string s(len, '\0');
  REQUIRE(st2_report_json(r, s.data(), &len) == ST2_OK);
  s.resize(len - 1);
  return s;
}

}  // namespace

TEST_CASE("bounding matrices through the C API") {
  st2_matrix* m = nullptr;
  REQUIRE(st2_bm_load(data("rumin.json").c_str(), &m) == ST2_OK);
  CHECK(st2_bm_size(m) == 2);
  int dec = 0;
  st2_report* r = nullptr;
  REQUIRE(st2_bm_check(m, &dec, &r) == ST2_OK);
  CHECK(dec == 1);
  CHECK(st2_report_passed(r) == 1);
  st2_report_free(r);

  const char* t[] = {"1", "1/2"};
  int inside = 0;
  CHECK(st2_bm_contains(m, t, 2, &inside) == ST2_OK);
  CHECK(inside == 1);
  const char* out_t[] = {"1/2", "1"};
  CHECK(st2_bm_contains(m, out_t, 2, &inside) == ST2_OK);
  CHECK(inside == 0);

  double sample[2];
  int empty = 1;
  CHECK(st2_bm_sample(m, 0.1, sample, 2, &empty) == ST2_OK);
  CHECK(empty == 0);
  CHECK(sample[0] > sample[1]);
  CHECK(st2_bm_sample(m, 0.1, sample, 1, &empty) == ST2_ERR_BUFFER);

  char buf[64];
  size_t len = sizeof buf;
  CHECK(st2_bm_order_bound(m, t, nullptr, 2, buf, &len) == ST2_OK);
  CHECK(std::string(buf) == "2");
  len = sizeof buf;
  CHECK(st2_bm_order_bound(m, out_t, nullptr, 2, buf, &len) == ST2_ERR_INVALID);
  CHECK(std::string(st2_last_error()).size() > 0);
  st2_bm_free(m);

  REQUIRE(st2_bm_load(data("two_cycle.json").c_str(), &m) == ST2_OK);
  REQUIRE(st2_bm_check(m, &dec, &r) == ST2_OK);
  CHECK(dec == 0);
  CHECK(st2_report_failures(r) >= 1);
  st2_report_free(r);
  st2_bm_free(m);

  CHECK(st2_bm_standard("g2", 0, &m) == ST2_OK);
  CHECK(st2_bm_size(m) == 5);
  st2_bm_free(m);
  CHECK(st2_bm_standard("nope", 0, &m) == ST2_ERR_UNKNOWN);
  CHECK(st2_bm_load("/nonexistent/m.json", &m) == ST2_ERR_IO);
  CHECK(st2_bm_from_json("{\"entries\": [[0, -1], [0, 0]]}", &m) == ST2_ERR_INVALID);
  CHECK(st2_bm_load(nullptr, &m) == ST2_ERR_INVALID);
}

TEST_CASE("json text uses the size query pattern") {
  st2_matrix* m = nullptr;
  REQUIRE(st2_bm_standard("rumin", 0, &m) == ST2_OK);
  size_t len = 0;
  CHECK(st2_bm_to_json(m, nullptr, &len) == ST2_OK);
  std::string s(len, '\0');
  size_t small = 3;
  CHECK(st2_bm_to_json(m, s.data(), &small) == ST2_ERR_BUFFER);
  CHECK(small == len);
  CHECK(st2_bm_to_json(m, s.data(), &len) == ST2_OK);
  st2_matrix* back = nullptr;
  CHECK(st2_bm_from_json(s.c_str(), &back) == ST2_OK);
  CHECK(st2_bm_size(back) == 2);
  st2_bm_free(back);
  st2_bm_free(m);
}

TEST_CASE("collections and complexes") {
  st2_collection* c = nullptr;
  REQUIRE(st2_collection_load(data("pauli.json").c_str(), &c) == ST2_OK);
  CHECK(st2_collection_count(c) == 2);
  CHECK(st2_collection_dim(c) == 2);
  st2_report* r = nullptr;
  REQUIRE(st2_collection_verify(c, &r) == ST2_OK);
  CHECK(st2_report_passed(r));
  st2_report_free(r);
  double t[] = {0.5, 1.0};
  auto stem = fs::temp_directory_path() / "st2_capi_assembled";
  REQUIRE(st2_collection_assemble(c, t, 2, stem.c_str(), &r) == ST2_OK);
  CHECK(st2_report_passed(r));
  CHECK(fs::exists(stem.string() + ".bin"));
  st2_report_free(r);
  CHECK(st2_collection_assemble(c, t, 1, nullptr, &r) == ST2_ERR_INVALID);
  st2_collection_free(c);

  st2_complex* x = nullptr;
  REQUIRE(st2_complex_load(data("small_complex.json").c_str(), &x) == ST2_OK);
  CHECK(st2_complex_length(x) == 2);
  REQUIRE(st2_complex_analyze(x, 2.0, &r) == ST2_OK);
  CHECK(st2_report_passed(r));
  CHECK(report_json(r).find("\"schema\"") != std::string::npos);
  st2_report_free(r);
  st2_complex_free(x);
}

TEST_CASE("algebras") {
  st2_algebra* a = nullptr;
  REQUIRE(st2_algebra_load(data("engel.json").c_str(), &a) == ST2_OK);
  CHECK(st2_algebra_dim(a) == 4);
  CHECK(st2_algebra_step(a) == 3);
  st2_report* r = nullptr;
  REQUIRE(st2_algebra_validate(a, &r) == ST2_OK);
  CHECK(st2_report_passed(r));
  st2_report_free(r);
  REQUIRE(st2_algebra_dilation(a, 1.0, "3/2", 50, 7, &r) == ST2_OK);
  CHECK(st2_report_passed(r));
  st2_report_free(r);
  st2_algebra_free(a);

  REQUIRE(st2_algebra_standard("heisenberg", &a) == ST2_OK);
  REQUIRE(st2_algebra_verify_bound(a, nullptr, "{\"radii\": [4, 8, 16, 32]}", &r) == ST2_OK);
  CHECK(st2_report_passed(r));
  st2_report_free(r);
  REQUIRE(st2_algebra_truncate(a, 2, 100, &r) == ST2_OK);
  st2_report_free(r);
  st2_algebra_free(a);
  CHECK(st2_algebra_standard("sl2", &a) == ST2_ERR_INVALID);
}

TEST_CASE("symbols") {
  double xi[] = {1, 0, 3, -4};
  st2_report* r = nullptr;
  REQUIRE(st2_rumin_characters(xi, 2, 0.25, &r) == ST2_OK);
  CHECK(st2_report_passed(r));
  st2_report_free(r);
  REQUIRE(st2_rumin_oscillator(16, 1.0, 6, &r) == ST2_OK);
  CHECK(st2_report_passed(r));
  st2_report_free(r);
  double alphas[] = {0.25}, ladder[] = {10, 100, 1000, 10000};
  REQUIRE(st2_rumin_naive_demo(alphas, 1, ladder, 4, &r) == ST2_OK);
  CHECK(st2_report_passed(r));
  st2_report_free(r);
}

TEST_CASE("experiment registry") {
  CHECK(st2_experiment_count() >= 16);
  bool found = false;
  for (size_t i = 0; i < st2_experiment_count(); ++i) {
    CHECK(std::string(st2_experiment_anchor(i)).size() > 0);
    found = found || std::string(st2_experiment_name(i)) == "mobius";
  }
  CHECK(found);
  st2_report* r = nullptr;
  CHECK(st2_run_experiment("mobuis", nullptr, &r) == ST2_ERR_UNKNOWN);
  char buf[256];
  size_t len = sizeof buf;
  REQUIRE(st2_suggest("mobuis", buf, &len) == ST2_OK);
  CHECK(std::string(buf).find("mobius") == 0);

  REQUIRE(st2_run_experiment("mobius", "{\"n_max\": 3}", &r) == ST2_OK);
  CHECK(st2_report_passed(r));
  auto dir = fs::temp_directory_path() / "st2_capi_report";
  fs::remove_all(dir);
  REQUIRE(st2_report_write(r, dir.c_str()) == ST2_OK);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "sups.csv"));
  st2_report_free(r);
  CHECK(st2_run_experiment("mobius", "{not json", &r) == ST2_ERR_INVALID);
}
