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

#ifndef ST2_MATRIX_IO_HPP_
#define ST2_MATRIX_IO_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "complexes.hpp"
#include "linalg.hpp"
#include "opcalc.hpp"

namespace st2 {

// Files that cannot be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix sources:
//   {"rows": r, "cols": c, "data": [...]}  row-major, entries x or [re, im]
//   {"ref": "file"}                          .json descriptor or .csv, relative to base
// A descriptor is {"rows", "cols", "dtype": "complex128", "order": "F", "file"}
// naming a raw file of column-major (re, im) double pairs.
Mat matrix_from_json(const nlohmann::json& j, const std::filesystem::path& base);
Mat load_matrix(const std::filesystem::path& path);
nlohmann::json matrix_to_json(const Mat& m);

// Writes `stem`.json and `stem`.bin.
void save_matrix_binary(const Mat& m, const std::filesystem::path& stem);
// CSV cells are real numbers or complex literals such as "1.5-2j".
Mat read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const Mat& m, const std::filesystem::path& path);

// {"dims": [...], "orders": [...], "differentials": [matrix sources]}
FiniteHilbertComplex complex_from_json(const nlohmann::json& j, const std::filesystem::path& base);
FiniteHilbertComplex load_complex(const std::filesystem::path& path);
nlohmann::json complex_to_json(const FiniteHilbertComplex& c);

// {"ops": [matrix sources], "grading": matrix source?, "anticommute_tol": x?}
OperatorCollection collection_from_json(const nlohmann::json& j, const std::filesystem::path& base);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace st2

#endif  // ST2_MATRIX_IO_HPP_
