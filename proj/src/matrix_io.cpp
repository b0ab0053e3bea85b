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

#include "matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace st2 {

namespace fs = std::filesystem;

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

namespace {

cd entry_from_json(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw std::invalid_argument("matrix entries are numbers or [re, im] pairs");
}

Mat read_binary(const nlohmann::json& desc, const fs::path& base) {
  const auto rows = desc.at("rows").get<Eigen::Index>();
  const auto cols = desc.at("cols").get<Eigen::Index>();
  if (desc.value("dtype", std::string("complex128")) != "complex128")
    throw std::invalid_argument("matrix descriptor: only complex128 is supported");
  const std::string order = desc.value("order", std::string("F"));
  if (order != "F" && order != "C")
    throw std::invalid_argument("matrix descriptor: order must be \"F\" or \"C\"");
  fs::path file = base / desc.at("file").get<std::string>();
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  std::vector<double> buf(static_cast<std::size_t>(2 * rows * cols));
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(double)))
    throw std::invalid_argument(file.string() + ": file is shorter than rows * cols entries");
  Mat m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      std::size_t k = static_cast<std::size_t>(order == "F" ? c * rows + r : r * cols + c);
      m(r, c) = cd(buf[2 * k], buf[2 * k + 1]);
    }
  return m;
}

double parse_double(std::string_view s, const std::string& what) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("cannot parse " + what + " \"" + std::string(s) + "\"");
  return v;
}

cd parse_cell(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
          s.end());
  if (s.empty()) throw std::invalid_argument("empty CSV cell");
  if (s.back() != 'j' && s.back() != 'i') return parse_double(s, "CSV cell");
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) {
    std::string im = s.empty() || s == "+" ? "1" : s == "-" ? "-1" : s;
    return {0, parse_double(im, "CSV cell")};
  }
  std::string re = s.substr(0, split), im = s.substr(split);
  if (im == "+") im = "1";
  if (im == "-") im = "-1";
  if (im[0] == '+') im = im.substr(1);
  return {parse_double(re, "CSV cell"), parse_double(im, "CSV cell")};
}

}  // namespace

Mat read_csv_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<cd>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<cd> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_cell(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument(path.string() + ": ragged CSV");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument(path.string() + ": empty CSV");
  Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  return m;
}

void write_csv_matrix(const Mat& m, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      cd v = m(r, c);
      auto put = [&](double x) {
        auto res = std::to_chars(buf, buf + sizeof buf, x);
        out.write(buf, res.ptr - buf);
      };
      put(v.real());
      if (v.imag() != 0) {
        if (!std::signbit(v.imag())) out << '+';
        put(v.imag());
        out << 'j';
      }
    }
    out << '\n';
  }
}

Mat matrix_from_json(const nlohmann::json& j, const fs::path& base) {
  if (j.is_string()) return load_matrix(base / j.get<std::string>());
  if (!j.is_object()) throw std::invalid_argument("matrix source must be an object or a file name");
  if (j.contains("ref")) return load_matrix(base / j["ref"].get<std::string>());
  if (j.contains("file")) return read_binary(j, base);
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (!data.is_array()) throw std::invalid_argument("matrix \"data\" must be an array");
  // Accept a flat list or a list of rows.
  std::vector<nlohmann::json> flat;
  for (const auto& v : data) {
    if (v.is_array() && !(v.size() == 2 && v[0].is_number() && v[1].is_number() && data.size() == static_cast<std::size_t>(rows * cols)))
      for (const auto& w : v) flat.push_back(w);
    else
      flat.push_back(v);
  }
  if (flat.size() != static_cast<std::size_t>(rows * cols))
    throw std::invalid_argument("matrix data has " + std::to_string(flat.size()) +
                                " entries, expected " + std::to_string(rows * cols));
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = entry_from_json(flat[static_cast<std::size_t>(r * cols + c)]);
  return m;
}

Mat load_matrix(const fs::path& path) {
  if (path.extension() == ".csv") return read_csv_matrix(path);
  return matrix_from_json(read_json_file(path), path.parent_path());
}

nlohmann::json matrix_to_json(const Mat& m) {
  nlohmann::json j{{"rows", m.rows()}, {"cols", m.cols()}};
  nlohmann::json data = nlohmann::json::array();
  bool real = m.imag().cwiseAbs().maxCoeff() == 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (real)
        data.push_back(m(r, c).real());
      else
        data.push_back({m(r, c).real(), m(r, c).imag()});
    }
  j["data"] = std::move(data);
  return j;
}

void save_matrix_binary(const Mat& m, const fs::path& stem) {
  fs::path bin = stem;
  bin += ".bin";
  fs::path desc = stem;
  desc += ".json";
  std::ofstream out(bin, std::ios::binary);
  if (!out) throw IoError("cannot write " + bin.string());
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      double re = m(r, c).real(), im = m(r, c).imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof re);
      out.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
  std::ofstream d(desc);
  if (!d) throw IoError("cannot write " + desc.string());
  d << nlohmann::json{{"rows", m.rows()},
                      {"cols", m.cols()},
                      {"dtype", "complex128"},
                      {"order", "F"},
                      {"file", bin.filename().string()}}
           .dump(2)
    << '\n';
}

FiniteHilbertComplex complex_from_json(const nlohmann::json& j, const fs::path& base) {
  FiniteHilbertComplex c;
  c.dims = j.at("dims").get<std::vector<Eigen::Index>>();
  c.orders = j.at("orders").get<std::vector<int>>();
  for (const auto& d : j.at("differentials")) c.d.push_back(matrix_from_json(d, base));
  Report r = validate(c, j.value("tol", 1e-10));
  if (!r.passed()) {
    std::string what = "complex is invalid:";
    for (const auto& ch : r.checks())
      if (!ch.pass) what += " " + ch.name;
    throw std::invalid_argument(what);
  }
  return c;
}

FiniteHilbertComplex load_complex(const fs::path& path) {
  return complex_from_json(read_json_file(path), path.parent_path());
}

nlohmann::json complex_to_json(const FiniteHilbertComplex& c) {
  nlohmann::json j{{"dims", c.dims}, {"orders", c.orders}};
  j["differentials"] = nlohmann::json::array();
  for (const auto& d : c.d) j["differentials"].push_back(matrix_to_json(d));
  return j;
}

OperatorCollection collection_from_json(const nlohmann::json& j, const fs::path& base) {
  OperatorCollection c;
  for (const auto& op : j.at("ops")) c.ops.push_back(matrix_from_json(op, base));
  if (j.contains("grading") && !j["grading"].is_null()) c.grading = matrix_from_json(j["grading"], base);
  c.anticommute_tol = j.value("anticommute_tol", c.anticommute_tol);
  return c;
}

}  // namespace st2
