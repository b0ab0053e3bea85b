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

#include "st2/st2.h"

#include <cctype>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "complexes.hpp"
#include "experiments.hpp"
#include "matrix_io.hpp"
#include "nilpotent.hpp"
#include "symbols.hpp"
#include "tropical.hpp"

struct st2_matrix {
  st2::BoundingMatrix m;
};
struct st2_collection {
  st2::OperatorCollection c;
};
struct st2_complex {
  st2::FiniteHilbertComplex c;
};
struct st2_algebra {
  st2::GradedNilpotentAlgebra g;
};
struct st2_report {
  st2::Report r;
};

namespace {

thread_local std::string g_error;

template <class F>
st2_status guarded(F&& f) {
  g_error.clear();
  try {
    return f();
  } catch (const st2::UnknownExperiment& e) {
    g_error = e.what();
    return ST2_ERR_UNKNOWN;
  } catch (const st2::IoError& e) {
    g_error = e.what();
    return ST2_ERR_IO;
  } catch (const std::filesystem::filesystem_error& e) {
    g_error = e.what();
    return ST2_ERR_IO;
  } catch (const std::domain_error& e) {
    g_error = e.what();
    return ST2_ERR_DOMAIN;
  } catch (const nlohmann::json::exception& e) {
    g_error = e.what();
    return ST2_ERR_INVALID;
  } catch (const std::logic_error& e) {
    g_error = e.what();
    return ST2_ERR_INVALID;
  } catch (const std::exception& e) {
    g_error = e.what();
    return ST2_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown exception";
    return ST2_ERR_INTERNAL;
  }
}

st2_status fail(st2_status s, std::string msg) {
  g_error = std::move(msg);
  return s;
}

st2_status copy_out(const std::string& s, char* buf, size_t* len) {
  if (!len) return fail(ST2_ERR_INVALID, "len must not be NULL");
  const size_t need = s.size() + 1;
  const size_t have = *len;
  *len = need;
  if (!buf) return ST2_OK;
  if (have < need) return fail(ST2_ERR_BUFFER, "buffer too small");
  std::memcpy(buf, s.c_str(), need);
  return ST2_OK;
}

st2_status emit(st2::Report r, st2_report** out) {
  if (!out) return fail(ST2_ERR_INVALID, "report pointer must not be NULL");
  *out = new st2_report{std::move(r)};
  return ST2_OK;
}

std::vector<st2::Rational> rationals(const char* const* v, size_t n) {
  if (n > 0 && !v) throw std::invalid_argument("vector pointer is NULL");
  std::vector<st2::Rational> out;
  for (size_t i = 0; i < n; ++i) out.push_back(st2::parse_rational(v[i]));
  return out;
}

nlohmann::json parse_or_empty(const char* text) {
  if (!text || !*text) return nlohmann::json::object();
  return nlohmann::json::parse(text);
}

#define ST2_REQUIRE(ptr)                                              \
  do {                                                                \
    if (!(ptr)) return fail(ST2_ERR_INVALID, #ptr " must not be NULL"); \
  } while (0)

}  // namespace

extern "C" {

const char* st2_last_error(void) { return g_error.c_str(); }
const char* st2_version(void) { return "1.0.0"; }

st2_status st2_bm_load(const char* path, st2_matrix** out) {
  ST2_REQUIRE(path);
  ST2_REQUIRE(out);
  return guarded([&] {
    *out = new st2_matrix{st2::BoundingMatrix::from_json(st2::read_json_file(path))};
    return ST2_OK;
  });
}

st2_status st2_bm_from_json(const char* json, st2_matrix** out) {
  ST2_REQUIRE(json);
  ST2_REQUIRE(out);
  return guarded([&] {
    *out = new st2_matrix{st2::BoundingMatrix::from_json(nlohmann::json::parse(json))};
    return ST2_OK;
  });
}

st2_status st2_bm_standard(const char* name, int s, st2_matrix** out) {
  ST2_REQUIRE(name);
  ST2_REQUIRE(out);
  return guarded([&] {
    const std::string n = name;
    st2::BoundingMatrix m;
    if (n == "rumin") {
      m = st2::rumin_matrix();
    } else if (n == "g2") {
      m = st2::g2_matrix();
    } else if (n == "nilpotent" || n == "carnot") {
      if (s < 1) return fail(ST2_ERR_INVALID, "step must be >= 1");
      m = n == "carnot" ? st2::carnot_matrix(s) : st2::nilpotent_generic_matrix(s);
    } else {
      return fail(ST2_ERR_UNKNOWN, "unknown bounding matrix \"" + n + "\"");
    }
    *out = new st2_matrix{std::move(m)};
    return ST2_OK;
  });
}

void st2_bm_free(st2_matrix* m) { delete m; }
size_t st2_bm_size(const st2_matrix* m) { return m ? m->m.size() : 0; }

st2_status st2_bm_to_json(const st2_matrix* m, char* buf, size_t* len) {
  ST2_REQUIRE(m);
  return guarded([&] { return copy_out(m->m.to_json().dump(), buf, len); });
}

st2_status st2_bm_check(const st2_matrix* m, int* decreasing, st2_report** report) {
  ST2_REQUIRE(m);
  return guarded([&] {
    st2::CycleVerdict v = st2::check_decreasing_cycle(m->m);
    if (decreasing) *decreasing = v.decreasing ? 1 : 0;
    if (!report) return ST2_OK;
    st2::Report r("cone.check", "prod_k eps_{i_k i_{k+1}} < 1 on every cycle");
    st2::Json witness = v.decreasing ? st2::Json(nullptr)
                                     : st2::Json{{"cycle", v.witness}, {"product", st2::to_string(v.product)}};
    r.check("decreasing_cycle", v.decreasing, v.decreasing ? 1 : 0, 1, "==", witness);
    r.data()["matrix"] = st2::Json::parse(m->m.to_json().dump());
    r.data()["exact"] = v.exact;
    if (v.decreasing) {
      auto t = st2::cone_sample(m->m);
      r.data()["cone_sample"] = *t;
    }
    return emit(std::move(r), report);
  });
}

st2_status st2_bm_contains(const st2_matrix* m, const char* const* t, size_t n, int* inside) {
  ST2_REQUIRE(m);
  ST2_REQUIRE(inside);
  return guarded([&] {
    *inside = st2::cone_contains(m->m, rationals(t, n)) ? 1 : 0;
    return ST2_OK;
  });
}

st2_status st2_bm_sample(const st2_matrix* m, double margin, double* t_out, size_t n, int* empty) {
  ST2_REQUIRE(m);
  ST2_REQUIRE(empty);
  return guarded([&] {
    auto t = st2::cone_sample(m->m, margin);
    *empty = t ? 0 : 1;
    if (!t) return ST2_OK;
    if (!t_out || n < t->size()) return fail(ST2_ERR_BUFFER, "t_out needs size() entries");
    std::copy(t->begin(), t->end(), t_out);
    return ST2_OK;
  });
}

st2_status st2_bm_order_bound(const st2_matrix* m, const char* const* t, const char* const* rho,
                              size_t n, char* buf, size_t* len) {
  ST2_REQUIRE(m);
  return guarded([&] {
    std::vector<st2::Rho> r;
    for (size_t i = 0; i < n; ++i) {
      if (!rho) {
        r.push_back(st2::Rho::infinite());
        continue;
      }
      std::string s = rho[i];
      r.push_back(s == "inf" || s == "infinity" ? st2::Rho::infinite()
                                                : st2::Rho::finite(st2::parse_rational(s)));
    }
    return copy_out(st2::to_string(st2::host_order_bound(m->m, rationals(t, n), r)), buf, len);
  });
}

st2_status st2_collection_load(const char* path, st2_collection** out) {
  ST2_REQUIRE(path);
  ST2_REQUIRE(out);
  return guarded([&] {
    std::filesystem::path p(path);
    *out = new st2_collection{st2::collection_from_json(st2::read_json_file(p), p.parent_path())};
    return ST2_OK;
  });
}

void st2_collection_free(st2_collection* c) { delete c; }
size_t st2_collection_count(const st2_collection* c) { return c ? c->c.ops.size() : 0; }
size_t st2_collection_dim(const st2_collection* c) {
  return c ? static_cast<size_t>(c->c.dim()) : 0;
}

st2_status st2_collection_verify(const st2_collection* c, st2_report** report) {
  ST2_REQUIRE(c);
  return guarded([&] {
    st2::Report r("verify", "D_j D_k + D_k D_j = 0 (j != k)");
    st2::AnticommuteDefect d = st2::anticommute_defect(c->c);
    st2::Json datum = d.max_defect <= c->c.anticommute_tol ? st2::Json(nullptr)
                                                           : st2::Json{{"j", d.j}, {"k", d.k}};
    r.check("anticommute", d.max_defect <= c->c.anticommute_tol, d.max_defect,
            c->c.anticommute_tol, "<=", datum);
    long non_hermitian = 0;
    for (const auto& op : c->c.ops) non_hermitian += st2::is_hermitian(op) ? 0 : 1;
    r.check_le("hermitian.failures", static_cast<double>(non_hermitian), 0);
    r.data()["operators"] = c->c.ops.size();
    r.data()["dim"] = c->c.dim();
    r.data()["graded"] = c->c.grading.has_value();
    return emit(std::move(r), report);
  });
}

st2_status st2_collection_assemble(const st2_collection* c, const double* t, size_t n,
                                   const char* out_stem, st2_report** report) {
  ST2_REQUIRE(c);
  ST2_REQUIRE(t);
  return guarded([&] {
    std::vector<double> tv(t, t + n);
    if (tv.size() != c->c.ops.size())
      return fail(ST2_ERR_INVALID, "need one exponent per operator");
    st2::Mat d = st2::assemble(c->c, tv);
    const double gap = st2::max_abs(d * d - st2::delta_form(c->c, tv));
    st2::Report r("assemble", "D_t^2 = Sum_j |D_j|^{2 t_j}");
    r.check_le("square_identity", gap, 1e-10 * static_cast<double>(c->c.dim()));
    r.data()["t"] = tv;
    r.data()["dim"] = c->c.dim();
    if (out_stem) {
      st2::save_matrix_binary(d, out_stem);
      r.data()["written"] = std::string(out_stem) + ".json";
    }
    return emit(std::move(r), report);
  });
}

st2_status st2_complex_load(const char* path, st2_complex** out) {
  ST2_REQUIRE(path);
  ST2_REQUIRE(out);
  return guarded([&] {
    *out = new st2_complex{st2::load_complex(path)};
    return ST2_OK;
  });
}

void st2_complex_free(st2_complex* c) { delete c; }
size_t st2_complex_length(const st2_complex* c) { return c ? c->c.length() : 0; }

st2_status st2_complex_analyze(const st2_complex* c, double tau, st2_report** report) {
  ST2_REQUIRE(c);
  return guarded([&] {
    const auto& cx = c->c;
    st2::Report r("complex", "D_i|D_i|^alpha = d_i Delta_i^{alpha/2a_i} + d_i* Delta_{i+1}^{alpha/2a_i}");
    r.absorb(st2::validate(cx, 1e-10), "validate");
    r.data()["betti"] = st2::betti_numbers(cx);
    std::vector<st2::Rational> m;
    for (int o : cx.orders) m.push_back(o);
    r.data()["bounding_matrix"] = st2::Json::parse(st2::collection_bounding_matrix(cx).to_json().dump());
    r.data()["prescribed_ray"] = st2::Json::array();
    for (const auto& q : st2::prescribed_order_ray(m, st2::rational_from_double(tau)))
      r.data()["prescribed_ray"].push_back(st2::to_string(q));
    for (std::size_t i = 0; i < cx.length(); ++i)
      r.absorb(st2::signed_power_identity_check(cx, i, 1.0), "signed_power.d" + std::to_string(i));
    r.absorb(st2::assembled_formula_check(cx, tau), "assembled");
    return emit(std::move(r), report);
  });
}

st2_status st2_algebra_standard(const char* name, st2_algebra** out) {
  ST2_REQUIRE(name);
  ST2_REQUIRE(out);
  return guarded([&] {
    *out = new st2_algebra{st2::algebra_by_name(name)};
    return ST2_OK;
  });
}

st2_status st2_algebra_load(const char* path, st2_algebra** out) {
  ST2_REQUIRE(path);
  ST2_REQUIRE(out);
  return guarded([&] {
    *out = new st2_algebra{st2::GradedNilpotentAlgebra::from_json(st2::read_json_file(path))};
    return ST2_OK;
  });
}

void st2_algebra_free(st2_algebra* a) { delete a; }
int st2_algebra_dim(const st2_algebra* a) { return a ? a->g.dim() : 0; }
int st2_algebra_step(const st2_algebra* a) { return a ? a->g.step() : 0; }

st2_status st2_algebra_validate(const st2_algebra* a, st2_report** report) {
  ST2_REQUIRE(a);
  return guarded([&] {
    st2::Report r = a->g.validate();
    r.data()["algebra"] = st2::Json::parse(a->g.to_json().dump());
    return emit(std::move(r), report);
  });
}

st2_status st2_algebra_verify_bound(const st2_algebra* a, const st2_matrix* eps,
                                    const char* options_json, st2_report** report) {
  ST2_REQUIRE(a);
  return guarded([&] {
    nlohmann::json o = parse_or_empty(options_json);
    st2::TranslationBoundOptions opt;
    if (o.contains("radii")) opt.radii = o["radii"].get<std::vector<double>>();
    for (std::size_t i = 1; i < opt.radii.size(); ++i)
      if (!(opt.radii[i] > opt.radii[i - 1]))
        return fail(ST2_ERR_INVALID, "radii must be strictly increasing");
    opt.slope_tol = o.value("slope_tol", opt.slope_tol);
    opt.delta = o.value("delta", opt.delta);
    opt.cross_check = o.value("cross_check", opt.cross_check);
    opt.sampling.random_points = o.value("random_points", opt.sampling.random_points);
    opt.sampling.seed = o.value("seed", opt.sampling.seed);
    st2::Chart chart = o.value("chart", std::string("exponential")) == "second_kind"
                           ? st2::Chart::kSecondKind
                           : st2::Chart::kExponential;
    st2::WeightFamily w(a->g, chart);
    st2::BoundingMatrix m = eps ? eps->m : st2::nilpotent_generic_matrix(a->g.step());
    return emit(st2::verify_translation_bound(w, m, opt), report);
  });
}

st2_status st2_algebra_truncate(const st2_algebra* a, double radius, size_t max_points,
                                st2_report** report) {
  ST2_REQUIRE(a);
  return guarded([&] {
    st2::WeightFamily w(a->g);
    st2::LatticeTruncation lt = st2::lattice_truncation(w, radius, max_points);
    st2::Report r("nilpotent.truncate", "|l_i(gh) - l_i(h)| <= C (1 + Sum_j |l_j(h)|^{eps_ij})");
    st2::AnticommuteDefect d = st2::anticommute_defect(lt.coll);
    r.check_le("anticommute", d.max_defect, lt.coll.anticommute_tol);
    st2::Json comm = st2::Json::array();
    for (int b = 0; b < a->g.dim(); ++b) {
      std::vector<double> g(a->g.dim(), 0.0);
      g[b] = 1;
      st2::Mat u = lt.translation(w, g, true);
      std::vector<double> norms;
      for (const auto& op : lt.coll.ops) norms.push_back(st2::opnorm(op * u - u * op));
      comm.push_back({{"g", g}, {"commutator_norms", norms}});
    }
    r.data()["points"] = lt.points.size();
    r.data()["module_dim"] = lt.module_dim;
    r.data()["dim"] = lt.coll.dim();
    r.data()["translations"] = comm;
    r.data()["dropped_images"] = lt.dropped;
    return emit(std::move(r), report);
  });
}

st2_status st2_algebra_dilation(const st2_algebra* a, double tau, const char* t, int samples,
                                uint64_t seed, st2_report** report) {
  ST2_REQUIRE(a);
  ST2_REQUIRE(t);
  return guarded([&] {
    st2::WeightFamily w(a->g);
    return emit(st2::dilation_scaling_check(w, tau, st2::parse_rational(t), samples, seed), report);
  });
}

st2_status st2_rumin_characters(const double* xi, size_t count, double alpha, st2_report** report) {
  ST2_REQUIRE(xi);
  return guarded([&] {
    st2::Report r("rumin.characters", "F(xi) = xi xi* + |xi|^2 (J xi)(J xi)*");
    const st2::M2 j = st2::rotation_j();
    double proj = 0, conj = 0, decomp = 0;
    auto& s = r.series("characters");
    s.columns = {"xi1", "xi2", "l1", "l2", "sup_v_norm_A"};
    for (size_t k = 0; k < count; ++k) {
      st2::R2 x(xi[2 * k], xi[2 * k + 1]);
      st2::CharacterF c = st2::character_matrix_f(x);
      proj = std::max(proj, (c.e1 + c.e2 - st2::M2::Identity()).cwiseAbs().maxCoeff());
      conj = std::max(conj, (c.e2 - j * c.e1 * j.transpose()).cwiseAbs().maxCoeff());
      decomp = std::max(decomp, (c.f - c.l1 * c.e1 - c.l2 * c.e2).cwiseAbs().maxCoeff() /
                                std::max(1.0, c.f.cwiseAbs().maxCoeff()));
      double best = 0;
      for (int a = 0; a < 64; ++a) {
        double phi = M_PI * a / 64;
        best = std::max(best, st2::a_alpha_norm(x, st2::R2(std::cos(phi), std::sin(phi)), alpha));
      }
      s.rows.push_back({x(0), x(1), c.l1, c.l2, best});
    }
    r.check_le("e1_plus_e2_is_identity", proj, 1e-12);
    r.check_le("e2_is_J_e1_J*", conj, 1e-12);
    r.check_le("spectral_decomposition", decomp, 1e-12);
    r.data()["alpha"] = alpha;
    return emit(std::move(r), report);
  });
}

st2_status st2_rumin_oscillator(int n, double lambda, int padding, st2_report** report) {
  return guarded([&] { return emit(st2::rockland_check({n, lambda, padding}), report); });
}

st2_status st2_rumin_naive_demo(const double* alphas, size_t n_alpha, const double* ladder,
                                size_t n_ladder, st2_report** report) {
  ST2_REQUIRE(alphas);
  ST2_REQUIRE(ladder);
  return guarded([&] {
    std::vector<double> av(alphas, alphas + n_alpha), lv(ladder, ladder + n_ladder);
    st2::Report r = st2::naive_rollup_demo(lv, av);
    const st2::R2 v(0.6, 0.8);
    const auto grid = st2::log_grid(10, 1e4, 61);
    auto& s = r.series("ray");
    s.columns = {"t"};
    std::vector<st2::RayProfile> prof;
    for (double a : av) {
      s.columns.push_back("norm.alpha=" + std::to_string(a));
      prof.push_back(st2::ray_profile(v, a, grid));
      r.add_fit("ray.alpha=" + std::to_string(a), prof.back().fit);
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::vector<double> row{grid[k]};
      for (const auto& p : prof) row.push_back(p.norm[k]);
      s.rows.push_back(std::move(row));
    }
    return emit(std::move(r), report);
  });
}

size_t st2_experiment_count(void) { return st2::experiment_list().size(); }

const char* st2_experiment_name(size_t i) {
  const auto& l = st2::experiment_list();
  return i < l.size() ? l[i].name.c_str() : nullptr;
}

const char* st2_experiment_anchor(size_t i) {
  const auto& l = st2::experiment_list();
  return i < l.size() ? l[i].anchor.c_str() : nullptr;
}

const char* st2_experiment_summary(size_t i) {
  const auto& l = st2::experiment_list();
  return i < l.size() ? l[i].summary.c_str() : nullptr;
}

st2_status st2_run_experiment(const char* name, const char* config_json, st2_report** report) {
  ST2_REQUIRE(name);
  return guarded([&] { return emit(st2::run_experiment(name, parse_or_empty(config_json)), report); });
}

st2_status st2_suggest(const char* name, char* buf, size_t* len) {
  ST2_REQUIRE(name);
  return guarded([&] {
    std::string out;
    for (const auto& s : st2::suggest_experiments(name)) out += s + "\n";
    return copy_out(out, buf, len);
  });
}

void st2_report_free(st2_report* r) { delete r; }
int st2_report_passed(const st2_report* r) { return r && r->r.passed() ? 1 : 0; }
size_t st2_report_failures(const st2_report* r) { return r ? r->r.failures() : 0; }

st2_status st2_report_json(const st2_report* r, char* buf, size_t* len) {
  ST2_REQUIRE(r);
  return guarded([&] { return copy_out(r->r.dump(), buf, len); });
}

st2_status st2_report_write(const st2_report* r, const char* dir) {
  ST2_REQUIRE(r);
  ST2_REQUIRE(dir);
  return guarded([&] {
    std::filesystem::path d(dir);
    std::filesystem::create_directories(d);
    auto write = [](const std::filesystem::path& p, const std::string& text) {
      std::ofstream f(p, std::ios::binary);
      if (!f) throw st2::IoError("cannot write " + p.string());
      f << text;
      if (!f) throw st2::IoError("cannot write " + p.string());
    };
    write(d / "report.json", r->r.dump());
    for (const auto& [name, series] : r->r.all_series()) {
      std::string file = name;
      for (char& ch : file)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '-' && ch != '_') ch = '_';
      write(d / (file + ".csv"), series.to_csv());
    }
    return ST2_OK;
  });
}

}  // extern "C"
