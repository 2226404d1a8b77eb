// Copyright 2026 The qfit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line plumbing: config parsing, model construction, reports, decay
// curves and certification suites. tools/qfit.cpp is a thin wrapper over run().

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qfit/bounds.hpp"

namespace qfit::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "qfit-report/1";

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3, kCertificationFailure = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  json model;
  std::vector<double> t_grid;
  int samples = 100;
  int mc_samples = 100000;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  std::string suite = "all";
  int ancilla = 1;
  json initial_state = "random";
  std::optional<double> constant;  // overrides the constant used by the at suite
  double eps = 0.01;               // design mixing-time target
  std::filesystem::path base_dir = ".";
};

// ---------------------------------------------------------------------------
// serialization

inline std::string format_number(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void emit(std::string& out, const json& j, int level) {
  const std::string pad(static_cast<size_t>(2 * (level + 1)), ' ');
  const std::string close(static_cast<size_t>(2 * level), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        emit(out, it.value(), level + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(out, j[i], level + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

// Pretty JSON with every float printed to 17 significant digits.
inline std::string dump_json(const json& j) {
  std::string out;
  detail::emit(out, j, 0);
  out += "\n";
  return out;
}

inline json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

// ---------------------------------------------------------------------------
// config

inline Mat parse_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ConfigError(std::string(what) + ": expected a matrix");
  const auto rows = static_cast<Eigen::Index>(j.size()), cols = static_cast<Eigen::Index>(j[0].size());
  Mat M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) throw ConfigError(std::string(what) + ": ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = j[r][c];
      if (e.is_number()) {
        M(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        M(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ConfigError(std::string(what) + ": entries must be numbers or [re, im]");
      }
    }
  }
  return M;
}

inline RunConfig parse_config(const json& j, const std::filesystem::path& base_dir = ".") {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  c.base_dir = base_dir;
  try {
    if (j.contains("model")) c.model = j.at("model");
    if (j.contains("t_grid")) c.t_grid = j.at("t_grid").get<std::vector<double>>();
    if (j.contains("samples")) c.samples = j.at("samples").get<int>();
    if (j.contains("mc_samples")) c.mc_samples = j.at("mc_samples").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
    if (j.contains("suite")) c.suite = j.at("suite").get<std::string>();
    if (j.contains("ancilla")) c.ancilla = j.at("ancilla").get<int>();
    if (j.contains("initial_state")) c.initial_state = j.at("initial_state");
    if (j.contains("constant")) c.constant = j.at("constant").get<double>();
    if (j.contains("eps")) c.eps = j.at("eps").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.samples < 1) throw ConfigError("samples must be at least 1");
  if (c.mc_samples < 1) throw ConfigError("mc_samples must be at least 1");
  if (c.ancilla < 1) throw ConfigError("ancilla must be at least 1");
  if (!(c.tolerance > 0)) throw ConfigError("tolerance must be positive");
  for (size_t i = 0; i < c.t_grid.size(); ++i) {
    if (!(c.t_grid[i] >= 0)) throw ConfigError("t_grid must be nonnegative");
    if (i && !(c.t_grid[i] > c.t_grid[i - 1])) throw ConfigError("t_grid must be increasing");
  }
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

// ---------------------------------------------------------------------------
// models

struct BuiltModel {
  std::string tag;
  std::string id;
  LindbladSpec L;
  Mat sigma;
  Graph G;
  int d = 0;
  int k = 1;
  int m = 0;
  DesignMeasure mu;
  bool haar = false;
};

template <class T>
T param(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("model: missing parameter ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model: bad parameter ") + key + ": " + e.what());
  }
}

inline Graph parse_graph(const json& j) {
  if (!j.is_object()) throw ConfigError("graph must be an object");
  const int n = param<int>(j, "n");
  if (n < 2) throw ConfigError("graph: n must be at least 2");
  if (j.contains("edges")) {
    std::vector<std::pair<int, int>> e;
    for (const auto& p : j.at("edges")) {
      if (!p.is_array() || p.size() != 2) throw ConfigError("graph: edges must be pairs");
      e.push_back({p[0].get<int>(), p[1].get<int>()});
    }
    try {
      return Graph(n, e);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what());
    }
  }
  const std::string kind = j.value("kind", "path");
  if (kind == "path") return Graph::path(n);
  if (kind == "cycle") return Graph::cycle(n);
  if (kind == "complete") return Graph::complete(n);
  throw ConfigError("graph: unknown kind " + kind);
}

inline std::string graph_id(const json& j) {
  if (j.contains("edges")) return "edges(" + std::to_string(j.at("n").get<int>()) + ")";
  return j.value("kind", "path") + "(" + std::to_string(j.at("n").get<int>()) + ")";
}

inline long int_pow(int b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

inline void check_dim(long D) {
  if (D > kMaxSuperopDim) throw ConfigError("model: Hilbert dimension " + std::to_string(D) + " exceeds " + std::to_string(kMaxSuperopDim));
}

inline DesignMeasure random_symmetric_measure(int D, int count, Rng& rng) {
  if (count < 1) throw ConfigError("mu: count must be at least 1");
  std::vector<Mat> us;
  for (int i = 0; i < count; ++i) us.push_back(haar_unitary(D, rng));
  return DesignMeasure::symmetrized(us);
}

inline Mat parse_hamiltonian(const json& j, int d) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    Mat h = Mat::Zero(d, d);
    if (s == "z" && d == 2) {
      h(0, 0) = 1.0;
      h(1, 1) = -1.0;
      return h;
    }
    if (s == "ladder") {
      for (int i = 0; i < d; ++i) h(i, i) = i;
      return h;
    }
    throw ConfigError("hamiltonian: unknown name " + s);
  }
  Mat h = parse_matrix(j, "hamiltonian");
  if (h.rows() != d || h.cols() != d || !is_hermitian(h)) throw ConfigError("hamiltonian: must be a Hermitian d x d matrix");
  return h;
}

inline BuiltModel build_model(const RunConfig& cfg, Rng& rng) {
  const json& j = cfg.model;
  if (!j.is_object() || !j.contains("type")) throw ConfigError("config: model.type is required");
  BuiltModel b;
  b.tag = param<std::string>(j, "type");
  if (b.tag == "su2_subH" || b.tag == "su2_full") {
    b.m = param<int>(j, "m");
    if (b.m < 2 || b.m > 8) throw ConfigError("su2: m must lie in [2, 8]");
    b.L = b.tag == "su2_subH" ? su2_sublaplacian(b.m) : su2_laplacian(b.m);
    b.id = b.tag + "{m:" + std::to_string(b.m) + "}";
  } else if (b.tag == "dephase") {
    auto spec = param<std::vector<double>>(j, "spectrum");
    if (spec.size() < 2) throw ConfigError("dephase: spectrum needs at least two entries");
    check_dim(static_cast<long>(spec.size()));
    b.L = dephasing_lindbladian(spec);
    std::string s;
    for (double x : spec) s += (s.empty() ? "" : ",") + format_number(x);
    b.id = "dephase{spectrum:[" + s + "]}";
  } else if (b.tag == "nnrt") {
    b.G = parse_graph(param<json>(j, "graph"));
    b.d = param<int>(j, "d");
    if (b.d < 2) throw ConfigError("nnrt: d must be at least 2");
    check_dim(int_pow(b.d, b.G.n_vertices));
    b.L = nnrt_lindbladian(b.G, b.d);
    b.id = "nnrt{" + graph_id(j.at("graph")) + ",d:" + std::to_string(b.d) + "}";
  } else if (b.tag == "design") {
    b.G = parse_graph(param<json>(j, "graph"));
    b.d = param<int>(j, "d");
    b.k = j.value("k", 1);
    if (b.d < 2 || b.k < 1) throw ConfigError("design: need d >= 2 and k >= 1");
    check_dim(int_pow(b.d, b.G.n_vertices * b.k));
    const json mu = j.value("mu", json("haar"));
    std::string mu_id;
    if (mu.is_string() && mu.get<std::string>() == "haar") {
      b.mu = DesignMeasure::haar(b.d * b.d);
      b.haar = true;
      mu_id = "haar";
    } else if (mu.is_object() && mu.value("kind", "") == "random") {
      int count = mu.value("count", 2);
      b.mu = random_symmetric_measure(b.d * b.d, count, rng);
      mu_id = "random" + std::to_string(count);
    } else {
      throw ConfigError("design: mu must be \"haar\" or {\"kind\": \"random\", \"count\": c}");
    }
    b.L = design_lindbladian(b.G, b.d, b.k, b.mu);
    b.id = "design{" + graph_id(j.at("graph")) + ",d:" + std::to_string(b.d) + ",k:" + std::to_string(b.k) + ",mu:" + mu_id + "}";
  } else if (b.tag == "kac") {
    const int n = param<int>(j, "n");
    b.d = param<int>(j, "d");
    if (n < 2 || b.d < 2) throw ConfigError("kac: need n >= 2 and d >= 2");
    check_dim(int_pow(b.d, n));
    b.G = Graph::complete(n);
    const json spec = j.value("spec", json("haar"));
    CollisionSpec cs;
    std::string spec_id;
    if (spec.is_string() && spec.get<std::string>() == "haar") {
      cs.measure = DesignMeasure::haar(b.d * b.d);
      b.haar = true;
      spec_id = "haar";
    } else if (spec.is_object()) {
      cs.h = parse_hamiltonian(spec.value("hamiltonian", json("ladder")), b.d);
      int count = spec.value("count", 2);
      if (count < 1) throw ConfigError("kac: count must be at least 1");
      std::vector<Mat> us;
      for (int i = 0; i < count; ++i) us.push_back(energy_preserving_unitary(cs.h, rng));
      cs.measure = collision_closure(us);
      spec_id = "energy" + std::to_string(count);
    } else {
      throw ConfigError("kac: spec must be \"haar\" or an object");
    }
    b.mu = cs.measure;
    b.L = kac_lindbladian(n, b.d, cs);
    b.id = "kac{n:" + std::to_string(n) + ",d:" + std::to_string(b.d) + ",spec:" + spec_id + "}";
  } else if (b.tag == "custom") {
    std::filesystem::path p = param<std::string>(j, "file");
    if (p.is_relative()) p = cfg.base_dir / p;
    std::ifstream in(p);
    if (!in) throw ConfigError("custom: cannot open " + p.string());
    json f;
    try {
      f = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("custom: " + std::string(e.what()));
    }
    if (f.contains("hermitian")) {
      std::vector<Mat> a;
      for (const auto& x : f.at("hermitian")) a.push_back(parse_matrix(x, "custom.hermitian"));
      if (a.empty()) throw ConfigError("custom: empty term list");
      check_dim(a[0].rows());
      b.L = build_symmetric_lindbladian(a);
    } else if (f.contains("jumps")) {
      std::vector<Jump> js;
      for (const auto& x : f.at("jumps")) js.push_back({parse_matrix(x.at("A"), "custom.jumps.A"), x.value("omega", 0.0)});
      if (js.empty()) throw ConfigError("custom: empty jump list");
      const auto D = js[0].A.rows();
      check_dim(D);
      Mat sigma = f.contains("sigma") ? parse_matrix(f.at("sigma"), "custom.sigma") : Mat(Mat::Identity(D, D) / static_cast<double>(D));
      b.L = build_gns_lindbladian(js, sigma);
    } else {
      throw ConfigError("custom: file needs \"jumps\" or \"hermitian\"");
    }
    b.id = "custom{" + p.filename().string() + "}";
  } else {
    throw ConfigError("unknown model type " + b.tag);
  }
  b.sigma = b.L.sigma.size() ? b.L.sigma : Mat(Mat::Identity(b.L.dim, b.L.dim) / static_cast<double>(b.L.dim));
  return b;
}

// ---------------------------------------------------------------------------
// analyze

inline void put(ConstantsReport& r, const std::string& key, double v) { r.values.emplace_back(key, v); }

inline ConstantsReport analyze(const RunConfig& cfg) {
  Rng rng(cfg.seed);
  BuiltModel b = build_model(cfg, rng);
  ConstantsReport r;
  r.model_id = b.id;
  r.seed = cfg.seed;
  r.tolerance = cfg.tolerance;

  SpectralReport sp = spectral_gap(b.L, b.sigma);
  r.gap = sp.gap;
  ConditionalExpectation E = fixed_point_expectation(b.L, b.sigma);
  r.indices = index(E);
  const double base = r.gap / r.indices.C_tau_cb;
  r.cmlsi_lower = base;
  r.cmlsi_upper = 2.0 * r.gap;
  r.provenance.push_back("gap-over-index");
  put(r, "fixed_space_dim", sp.fixed_space_dim);
  put(r, "cmlsi_gap_over_index", base);
  put(r, "mlsi_gap_over_index", r.gap / r.indices.C_tau);
  const double kappa = std::exp(-2.0 * r.gap);
  r.sdpi = SdpiBlock{kappa, sdpi_constant(r.indices.C_tau_cb, kappa)};
  r.provenance.push_back("sdpi-unit-time-channel");

  const cplx I(0.0, 1.0);
  if (b.tag == "su2_subH") {
    Su2Refined s = su2_refined_pipeline(b.m);
    UncertaintyBlock u{s.lambda1, s.lambda2, s.c1, std::nullopt, s.c3};
    if (std::isfinite(s.c2)) u.c2 = s.c2;
    r.uncertainty = u;
    r.at = AtBlock{"meta", s.c3};
    put(r, "c_bar", s.c_bar);
    put(r, "alpha_refined", s.alpha_refined);
    put(r, "alpha_exact_c3", s.alpha_exact_c3);
    put(r, "alpha_unit_gap", s.alpha_unit_gap);
    r.cmlsi_lower = std::max(r.cmlsi_lower, s.alpha_refined);
    r.provenance.push_back("uncertainty-tensorization");
  } else if (b.tag == "su2_full") {
    Su2Irrep ir = su2_irrep(b.m);
    SymmetricCmlsi s = symmetric_cmlsi({Mat(I * ir.X / 2.0), Mat(I * ir.Y / 2.0), Mat(I * ir.Z / 2.0)});
    put(r, "lambda_E", s.lambda_E);
    put(r, "noncommuting_degree", s.m);
    put(r, "lambda_avg", s.lambda_avg);
    put(r, "lambda_prod", s.lambda_prod);
    put(r, "lambda_prod_measured", s.lambda_prod_measured);
    put(r, "cmlsi_avg", s.avg_lower);
    put(r, "cmlsi_prod", s.prod_lower);
    r.cmlsi_lower = std::max({r.cmlsi_lower, s.avg_lower, s.prod_lower});
    r.provenance.push_back("dephasing-sum");
  } else if (b.tag == "dephase") {
    std::vector<double> spec = cfg.model.at("spectrum").get<std::vector<double>>();
    SchurBound s = schur_cmlsi_lower(spec);
    put(r, "schur_gap", s.gap);
    put(r, "schur_lower", s.lower);
    r.cmlsi_lower = std::max(r.cmlsi_lower, s.lower);
    r.provenance.push_back("schur-multiplier");
  } else if ((b.tag == "nnrt" || (b.tag == "design" && b.k == 1)) && b.L.dim <= 32) {
    LindbladSpec local;
    if (b.tag == "nnrt") {
      local = build_symmetric_lindbladian({Mat(swap_operator(b.d) / 2.0)});
    } else {
      const int dl = b.d * b.d;
      Mat loc = design_channel(b.mu, 1).matrix.adjoint();
      loc -= Mat::Identity(loc.rows(), loc.cols());
      local = lindbladian_from_superop(loc, Mat(Mat::Identity(dl, dl) / static_cast<double>(dl)));
    }
    GraphCmlsi g = graph_cmlsi(b.G, local, b.d);
    put(r, "gamma", g.gamma);
    put(r, "lambda_tilde", g.lambda_tilde);
    put(r, "lambda", g.lambda);
    put(r, "C_G", g.C_G);
    put(r, "c_G_inv", g.c_G_inv);
    put(r, "C", g.C);
    put(r, "alpha_edge_min", g.alpha_edge_min);
    put(r, "cmlsi_graph", g.cmlsi_lower);
    r.at = AtBlock{"graph", g.at_constant};
    r.cmlsi_lower = std::max(r.cmlsi_lower, g.cmlsi_lower);
    r.provenance.push_back("graph-tensorization");
    if (b.tag == "nnrt" && b.G.n_vertices <= 6) put(r, "classical_gap", classical_gap(symmetric_group_chain(b.G.n_vertices, b.G, false)));
  } else if (b.tag == "nnrt" || b.tag == "design") {
    r.notes.push_back("graph bound skipped above dimension 32");
  }
  if (b.tag == "design") {
    put(r, "kernel_dim", kernel_dimension(b.L));
    put(r, "mixing_time", design_mixing_time(r.cmlsi_lower, b.G.n_vertices, b.k, b.d, cfg.eps));
    const int D = b.d * b.d;
    if (b.haar && int_pow(D, b.k) <= kMaxSuperopDim) {
      // local edge twirl: block-structure index next to the closed form
      auto di = design_index(D, b.k);
      put(r, "edge_index_blocks", di.blocks);
      put(r, "edge_index_binomial", di.binomial);
      if (!di.agree) r.notes.push_back("edge index: closed form disagrees with block structure; using blocks");
    }
  }
  if (b.tag == "kac") {
    const int n = b.G.n_vertices;
    put(r, "kernel_dim", kernel_dimension(b.L));
    if (b.haar) {
      const double a = 2.0 / (n - 1);
      put(r, "alpha_exact_tensorization", a);
      r.cmlsi_lower = std::max(r.cmlsi_lower, a);
      r.provenance.push_back("kac-exact-tensorization");
    }
    if (cfg.model.contains("lambda0") && n >= 4) {
      const double l0 = param<double>(cfg.model, "lambda0");
      const double c = cfg.model.value("c", 1.0);
      put(r, "kac_at_constant", kac_at_constant(l0, n, c));
      auto [a1, a2] = kac_cmlsi_lower(1.0, r.indices.C_cb, n, l0, c);
      put(r, "kac_cmlsi_lower", a1);
      put(r, "kac_cmlsi_lower_rescaled", a2);
      r.provenance.push_back("kac-correlation-decay");
    }
  }
  return r;
}

inline json indices_json(const IndexReport& x) {
  json j;
  j["C"] = number(x.C);
  j["C_cb"] = number(x.C_cb);
  j["C_tau"] = number(x.C_tau);
  j["C_tau_cb"] = number(x.C_tau_cb);
  return j;
}

inline json report_json(const ConstantsReport& r) {
  json j;
  j["schema"] = kSchema;
  j["kind"] = "analyze";
  j["model"] = r.model_id;
  j["gap"] = number(r.gap);
  j["indices"] = indices_json(r.indices);
  j["cmlsi"] = json{{"lower", number(r.cmlsi_lower)}, {"upper", number(r.cmlsi_upper)}};
  j["sdpi"] = r.sdpi ? json{{"kappa", number(r.sdpi->kappa)}, {"c_upper", number(r.sdpi->c_upper)}} : json(nullptr);
  j["at"] = r.at ? json{{"method", r.at->method}, {"constant", number(r.at->constant)}} : json(nullptr);
  if (r.uncertainty) {
    json u;
    u["lambda1"] = number(r.uncertainty->lambda1);
    u["lambda2"] = number(r.uncertainty->lambda2);
    u["c1"] = number(r.uncertainty->c1);
    u["c2"] = r.uncertainty->c2 ? number(*r.uncertainty->c2) : json(nullptr);
    u["c3"] = r.uncertainty->c3 ? number(*r.uncertainty->c3) : json(nullptr);
    j["uncertainty"] = u;
  } else {
    j["uncertainty"] = nullptr;
  }
  json v = json::object();
  for (const auto& [k, x] : r.values) v[k] = number(x);
  j["values"] = v;
  j["provenance"] = r.provenance;
  j["notes"] = r.notes;
  j["tolerance"] = number(r.tolerance);
  j["seed"] = r.seed;
  return j;
}

// ---------------------------------------------------------------------------
// decay

inline Mat initial_state(const RunConfig& cfg, int D, Rng& rng) {
  const int Dt = D * cfg.ancilla;
  const json& s = cfg.initial_state;
  if (s.is_string()) {
    const std::string name = s.get<std::string>();
    if (name == "random") return random_state(Dt, rng);
    if (name == "random_pure") return random_state(Dt, rng, 1);
    if (name == "hadamard") {
      if (Dt != 2) throw ConfigError("initial_state hadamard needs a qubit without ancilla");
      return Mat::Constant(2, 2, 0.5);
    }
    if (name == "max_entangled") {
      if (cfg.ancilla != D) throw ConfigError("initial_state max_entangled needs ancilla equal to the system dimension");
      Vec v = Vec::Zero(Dt);
      for (int i = 0; i < D; ++i) v(i * D + i) = 1.0 / std::sqrt(static_cast<double>(D));
      return v * v.adjoint();
    }
    throw ConfigError("unknown initial_state " + name);
  }
  Mat rho = parse_matrix(s, "initial_state");
  if (rho.rows() != Dt || rho.cols() != Dt) throw ConfigError("initial_state: dimension mismatch");
  if (!is_hermitian(rho, 1e-9) || min_eig(herm(rho)) < -1e-9 || std::abs(rho.trace().real() - 1.0) > 1e-9)
    throw ConfigError("initial_state: not a density matrix");
  return herm(rho);
}

inline std::vector<double> default_t_grid() {
  std::vector<double> t;
  for (int i = 0; i <= 20; ++i) t.push_back(0.5 * i);
  return t;
}

inline std::string decay_csv(const RunConfig& cfg) {
  ConstantsReport rep = analyze(cfg);
  Rng rng(cfg.seed);
  BuiltModel b = build_model(cfg, rng);
  ConditionalExpectation E = fixed_point_expectation(b.L, b.sigma);
  Rng srng(cfg.seed ^ 0x5eed5eedULL);
  Mat rho = initial_state(cfg, b.L.dim, srng);
  Mat ref = apply_on_system(E.superop_schrodinger(), rho, cfg.ancilla);
  const double D0 = relative_entropy(rho, ref);
  const double alpha = rep.cmlsi_lower;
  std::ostringstream out;
  out << "t,relative_entropy,certified_bound,alpha,seed\n";
  for (double t : cfg.t_grid.empty() ? default_t_grid() : cfg.t_grid) {
    double Dt = t == 0.0 ? D0 : relative_entropy(herm(apply_on_system(schrodinger_semigroup(b.L, t), rho, cfg.ancilla)), ref);
    double bound = std::exp(-alpha * t) * D0;
    char line[160];
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%llu\n", t, Dt, bound, alpha, static_cast<unsigned long long>(cfg.seed));
    out << line;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// certification suites

struct SuiteResult {
  std::string name;
  long passed = 0;
  long failed = 0;
  double max_violation = -kInf;

  void check(double violation, double slack = 0.0) {
    max_violation = std::max(max_violation, violation);
    (violation > slack ? failed : passed)++;
  }
};

inline SuiteResult suite_sandwich(const RunConfig& cfg, Rng& rng) {
  SuiteResult s{"sandwich"};
  for (int i = 0; i < cfg.samples; ++i) {
    const int d = 2 + i % 5;
    SandwichResult r = sandwich_check(random_state(d, rng), random_state(d, rng));
    s.check(std::max(-r.lower_slack, -r.upper_slack), 1e-8);
  }
  return s;
}

inline SuiteResult suite_dpi(const RunConfig& cfg, Rng& rng) {
  SuiteResult s{"dpi"};
  for (int i = 0; i < cfg.samples; ++i) {
    const int d = 2 + i % 3;
    QuantumChannel Phi = channel_from_kraus(random_kraus(d, 1 + i % 3, rng));
    Mat rho = random_state(d, rng), sigma = random_state(d, rng);
    double dre = relative_entropy(Phi.apply(rho), Phi.apply(sigma)) - relative_entropy(rho, sigma);
    double dchi = chi_square_states(Phi.apply(rho), herm(Phi.apply(sigma))) - chi_square_states(rho, sigma);
    s.check(std::max(dre, dchi), 1e-8);
  }
  return s;
}

// Pinchings on the two factors of C^2 (x) C^2: a commuting square.
inline std::array<ConditionalExpectation, 3> tensor_factor_pinchings() {
  Mat P = Mat::Zero(4, 4);
  P(0, 0) = P(1, 2) = P(2, 1) = P(3, 3) = 1.0;
  return {trace_conditional_expectation(structure_from_blocks(4, {Block{2, 1}, Block{2, 1}}, Mat::Identity(4, 4))),
          trace_conditional_expectation(structure_from_blocks(4, {Block{2, 1}, Block{2, 1}}, P)),
          trace_conditional_expectation(diagonal_structure(Mat::Identity(4, 4)))};
}

inline SuiteResult suite_at(const RunConfig& cfg, Rng& rng) {
  SuiteResult s{"at"};
  auto add = [&](const AtValidation& v) {
    s.max_violation = std::max(s.max_violation, v.max_violation);
    s.failed += v.violations;
    s.passed += v.samples - v.violations;
  };
  Su2Irrep ir = su2_irrep(3);
  ConditionalExpectation EX = pinching(su2_eigenbasis(ir.X)), EY = pinching(su2_eigenbasis(ir.Y));
  ConditionalExpectation EN = trace_conditional_expectation(trivial_structure(3));
  if (cfg.constant) {
    add(at_validate(EX, EY, EN, *cfg.constant, cfg.samples, rng, 3));
    return s;
  }
  auto tf = tensor_factor_pinchings();
  add(at_validate(tf[0], tf[1], tf[2], 1.0, cfg.samples, rng, 1));
  UncertaintyTwo u = uncertainty_two(su2_eigenbasis(ir.X), su2_eigenbasis(ir.Y));
  for (double c : {u.c1, u.c2.value_or(u.c1), u.c3.value_or(u.c1)}) add(at_validate(EX, EY, EN, c, cfg.samples, rng, 3));
  return s;
}

inline Mat random_projector(int d, int rank, Rng& rng) {
  Mat V = haar_unitary(d, rng).leftCols(rank);
  return V * V.adjoint();
}

inline SuiteResult suite_detectability(const RunConfig& cfg, Rng& rng) {
  SuiteResult s{"detectability"};
  for (int i = 0; i < cfg.samples; ++i) {
    const int d = 2 + i % 7;
    const int l = 2 + i % 3;
    std::vector<Mat> P;
    if (i % 2 == 0) {
      for (int q = 0; q < l; ++q) P.push_back(random_projector(d, 1 + randint(rng, 0, d - 2), rng));
    } else {
      // shared invariant vector: a nontrivial common range
      Vec v = random_pure_vector(d, rng);
      Mat Q = Mat::Identity(d, d) - v * v.adjoint();
      for (int q = 0; q < l; ++q) {
        Mat W = Q * ginibre(d, d, rng) * Q;
        Mat B = column_span(W, 1e-10);
        int r = std::max(0, randint(rng, 0, d - 2));
        Mat R = B.leftCols(std::min<Eigen::Index>(r, B.cols()));
        P.push_back(herm(v * v.adjoint() + R * R.adjoint()));
      }
    }
    const double gap = projection_family_gap(P);
    const int g = std::max(1, noncommuting_degree(P));
    DetectabilityResult r = detectability_bound(P, g, gap);
    s.check(r.measured - r.bound, 1e-8);
  }
  return s;
}

// Trace-symmetric unital channel with a nontrivial fixed-point algebra:
// unitary Kraus operators closed under adjoints, block diagonal in a random basis.
inline QuantumChannel random_symmetric_channel(int d, Rng& rng, ConditionalExpectation* E = nullptr) {
  Mat V = haar_unitary(d, rng);
  const int split = d >= 3 ? 1 + randint(rng, 0, d - 2) : (randint(rng, 0, 1) ? 1 : d);
  std::vector<Mat> us;
  const int nu = 1 + randint(rng, 0, 1);
  for (int q = 0; q < nu; ++q) {
    Mat U = Mat::Zero(d, d);
    U.topLeftCorner(split, split) = haar_unitary(split, rng);
    if (split < d) U.bottomRightCorner(d - split, d - split) = haar_unitary(d - split, rng);
    us.push_back(V * U * V.adjoint());
  }
  const double w0 = 0.2 + 0.3 * randu(rng);
  std::vector<Mat> K{std::sqrt(w0) * Mat::Identity(d, d)};
  const double w = (1.0 - w0) / (2.0 * nu);
  for (const auto& U : us) {
    K.push_back(std::sqrt(w) * U);
    K.push_back(std::sqrt(w) * U.adjoint());
  }
  if (E) *E = trace_conditional_expectation(commutant(algebra_closure(us)));
  return channel_from_kraus(K);
}

inline SuiteResult suite_cp_order(const RunConfig& cfg, Rng& rng) {
  SuiteResult s{"cp_order"};
  const int n = std::max(1, cfg.samples / 5);
  for (int i = 0; i < n; ++i) {
    const int d = 2 + i % 3;
    ConditionalExpectation E;
    QuantumChannel Phi = random_symmetric_channel(d, rng, &E);
    for (int k = 1; k <= 10; ++k) {
      CpOrder c = cp_order_epsilon(Phi, E, k);
      s.check(c.eps_measured - c.eps_bound_index, 1e-8);
    }
  }
  return s;
}

inline SuiteResult suite_designs(const RunConfig& cfg, Rng& rng) {
  SuiteResult s{"designs"};
  for (int D : {2, 3, 4}) {
    HaarTwirl t1 = haar_twirl(D, 1);
    for (int q = 0; q < 4; ++q) {
      Mat X = ginibre(D, D, rng);
      s.check((t1.apply(X) - X.trace() * Mat::Identity(D, D) / static_cast<double>(D)).cwiseAbs().maxCoeff(), 1e-12);
    }
    HaarTwirl t2 = haar_twirl(D, 2);
    s.check((t2.S.matrix * t2.S.matrix - t2.S.matrix).cwiseAbs().maxCoeff(), 1e-10);
    Mat X = ginibre(D * D, D * D, rng);
    Mat mc = monte_carlo_twirl(X, D, 2, cfg.mc_samples, rng);
    const double tol = 5e-3 * std::sqrt(1e5 / cfg.mc_samples) * std::max(1.0, X.cwiseAbs().maxCoeff());
    s.check((mc - t2.apply(X)).cwiseAbs().maxCoeff(), tol);
    Mat U2 = tensor_power(haar_unitary(D, rng), 2);
    Mat Y = t2.apply(X);
    s.check((U2 * Y * U2.adjoint() - Y).cwiseAbs().maxCoeff(), 1e-9);
  }
  return s;
}

inline SuiteResult suite_graphs(const RunConfig&, Rng&) {
  SuiteResult s{"graphs"};
  for (int n = 8; n <= 64; ++n) {
    auto parts = graph_decompose(n);
    double bad = static_cast<double>(n / 4) - static_cast<double>(parts.size());
    std::set<std::pair<int, int>> used;
    for (const auto& g : parts) {
      if (!g.connected() || g.max_degree() > 3) bad = std::max(bad, 1.0);
      auto deg = g.degrees();
      for (int x : deg)
        if (x == 0) bad = std::max(bad, 1.0);
      for (auto e : g.edges)
        if (!used.insert(e).second) bad = std::max(bad, 1.0);
    }
    s.check(bad, 0.0);
  }
  for (int n : {3, 4}) s.check(std::abs(classical_gap(symmetric_group_chain(n, Graph::complete(n))) - n), 1e-9);
  return s;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"sandwich", "dpi", "at", "detectability", "cp_order", "designs", "graphs"};
  return names;
}

inline std::vector<SuiteResult> certify(const RunConfig& cfg) {
  std::vector<std::string> todo;
  if (cfg.suite == "all") {
    todo = suite_names();
  } else if (std::find(suite_names().begin(), suite_names().end(), cfg.suite) != suite_names().end()) {
    todo = {cfg.suite};
  } else {
    throw ConfigError("unknown suite " + cfg.suite);
  }
  std::vector<SuiteResult> out;
  for (size_t i = 0; i < todo.size(); ++i) {
    Rng rng(cfg.seed + 0x9e3779b97f4a7c15ULL * (i + 1));
    const std::string& n = todo[i];
    if (n == "sandwich") out.push_back(suite_sandwich(cfg, rng));
    else if (n == "dpi") out.push_back(suite_dpi(cfg, rng));
    else if (n == "at") out.push_back(suite_at(cfg, rng));
    else if (n == "detectability") out.push_back(suite_detectability(cfg, rng));
    else if (n == "cp_order") out.push_back(suite_cp_order(cfg, rng));
    else if (n == "designs") out.push_back(suite_designs(cfg, rng));
    else out.push_back(suite_graphs(cfg, rng));
  }
  return out;
}

inline json certify_json(const std::vector<SuiteResult>& rs, const RunConfig& cfg) {
  json j;
  j["schema"] = kSchema;
  j["kind"] = "certify";
  json arr = json::array();
  long passed = 0, failed = 0;
  double mv = -kInf;
  for (const auto& r : rs) {
    arr.push_back(json{{"name", r.name}, {"passed", r.passed}, {"failed", r.failed}, {"max_violation", number(r.max_violation)}});
    passed += r.passed;
    failed += r.failed;
    mv = std::max(mv, r.max_violation);
  }
  j["suites"] = arr;
  j["passed"] = passed;
  j["failed"] = failed;
  j["max_violation"] = number(mv);
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  return j;
}

// ---------------------------------------------------------------------------
// models listing

struct ModelInfo {
  const char* tag;
  const char* params;
  const char* exercises;
};

inline const std::vector<ModelInfo>& model_table() {
  static const std::vector<ModelInfo> t{
      {"su2_subH", "m in [2, 8]", "§6.3 sub-Laplacian; Thm 3.3, Cor 5.8"},
      {"su2_full", "m in [2, 8]", "§6.3 Laplacian; Thm 6.1"},
      {"dephase", "spectrum: 2..64 reals", "Schur multipliers; Thm 3.3"},
      {"nnrt", "graph, d (d^n <= 64)", "§7.1; Thm 7.1, Prop 6.3"},
      {"design", "graph, d, k, mu (d^(nk) <= 64)", "§7.2; Thm 7.1, Lemma 7.3"},
      {"kac", "n, d, spec (d^n <= 64)", "§7.3; Thm 7.7"},
      {"custom", "file with jumps or hermitian terms", "Thm 3.3, Thm 4.2"},
  };
  return t;
}

inline std::string models_listing() {
  std::string out;
  char line[200];
  for (const auto& m : model_table()) {
    std::snprintf(line, sizeof line, "%-10s %-36s %s\n", m.tag, m.params, m.exercises);
    out += line;
  }
  return out;
}

// ---------------------------------------------------------------------------
// entry point

inline void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

inline int run(int argc, char** argv) {
  CLI::App app{"qfit: constants for quantum Markov semigroups"};
  app.require_subcommand(1);
  std::string config_path, out_path, suite;
  std::optional<std::uint64_t> seed;
  auto common = [&](CLI::App* s, bool needs_config) {
    auto* o = s->add_option("--config", config_path, "JSON run configuration");
    if (needs_config) o->required();
    s->add_option("--seed", seed, "64-bit seed (overrides the config)");
    s->add_option("--out", out_path, "output file (default stdout)");
  };
  auto* a = app.add_subcommand("analyze", "constants report for a model");
  common(a, true);
  auto* d = app.add_subcommand("decay", "entropy decay curve as CSV");
  common(d, true);
  auto* c = app.add_subcommand("certify", "run certification suites");
  common(c, false);
  c->add_option("--suite", suite, "sandwich|dpi|at|detectability|cp_order|designs|graphs|all");
  auto* m = app.add_subcommand("models", "list models");
  m->add_option("--out", out_path, "output file (default stdout)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }
  try {
    if (*m) {
      write_output(out_path, models_listing());
      return kOk;
    }
    RunConfig cfg = config_path.empty() ? parse_config(json::object()) : load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!suite.empty()) cfg.suite = suite;
    if (*a) {
      if (cfg.model.is_null()) throw ConfigError("config: model is required");
      write_output(out_path, dump_json(report_json(analyze(cfg))));
      return kOk;
    }
    if (*d) {
      if (cfg.model.is_null()) throw ConfigError("config: model is required");
      write_output(out_path, decay_csv(cfg));
      return kOk;
    }
    auto rs = certify(cfg);
    write_output(out_path, dump_json(certify_json(rs, cfg)));
    for (const auto& r : rs)
      if (r.failed) return kCertificationFailure;
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DimensionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace qfit::cli
