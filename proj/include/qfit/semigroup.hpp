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

// Lindbladians, channels, fixed-point algebras, spectral gaps and L2
// contraction coefficients.
//
// Superoperators are stored in the Heisenberg picture; the Schroedinger
// picture is the Hilbert-Schmidt adjoint. Dense superoperators are only
// materialized for D <= kMaxSuperopDim.

#include "qfit/algebra.hpp"
#include "qfit/graph.hpp"

namespace qfit {

inline constexpr int kMaxSuperopDim = 64;

enum class FormTag { gns, symmetric, generic };

inline const char* to_string(FormTag f) {
  switch (f) {
    case FormTag::gns: return "gns";
    case FormTag::symmetric: return "symmetric";
    default: return "generic";
  }
}

struct Jump {
  Mat A;
  double omega = 0.0;
};

struct LindbladSpec {
  int dim = 0;
  std::vector<Jump> jumps;  // empty for generic (channel-built) generators
  FormTag form = FormTag::generic;
  Mat L;      // Heisenberg superoperator, D^2 x D^2
  Mat sigma;  // declared invariant state; empty when none was declared

  Superoperator heisenberg() const { return {dim, L}; }
  Superoperator schrodinger() const { return {dim, L.adjoint()}; }
  Mat apply(const Mat& X) const { return unvec(L * vec(X), dim); }
  Mat apply_star(const Mat& rho) const { return unvec(L.adjoint() * vec(rho), dim); }
};

inline void check_superop_dim(int D) {
  if (D > kMaxSuperopDim) throw DimensionError("superoperator dimension exceeds the dense budget");
}

// sum_j e^{-w/2}(A^dag X A - A^dag A X) + e^{w/2}(A X A^dag - X A A^dag)
inline Mat gns_superop(const std::vector<Jump>& jumps, int D) {
  check_superop_dim(D);
  Mat I = Mat::Identity(D, D);
  Mat L = Mat::Zero(D * D, D * D);
  for (const auto& j : jumps) {
    const Mat& A = j.A;
    Mat Ad = A.adjoint();
    double em = std::exp(-j.omega / 2), ep = std::exp(j.omega / 2);
    L += em * (kron(A.transpose(), Ad) - kron(I, Ad * A));
    L += ep * (kron(A.conjugate(), A) - kron((A * Ad).transpose(), I));
  }
  return L;
}

// GNS weight for <X, Y>_{sigma,s} = tr(X^dag sigma^{1-s} Y sigma^s).
inline Mat weight_matrix(const Mat& sigma, double s = 1.0) {
  return kron(mpow(sigma, s).transpose(), mpow(sigma, 1.0 - s));
}
inline Mat weight_sqrt(const Mat& sigma, double s = 1.0) {
  return kron(mpow(sigma, s / 2).transpose(), mpow(sigma, (1.0 - s) / 2));
}
inline Mat weight_inv_sqrt(const Mat& sigma, double s = 1.0) {
  return kron(mpow(sigma, -s / 2).transpose(), mpow(sigma, -(1.0 - s) / 2));
}

inline double gns_asymmetry(const Mat& L, const Mat& sigma) {
  Mat WL = weight_matrix(sigma) * L;
  return (WL - WL.adjoint()).norm() / std::max(1.0, WL.norm());
}

inline void check_unital(const Mat& L, int D) {
  double r = (L * vec(Mat::Identity(D, D))).norm();
  if (r > 1e-10 * std::max(1.0, L.norm())) throw DomainError("Lindbladian is not unital");
}

inline LindbladSpec build_gns_lindbladian(const std::vector<Jump>& jumps, const Mat& sigma) {
  if (jumps.empty()) throw DimensionError("build_gns_lindbladian: no jumps");
  const int D = static_cast<int>(sigma.rows());
  check_state(sigma, "build_gns_lindbladian");
  if (!is_full_rank(sigma)) throw DomainError("build_gns_lindbladian: sigma must be full rank");
  Mat sinv = mpow(sigma, -1.0);
  for (const auto& j : jumps) {
    if (j.A.rows() != D || j.A.cols() != D) throw DimensionError("build_gns_lindbladian: jump dimension mismatch");
    Mat mod = sigma * j.A * sinv;
    if ((mod - std::exp(-j.omega) * j.A).norm() > 1e-8 * std::max(1.0, j.A.norm()))
      throw DomainError("build_gns_lindbladian: modular relation violated");
  }
  LindbladSpec spec{D, jumps, FormTag::gns, gns_superop(jumps, D), sigma};
  check_unital(spec.L, D);
  if (gns_asymmetry(spec.L, sigma) > 1e-8) throw DomainError("build_gns_lindbladian: jump set is not GNS symmetric");
  bool sym = true;
  for (const auto& j : jumps) sym = sym && j.omega == 0.0 && is_hermitian(j.A, 1e-12);
  if (sym) spec.form = FormTag::symmetric;
  return spec;
}

// L(X) = -sum_k [a_k, [a_k, X]]
inline LindbladSpec build_symmetric_lindbladian(const std::vector<Mat>& a) {
  if (a.empty()) throw DimensionError("build_symmetric_lindbladian: no terms");
  const int D = static_cast<int>(a[0].rows());
  std::vector<Jump> jumps;
  for (const auto& x : a) {
    if (!is_hermitian(x, 1e-12)) throw DomainError("build_symmetric_lindbladian: a_k must be Hermitian");
    jumps.push_back({herm(x), 0.0});
  }
  return {D, jumps, FormTag::symmetric, gns_superop(jumps, D), Mat::Identity(D, D) / static_cast<double>(D)};
}

// Generator given directly as a Heisenberg superoperator.
inline LindbladSpec lindbladian_from_superop(const Mat& L, const Mat& sigma = Mat()) {
  const int D = isqrt_exact(L.rows());
  check_unital(L, D);
  LindbladSpec spec{D, {}, FormTag::generic, L, sigma};
  if (sigma.size()) {
    if (gns_asymmetry(L, sigma) > 1e-8) throw DomainError("lindbladian_from_superop: not GNS symmetric");
  }
  return spec;
}

inline LindbladSpec operator+(const LindbladSpec& a, const LindbladSpec& b) {
  if (a.dim != b.dim) throw DimensionError("LindbladSpec +: dimension mismatch");
  LindbladSpec out = a;
  out.L = a.L + b.L;
  if (!a.jumps.empty() && !b.jumps.empty() && a.form != FormTag::generic && b.form != FormTag::generic) {
    out.jumps.insert(out.jumps.end(), b.jumps.begin(), b.jumps.end());
    out.form = (a.form == FormTag::symmetric && b.form == FormTag::symmetric) ? FormTag::symmetric : FormTag::gns;
  } else {
    out.jumps.clear();
    out.form = FormTag::generic;
  }
  return out;
}

inline LindbladSpec scaled(const LindbladSpec& a, double c) {
  if (c <= 0) throw DomainError("scaled: factor must be positive");
  LindbladSpec out = a;
  out.L *= c;
  for (auto& j : out.jumps) j.A *= std::sqrt(c);
  return out;
}

// ---------------------------------------------------------------------------
// channels

struct QuantumChannel {
  int dim = 0;
  std::vector<Mat> kraus;  // may be empty when built from a superoperator
  Superoperator S;         // Schroedinger picture

  Mat apply(const Mat& rho) const { return S.apply(rho); }
  Superoperator heisenberg() const { return S.adjoint(); }
  ChoiMatrix choi() const { return choi_of_superop(S); }
};

inline QuantumChannel channel_from_kraus(const std::vector<Mat>& kraus) {
  Superoperator S = superop_of_kraus(kraus);
  Mat sum = Mat::Zero(S.dim, S.dim);
  for (const auto& K : kraus) sum += K.adjoint() * K;
  if ((sum - Mat::Identity(S.dim, S.dim)).norm() > 1e-9) throw DomainError("channel_from_kraus: not trace preserving");
  return {S.dim, kraus, S};
}

inline QuantumChannel channel_from_superop(const Superoperator& S) {
  ChoiMatrix J = choi_of_superop(S);
  if (min_eig(J.matrix) < -1e-9) throw DomainError("channel_from_superop: not completely positive");
  // trace preservation: 1 is fixed by the dual
  Mat one = S.adjoint().apply(Mat::Identity(S.dim, S.dim));
  if ((one - Mat::Identity(S.dim, S.dim)).norm() > 1e-9) throw DomainError("channel_from_superop: not trace preserving");
  return {S.dim, {}, S};
}

inline QuantumChannel channel_power(const QuantumChannel& Phi, int k) {
  Mat M = Mat::Identity(Phi.S.matrix.rows(), Phi.S.matrix.cols());
  for (int i = 0; i < k; ++i) M = Phi.S.matrix * M;
  return {Phi.dim, {}, {Phi.dim, M}};
}

// (Phi (x) id_n) on the system (x) ancilla layout, index i * n + a.
inline Mat apply_on_system(const Superoperator& S, const Mat& rho, int n_anc) {
  const int D = S.dim;
  if (rho.rows() != static_cast<Eigen::Index>(D) * n_anc) throw DimensionError("apply_on_system: dimension mismatch");
  Mat out(rho.rows(), rho.cols());
  Mat blk(D, D);
  for (int a = 0; a < n_anc; ++a)
    for (int b = 0; b < n_anc; ++b) {
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) blk(i, j) = rho(i * n_anc + a, j * n_anc + b);
      Mat r = S.apply(blk);
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) out(i * n_anc + a, j * n_anc + b) = r(i, j);
    }
  return out;
}

// ---------------------------------------------------------------------------
// evolution

inline Superoperator heisenberg_semigroup(const LindbladSpec& L, double t) {
  if (t < 0) throw DomainError("semigroup time must be nonnegative");
  return expm(L.heisenberg(), t);
}

inline Superoperator schrodinger_semigroup(const LindbladSpec& L, double t) {
  if (t < 0) throw DomainError("semigroup time must be nonnegative");
  return expm(L.schrodinger(), t);
}

inline Mat evolve(const LindbladSpec& L, double t, const Mat& rho) {
  Mat out = schrodinger_semigroup(L, t).apply(rho);
  return herm(out);
}

// ---------------------------------------------------------------------------
// fixed points

inline SubalgebraStructure fixed_point_algebra(const LindbladSpec& L) {
  if (!L.jumps.empty()) {
    std::vector<Mat> ops;
    for (const auto& j : L.jumps) ops.push_back(j.A);
    return commutant(algebra_closure(ops));
  }
  // kernel of the Heisenberg generator
  return structure_from_span(null_space(L.L, 1e-9));
}

// CE onto the fixed-point algebra preserving sigma (or the trace CE when
// sigma is empty).
inline ConditionalExpectation fixed_point_expectation(const LindbladSpec& L, const Mat& sigma = Mat()) {
  SubalgebraStructure F = fixed_point_algebra(L);
  return sigma.size() ? conditional_expectation(F, sigma) : trace_conditional_expectation(F);
}

// ---------------------------------------------------------------------------
// spectral gap

struct SpectralReport {
  double gap = 0.0;
  double l2_norm_minus_fixed = 1.0;  // ||e^{L}(id - E_F)|| = e^{-gap}
  int fixed_space_dim = 0;
  std::vector<cplx> eigenvalues;  // of L, descending real part
};

inline SpectralReport spectral_gap(const LindbladSpec& L, const Mat& sigma) {
  const int D = L.dim;
  check_state(sigma, "spectral_gap");
  if (!is_full_rank(sigma)) throw DomainError("spectral_gap: sigma must be full rank");
  Mat ls = L.apply_star(sigma);
  if (ls.norm() > 1e-9 * std::max(1.0, L.L.norm())) throw DomainError("spectral_gap: sigma is not invariant");
  Mat H = -(weight_sqrt(sigma) * L.L * weight_inv_sqrt(sigma));
  if ((H - H.adjoint()).norm() > 1e-8 * std::max(1.0, H.norm())) throw DomainError("spectral_gap: generator is not GNS symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(H), Eigen::EigenvaluesOnly);
  const RVec& ev = es.eigenvalues();
  const double cut = 1e-9 * std::max(1.0, op_norm(L.L));
  SpectralReport r;
  r.gap = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= cut) {
      ++r.fixed_space_dim;
    } else if (r.gap == 0.0 && ev(i) > cut) {
      r.gap = ev(i);
    }
  }
  for (Eigen::Index i = 0; i < ev.size(); ++i) r.eigenvalues.push_back(cplx(-ev(i), 0.0));
  r.l2_norm_minus_fixed = std::exp(-r.gap);
  (void)D;
  return r;
}

// Gap of a Hermitian PSD matrix: smallest eigenvalue above rel * max.
inline double psd_gap(const Mat& M, double rel = 1e-9) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(M), Eigen::EigenvaluesOnly);
  const RVec& ev = es.eigenvalues();
  const double cut = rel * std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > cut) return ev(i);
  return 0.0;
}

// ---------------------------------------------------------------------------
// channels: multiplicative domain and L2 contraction

inline SubalgebraStructure multiplicative_domain(const QuantumChannel& Phi, const Mat& sigma) {
  check_state(sigma, "multiplicative_domain");
  if (!is_full_rank(sigma)) throw DomainError("multiplicative_domain: sigma must be full rank");
  Mat Phs = Phi.heisenberg().matrix;
  Mat H = weight_sqrt(sigma) * Phs * weight_inv_sqrt(sigma);
  if ((H - H.adjoint()).norm() > 1e-8 * std::max(1.0, H.norm())) throw DomainError("multiplicative_domain: channel is not GNS symmetric");
  EigH e = eig_hermitian(herm(H), 1e-8);
  Mat Winv = weight_inv_sqrt(sigma);
  std::vector<Vec> keep;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (std::abs(e.values(i)) >= 1.0 - 1e-8) keep.push_back(Winv * e.vectors.col(i));
  Mat cols(Phs.rows(), static_cast<Eigen::Index>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = keep[i];
  return structure_from_span(column_span(cols, 1e-9));
}

// || Phi^* (id - E) : L2(sigma) -> L2(sigma) || for an invariant sigma, with the
// weight <X, Y>_{sigma,s}. Unsquared.
inline double l2_contraction(const Superoperator& Phi_heis, const Superoperator& E_heis, const Mat& sigma, double s = 1.0) {
  check_state(sigma, "l2_contraction");
  if (!is_full_rank(sigma)) throw DomainError("l2_contraction: sigma must be full rank");
  Mat phs = Phi_heis.adjoint().apply(sigma);
  if ((phs - sigma).norm() > 1e-9) throw DomainError("l2_contraction: sigma is not invariant");
  Mat E = E_heis.matrix;
  Mat M = weight_sqrt(sigma, s) * Phi_heis.matrix * (Mat::Identity(E.rows(), E.cols()) - E) * weight_inv_sqrt(sigma, s);
  return op_norm(M);
}

inline double l2_contraction(const QuantumChannel& Phi, const ConditionalExpectation& E, const Mat& sigma, double s = 1.0) {
  return l2_contraction(Phi.heisenberg(), E.superop_heisenberg(), sigma, s);
}

// ---------------------------------------------------------------------------
// detectability

struct DetectabilityResult {
  double bound = 1.0;
  double measured = 0.0;
  double gap = 0.0;
  int g = 0;
};

// Number of partners each projection fails to commute with (max over the family).
inline int noncommuting_degree(const std::vector<Mat>& P, double tol = 1e-9) {
  int g = 0;
  for (size_t i = 0; i < P.size(); ++i) {
    int c = 0;
    for (size_t j = 0; j < P.size(); ++j)
      if (i != j && commutator(P[i], P[j]).norm() > tol) ++c;
    g = std::max(g, c);
  }
  return g;
}

// Projection onto the intersection of the ranges.
inline Mat range_intersection_projector(const std::vector<Mat>& P) {
  const auto n = P.at(0).rows();
  Mat S = Mat::Zero(n, n);
  for (const auto& p : P) S += Mat::Identity(n, n) - p;
  Mat K = psd_null_space(S, 1e-10);
  return K * K.adjoint();
}

// Gap of L = sum_i E_i - id restricted off the common range, i.e. the
// smallest nonzero eigenvalue of sum_i (1 - E_i).
inline double projection_family_gap(const std::vector<Mat>& P) {
  const auto n = P.at(0).rows();
  Mat S = Mat::Zero(n, n);
  for (const auto& p : P) S += Mat::Identity(n, n) - p;
  return psd_gap(S);
}

// Projections are orthogonal in the inner product <x, W y>; pass an empty W
// for the standard one. The product applies projections[order[0]] first.
inline DetectabilityResult detectability_bound(const std::vector<Mat>& projections, int g, double gap, const Mat& W = Mat(),
                                               std::vector<int> order = {}) {
  if (projections.empty()) throw DimensionError("detectability_bound: empty family");
  if (g < 1) throw DomainError("detectability_bound: g must be at least 1");
  const auto n = projections[0].rows();
  std::vector<Mat> P;
  Mat Ws, Wis;
  if (W.size()) {
    Ws = mpow(W, 0.5);
    Wis = mpow(W, -0.5);
  }
  for (const auto& p : projections) {
    Mat q = W.size() ? Mat(Ws * p * Wis) : p;
    if ((q * q - q).norm() > 1e-9 * std::max(1.0, q.norm()) || (q - q.adjoint()).norm() > 1e-9 * std::max(1.0, q.norm()))
      throw DomainError("detectability_bound: input is not an orthogonal projection");
    P.push_back(herm(q));
  }
  if (order.empty()) {
    order.resize(P.size());
    std::iota(order.begin(), order.end(), 0);
  }
  Mat prod = Mat::Identity(n, n);
  for (int i : order) prod = P.at(static_cast<size_t>(i)) * prod;
  Mat EJ = range_intersection_projector(P);
  DetectabilityResult r;
  r.g = g;
  r.gap = gap;
  double m = op_norm(prod - EJ);
  r.measured = m * m;
  r.bound = 1.0 / (gap / (static_cast<double>(g) * g) + 1.0);
  return r;
}

// ---------------------------------------------------------------------------
// subsystem generators

// Embeds an operator acting on `sites` (in that order) of a tensor product.
inline Mat embed_operator(const Mat& A, const std::vector<int>& dims, const std::vector<int>& sites) {
  const int nf = static_cast<int>(dims.size());
  long D = 1;
  for (int d : dims) D *= d;
  long dl = 1;
  for (int s : sites) dl *= dims.at(static_cast<size_t>(s));
  if (A.rows() != dl) throw DimensionError("embed_operator: local dimension mismatch");
  std::vector<bool> local(nf, false);
  for (int s : sites) local[s] = true;
  // split each full index into (local index, rest index)
  std::vector<long> loc(static_cast<size_t>(D)), rest(static_cast<size_t>(D));
  for (long idx = 0; idx < D; ++idx) {
    std::vector<int> digit(nf);
    long rem = idx;
    for (int f = nf - 1; f >= 0; --f) {
      digit[f] = static_cast<int>(rem % dims[f]);
      rem /= dims[f];
    }
    long li = 0;
    for (int s : sites) li = li * dims[s] + digit[s];
    long ri = 0;
    for (int f = 0; f < nf; ++f)
      if (!local[f]) ri = ri * dims[f] + digit[f];
    loc[idx] = li;
    rest[idx] = ri;
  }
  Mat out = Mat::Zero(D, D);
  for (long i = 0; i < D; ++i)
    for (long j = 0; j < D; ++j)
      if (rest[i] == rest[j]) out(i, j) = A(loc[i], loc[j]);
  return out;
}

// Embeds a superoperator acting on `sites`.
inline Mat embed_superop(const Mat& S, const std::vector<int>& dims, const std::vector<int>& sites) {
  const int nf = static_cast<int>(dims.size());
  long D = 1;
  for (int d : dims) D *= d;
  check_superop_dim(static_cast<int>(D));
  long dl = 1;
  for (int s : sites) dl *= dims.at(static_cast<size_t>(s));
  if (S.rows() != dl * dl) throw DimensionError("embed_superop: local dimension mismatch");
  std::vector<bool> local(nf, false);
  for (int s : sites) local[s] = true;
  std::vector<long> loc(static_cast<size_t>(D)), rest(static_cast<size_t>(D));
  long nrest = D / dl;
  // full index from (local, rest)
  std::vector<long> full(static_cast<size_t>(D));
  for (long idx = 0; idx < D; ++idx) {
    std::vector<int> digit(nf);
    long rem = idx;
    for (int f = nf - 1; f >= 0; --f) {
      digit[f] = static_cast<int>(rem % dims[f]);
      rem /= dims[f];
    }
    long li = 0;
    for (int s : sites) li = li * dims[s] + digit[s];
    long ri = 0;
    for (int f = 0; f < nf; ++f)
      if (!local[f]) ri = ri * dims[f] + digit[f];
    full[static_cast<size_t>(li * nrest + ri)] = idx;
  }
  Mat out = Mat::Zero(D * D, D * D);
  // output (r, c) <- input (r', c'): local parts through S, rest parts copied
  for (long rr = 0; rr < nrest; ++rr)
    for (long cr = 0; cr < nrest; ++cr)
      for (long lr = 0; lr < dl; ++lr)
        for (long lc = 0; lc < dl; ++lc) {
          long orow = full[lr * nrest + rr] + D * full[lc * nrest + cr];
          for (long ir = 0; ir < dl; ++ir)
            for (long ic = 0; ic < dl; ++ic) {
              cplx v = S(lr + dl * lc, ir + dl * ic);
              if (v == cplx(0.0)) continue;
              out(orow, full[ir * nrest + rr] + D * full[ic * nrest + cr]) += v;
            }
        }
  return out;
}

// L_G = sum_e L_e with each local term acting on the two vertices of e.
// Local specs live on the d^2-dimensional edge space.
inline LindbladSpec subsystem_lindbladian(const Graph& G, const LindbladSpec& local, int d) {
  if (local.dim != d * d) throw DimensionError("subsystem_lindbladian: local term must act on d^2 dimensions");
  std::vector<int> dims(static_cast<size_t>(G.n_vertices), d);
  long D = 1;
  for (int i = 0; i < G.n_vertices; ++i) D *= d;
  if (D > kMaxSuperopDim) throw DimensionError("subsystem_lindbladian: dimension overflow");
  const int Di = static_cast<int>(D);
  LindbladSpec out{Di, {}, local.form, Mat::Zero(D * D, D * D), Mat()};
  for (auto [u, v] : G.edges) {
    if (!local.jumps.empty()) {
      for (const auto& j : local.jumps) out.jumps.push_back({embed_operator(j.A, dims, {u, v}), j.omega});
    }
    out.L += embed_superop(local.L, dims, {u, v});
  }
  if (local.sigma.size() && local.form == FormTag::symmetric) out.sigma = Mat::Identity(D, D) / static_cast<double>(D);
  return out;
}

// Local edge terms, one spec per edge, for graph-level bounds.
inline std::vector<LindbladSpec> edge_terms(const Graph& G, const LindbladSpec& local, int d) {
  std::vector<LindbladSpec> out;
  for (const auto& e : G.edges) out.push_back(subsystem_lindbladian(Graph(G.n_vertices, {e}), local, d));
  return out;
}

}  // namespace qfit
