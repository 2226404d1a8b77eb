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

// Example systems: SU(2) irreps, swap and permutation models, Haar twirls,
// random-unitary design generators, Kac collision generators.

#include <map>
#include <numeric>

#include "qfit/semigroup.hpp"

namespace qfit {

// ---------------------------------------------------------------------------
// SU(2)

struct Su2Irrep {
  int m = 0;
  Mat X, Y, Z;  // anti-Hermitian, [X,Y] = 2Z and cyclic
};

inline Su2Irrep su2_irrep(int m) {
  if (m < 2) throw DomainError("su2_irrep: m must be at least 2");
  Su2Irrep r{m, Mat::Zero(m, m), Mat::Zero(m, m), Mat::Zero(m, m)};
  const cplx I(0.0, 1.0);
  // 0-based rows; the coupling between |j> and |j+1> is sqrt(j (m - j)) with j 1-based
  for (int j = 1; j < m; ++j) {
    double c = std::sqrt(static_cast<double>(j) * (m - j));
    r.X(j - 1, j) = c;
    r.X(j, j - 1) = -c;
    r.Y(j - 1, j) = I * c;
    r.Y(j, j - 1) = I * c;
  }
  for (int j = 1; j <= m; ++j) r.Z(j - 1, j - 1) = I * static_cast<double>(m - 2 * j + 1);
  return r;
}

// Hermitian generators h = iX_m / 2 etc. With this scaling L_2^H is the
// fermionic Ornstein-Uhlenbeck generator (rates 1, 1, 2).
inline LindbladSpec su2_sublaplacian(int m) {
  Su2Irrep r = su2_irrep(m);
  const cplx I(0.0, 1.0);
  return build_symmetric_lindbladian({herm(I * r.X / 2.0), herm(I * r.Y / 2.0)});
}

inline LindbladSpec su2_laplacian(int m) {
  Su2Irrep r = su2_irrep(m);
  const cplx I(0.0, 1.0);
  return build_symmetric_lindbladian({herm(I * r.X / 2.0), herm(I * r.Y / 2.0), herm(I * r.Z / 2.0)});
}

// Eigenbasis (columns) of the Hermitian operator i*A for anti-Hermitian A.
inline Mat su2_eigenbasis(const Mat& A) {
  const cplx I(0.0, 1.0);
  return eig_hermitian(herm(I * A), 1e-8).vectors;
}

// Dephasing generator -[a, [a, .]] for a = diag(spectrum).
inline LindbladSpec dephasing_lindbladian(const std::vector<double>& spectrum) {
  if (spectrum.empty()) throw DimensionError("dephasing_lindbladian: empty spectrum");
  const int D = static_cast<int>(spectrum.size());
  Mat a = Mat::Zero(D, D);
  for (int i = 0; i < D; ++i) a(i, i) = spectrum[static_cast<size_t>(i)];
  return build_symmetric_lindbladian({a});
}

// ---------------------------------------------------------------------------
// swaps and permutations

// Per undirected edge the term is E_e - id with E_e(X) = (S X S + X) / 2,
// i.e. -[S/2, [S/2, X]].
inline LindbladSpec nnrt_lindbladian(const Graph& G, int d) {
  if (d < 2) throw DomainError("nnrt_lindbladian: d must be at least 2");
  LindbladSpec local = build_symmetric_lindbladian({swap_operator(d) / 2.0});
  return subsystem_lindbladian(G, local, d);
}

// Classical random-transposition generator on S_n: f -> sum_e w (f(t_e s) - f(s)),
// w = 1 per undirected edge (the half-sum over ordered pairs) or 1/2 with
// ordered_pairs = false (the half-sum over undirected edges).
inline RMat symmetric_group_chain(int n, const Graph& G, bool ordered_pairs = true) {
  if (n < 1 || n > 6) throw DomainError("symmetric_group_chain: n must be in [1, 6]");
  if (G.n_vertices != n) throw DimensionError("symmetric_group_chain: graph size mismatch");
  std::vector<int> p(static_cast<size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> perms;
  std::map<std::vector<int>, int> idx;
  do {
    idx[p] = static_cast<int>(perms.size());
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  const auto N = static_cast<Eigen::Index>(perms.size());
  const double w = ordered_pairs ? 1.0 : 0.5;
  RMat M = RMat::Zero(N, N);
  for (Eigen::Index s = 0; s < N; ++s)
    for (auto [u, v] : G.edges) {
      std::vector<int> q = perms[static_cast<size_t>(s)];
      // t_e composed on the left: swap the values u and v
      for (int& x : q) {
        if (x == u) x = v;
        else if (x == v) x = u;
      }
      M(s, idx.at(q)) += w;
      M(s, s) -= w;
    }
  return M;
}

inline double classical_gap(const RMat& M) {
  Eigen::SelfAdjointEigenSolver<RMat> es(-(M + M.transpose()) / 2.0, Eigen::EigenvaluesOnly);
  const RVec& ev = es.eigenvalues();
  const double cut = 1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > cut) return ev(i);
  return 0.0;
}

// Permutation operator on (C^D)^{(x)k}: the tensor factor in slot j moves to slot perm[j].
inline Mat permutation_operator(int D, const std::vector<int>& perm) {
  const int k = static_cast<int>(perm.size());
  long N = 1;
  for (int i = 0; i < k; ++i) N *= D;
  Mat P = Mat::Zero(N, N);
  std::vector<int> in(static_cast<size_t>(k)), out(static_cast<size_t>(k));
  for (long idx = 0; idx < N; ++idx) {
    long rem = idx;
    for (int f = k - 1; f >= 0; --f) {
      in[static_cast<size_t>(f)] = static_cast<int>(rem % D);
      rem /= D;
    }
    for (int j = 0; j < k; ++j) out[static_cast<size_t>(perm[static_cast<size_t>(j)])] = in[static_cast<size_t>(j)];
    long o = 0;
    for (int f = 0; f < k; ++f) o = o * D + out[static_cast<size_t>(f)];
    P(o, idx) = 1.0;
  }
  return P;
}

inline int cycle_count(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  int c = 0;
  for (size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    ++c;
    for (size_t j = i; !seen[j]; j = static_cast<size_t>(perm[j])) seen[j] = true;
  }
  return c;
}

inline std::vector<std::vector<int>> all_permutations(int k) {
  std::vector<int> p(static_cast<size_t>(k));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// ---------------------------------------------------------------------------
// Haar twirl

struct HaarTwirl {
  int D = 0, k = 0;
  std::vector<Mat> perms;
  Mat gram;       // tr(P_a^dag P_b) = D^{#cycles(a^-1 b)}
  Mat gram_pinv;
  Superoperator S;  // self-adjoint, so also the Heisenberg form

  Mat apply(const Mat& X) const {
    const auto n = static_cast<Eigen::Index>(perms.size());
    Vec t(n);
    for (Eigen::Index b = 0; b < n; ++b) t(b) = hs_inner(perms[static_cast<size_t>(b)], X);
    Vec c = gram_pinv * t;
    Mat out = Mat::Zero(X.rows(), X.cols());
    for (Eigen::Index a = 0; a < n; ++a) out += c(a) * perms[static_cast<size_t>(a)];
    return out;
  }
  // Expansion coefficients of the output in the permutation basis.
  Vec coefficients(const Mat& X) const {
    const auto n = static_cast<Eigen::Index>(perms.size());
    Vec t(n);
    for (Eigen::Index b = 0; b < n; ++b) t(b) = hs_inner(perms[static_cast<size_t>(b)], X);
    return gram_pinv * t;
  }
};

inline HaarTwirl haar_twirl(int D, int k) {
  if (D < 1 || k < 1) throw DomainError("haar_twirl: D and k must be positive");
  long N = 1;
  for (int i = 0; i < k; ++i) N *= D;
  if (N > kMaxSuperopDim) throw DimensionError("haar_twirl: D^k exceeds the dense budget");
  HaarTwirl h;
  h.D = D;
  h.k = k;
  auto ps = all_permutations(k);
  for (const auto& p : ps) h.perms.push_back(permutation_operator(D, p));
  const auto n = static_cast<Eigen::Index>(ps.size());
  h.gram = Mat::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      // a^-1 b
      const auto& pa = ps[static_cast<size_t>(a)];
      const auto& pb = ps[static_cast<size_t>(b)];
      std::vector<int> inv(pa.size()), q(pa.size());
      for (size_t i = 0; i < pa.size(); ++i) inv[static_cast<size_t>(pa[i])] = static_cast<int>(i);
      for (size_t i = 0; i < pa.size(); ++i) q[i] = inv[static_cast<size_t>(pb[i])];
      h.gram(a, b) = std::pow(static_cast<double>(D), cycle_count(q));
    }
  EigH e = eig_hermitian(h.gram, 1e-8);
  const double cut = 1e-10 * std::max(1.0, e.values(0));
  h.gram_pinv = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (e.values(i) > cut) h.gram_pinv += e.vectors.col(i) * e.vectors.col(i).adjoint() / e.values(i);
  const int Ni = static_cast<int>(N);
  h.S = superop_of_map(Ni, [&](const Mat& X) { return h.apply(X); });
  return h;
}

// The twirl as a conditional expectation onto span{P_pi}.
inline ConditionalExpectation haar_twirl_ce(int D, int k) {
  HaarTwirl h = haar_twirl(D, k);
  return trace_conditional_expectation(algebra_closure(h.perms));
}

inline Mat tensor_power(const Mat& U, int k) {
  Mat out = U;
  for (int i = 1; i < k; ++i) out = kron(out, U);
  return out;
}

inline Mat monte_carlo_twirl(const Mat& X, int D, int k, int samples, Rng& rng) {
  Mat acc = Mat::Zero(X.rows(), X.cols());
  for (int s = 0; s < samples; ++s) {
    Mat Uk = tensor_power(haar_unitary(D, rng), k);
    acc += Uk * X * Uk.adjoint();
  }
  return acc / static_cast<double>(samples);
}

// ---------------------------------------------------------------------------
// design measures

struct DesignMeasure {
  enum class Kind { haar, finite };
  Kind kind = Kind::haar;
  int dim = 0;
  std::vector<Mat> unitaries;
  std::vector<double> weights;

  static DesignMeasure haar(int D) { return {Kind::haar, D, {}, {}}; }

  static DesignMeasure finite(const std::vector<Mat>& us, const std::vector<double>& ws) {
    if (us.empty() || us.size() != ws.size()) throw DimensionError("DesignMeasure: unitaries and weights must match");
    const int D = static_cast<int>(us[0].rows());
    double tot = 0.0;
    for (size_t i = 0; i < us.size(); ++i) {
      if (us[i].rows() != D || us[i].cols() != D) throw DimensionError("DesignMeasure: dimension mismatch");
      if ((us[i].adjoint() * us[i] - Mat::Identity(D, D)).norm() > 1e-10) throw DomainError("DesignMeasure: element is not unitary");
      if (ws[i] < 0) throw DomainError("DesignMeasure: negative weight");
      tot += ws[i];
    }
    if (std::abs(tot - 1.0) > 1e-10) throw DomainError("DesignMeasure: weights must sum to 1");
    return {Kind::finite, D, us, ws};
  }

  // Closes a list under adjoints with equal weights.
  static DesignMeasure symmetrized(const std::vector<Mat>& us) {
    std::vector<Mat> all;
    for (const auto& U : us) {
      all.push_back(U);
      all.push_back(U.adjoint());
    }
    return finite(all, std::vector<double>(all.size(), 1.0 / static_cast<double>(all.size())));
  }

  bool symmetric(double tol = 1e-10) const {
    if (kind == Kind::haar) return true;
    for (size_t i = 0; i < unitaries.size(); ++i) {
      double w = 0.0, wd = 0.0;
      for (size_t j = 0; j < unitaries.size(); ++j) {
        if ((unitaries[j] - unitaries[i]).norm() < tol) w += weights[j];
        if ((unitaries[j] - unitaries[i].adjoint()).norm() < tol) wd += weights[j];
      }
      if (std::abs(w - wd) > 1e-12) return false;
    }
    return true;
  }
};

// X -> E_mu[U^{(x)k} X U^{dag (x)k}] as a Schroedinger superoperator.
inline Superoperator design_channel(const DesignMeasure& mu, int k) {
  if (mu.kind == DesignMeasure::Kind::haar) return haar_twirl(mu.dim, k).S;
  long N = 1;
  for (int i = 0; i < k; ++i) N *= mu.dim;
  if (N > kMaxSuperopDim) throw DimensionError("design_channel: dimension overflow");
  Mat S = Mat::Zero(N * N, N * N);
  for (size_t i = 0; i < mu.unitaries.size(); ++i) {
    Mat Uk = tensor_power(mu.unitaries[i], k);
    S += mu.weights[i] * kron(Uk.conjugate(), Uk);
  }
  return {static_cast<int>(N), S};
}

// Sites of edge (u, v) in each of the k copies; the global factor order is copy-major.
inline std::vector<int> copy_sites(int n, int k, int u, int v) {
  std::vector<int> s;
  for (int c = 0; c < k; ++c) {
    s.push_back(c * n + u);
    s.push_back(c * n + v);
  }
  return s;
}

// L = sum_e ((Phi_mu^{(k)})_e - id), Heisenberg picture, on ((C^d)^{(x)n})^{(x)k}.
inline LindbladSpec design_lindbladian(const Graph& G, int d, int k, const DesignMeasure& mu) {
  if (mu.dim != d * d) throw DimensionError("design_lindbladian: measure must live on U(d^2)");
  const int n = G.n_vertices;
  long D = 1;
  for (int i = 0; i < n * k; ++i) D *= d;
  if (D > kMaxSuperopDim) throw DimensionError("design_lindbladian: dimension overflow");
  Mat local = design_channel(mu, k).matrix.adjoint();
  const auto dl = local.rows();
  local -= Mat::Identity(dl, dl);
  std::vector<int> dims(static_cast<size_t>(n * k), d);
  Mat L = Mat::Zero(D * D, D * D);
  for (auto [u, v] : G.edges) L += embed_superop(local, dims, copy_sites(n, k, u, v));
  const int Di = static_cast<int>(D);
  LindbladSpec spec{Di, {}, FormTag::generic, L, Mat()};
  if (mu.symmetric()) spec.sigma = Mat::Identity(D, D) / static_cast<double>(D);
  return spec;
}

inline int kernel_dimension(const LindbladSpec& L, double rel = 1e-9) {
  return static_cast<int>(null_space(L.L, rel).cols());
}

// ---------------------------------------------------------------------------
// Kac collisions

struct CollisionSpec {
  DesignMeasure measure;  // on U(d^2)
  Mat h;                  // one-particle Hamiltonian, empty when trivial

  void validate() const {
    const int d2 = measure.dim;
    const int d = isqrt_exact(d2);
    if (!measure.symmetric()) throw DomainError("CollisionSpec: measure is not invariant under U -> U^dag");
    if (measure.kind == DesignMeasure::Kind::haar) {
      if (h.size() && (h - h(0, 0) * Mat::Identity(d, d)).norm() > 1e-9)
        throw DomainError("CollisionSpec: Haar measure requires a trivial Hamiltonian");
      return;
    }
    Mat S = swap_operator(d);
    if (h.size()) {
      Mat H2 = kron(h, Mat::Identity(d, d)) + kron(Mat::Identity(d, d), h);
      for (const auto& U : measure.unitaries)
        if (commutator(U, H2).norm() > 1e-9) throw DomainError("CollisionSpec: collision does not conserve energy");
    }
    for (size_t i = 0; i < measure.unitaries.size(); ++i) {
      Mat sus = S * measure.unitaries[i] * S;
      double w = 0.0, ws = 0.0;
      for (size_t j = 0; j < measure.unitaries.size(); ++j) {
        if ((measure.unitaries[j] - measure.unitaries[i]).norm() < 1e-10) w += measure.weights[j];
        if ((measure.unitaries[j] - sus).norm() < 1e-10) ws += measure.weights[j];
      }
      if (std::abs(w - ws) > 1e-12) throw DomainError("CollisionSpec: measure is not swap invariant");
    }
  }
};

// Closes a list under U -> U^dag and U -> S U S with equal weights.
inline DesignMeasure collision_closure(const std::vector<Mat>& us) {
  const int d = isqrt_exact(us.at(0).rows());
  Mat S = swap_operator(d);
  std::vector<Mat> all;
  auto add = [&](const Mat& V) {
    for (const auto& W : all)
      if ((W - V).norm() < 1e-10) return;
    all.push_back(V);
  };
  for (const auto& U : us) {
    add(U);
    add(U.adjoint());
    add(S * U * S);
    add(S * U.adjoint() * S);
  }
  return DesignMeasure::finite(all, std::vector<double>(all.size(), 1.0 / static_cast<double>(all.size())));
}

// Haar-random unitary on C^d (x) C^d that commutes with h (x) 1 + 1 (x) h.
inline Mat energy_preserving_unitary(const Mat& h, Rng& rng) {
  const int d = static_cast<int>(h.rows());
  Mat H2 = kron(h, Mat::Identity(d, d)) + kron(Mat::Identity(d, d), h);
  auto clusters = spectral_clusters(herm(H2), 1e-8);
  Mat U = Mat::Zero(d * d, d * d);
  for (const auto& c : clusters) {
    const auto r = c.basis.cols();
    U += c.basis * haar_unitary(static_cast<int>(r), rng) * c.basis.adjoint();
  }
  return U;
}

// L_n = n (Q - id), Q = binom(n, 2)^-1 sum_{i<j} (Phi_mu)_{ij}.
inline LindbladSpec kac_lindbladian(int n, int d, const CollisionSpec& spec) {
  if (n < 2) throw DomainError("kac_lindbladian: n must be at least 2");
  spec.validate();
  LindbladSpec L = design_lindbladian(Graph::complete(n), d, 1, spec.measure);
  const double scale = static_cast<double>(n) / (n * (n - 1) / 2.0);
  L.L *= scale;
  return L;
}

// ---------------------------------------------------------------------------
// complete-graph decomposition

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

// Edge-disjoint connected spanning subgraphs of K_n with max degree <= 3.
// Vertices are 0-based; the residue construction follows the 1-based labels.
inline std::vector<Graph> graph_decompose(int n) {
  if (n < 4) throw DomainError("graph_decompose: n must be at least 4");
  int p = n;
  if (!is_prime(n)) {
    p = 0;
    for (int q = n - 1; q > n / 2; --q)
      if (is_prime(q)) {
        p = q;
        break;
      }
    if (p == 0) throw NumericalError("graph_decompose: no prime in (n/2, n)");
  }
  std::vector<Graph> out;
  for (int l = 1; l <= p / 2; ++l) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= p; ++i) {
      int j = (i - 1 + l) % p + 1;
      e.push_back({i - 1, j - 1});
    }
    for (int j = p + 1; j <= n; ++j) {
      int i = j - (p - l + 1);
      e.push_back({i - 1, j - 1});
    }
    out.push_back(Graph(n, e));
  }
  return out;
}

}  // namespace qfit
