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

// Certified constants: CMLSI, SDPI, approximate tensorization, uncertainty
// relations, cp-order, graph and Kac bounds. Every function returns the
// closed-form value; the *_validate helpers check it on sampled states.

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "qfit/entropy.hpp"
#include "qfit/models.hpp"

namespace qfit {

inline constexpr double kTwoLn2m1 = 0.38629436111989061;  // 2 ln 2 - 1

// ceil with a small guard against roundoff just above an integer
inline double guarded_ceil(double x) {
  if (std::isinf(x)) return x;
  return std::ceil(x - 1e-12 * std::max(1.0, std::abs(x)));
}

// ---------------------------------------------------------------------------
// CMLSI from the gap and the index

struct CmlsiBounds {
  double gap = 0.0;
  IndexReport indices;
  double lower = 0.0;       // gap / C_tau_cb
  double lower_mlsi = 0.0;  // gap / C_tau
  double upper = 0.0;       // 2 gap
};

inline CmlsiBounds cmlsi_bounds(const LindbladSpec& L, const Mat& sigma) {
  CmlsiBounds b;
  b.gap = spectral_gap(L, sigma).gap;
  b.indices = index(fixed_point_expectation(L, sigma));
  b.lower = b.gap / b.indices.C_tau_cb;
  b.lower_mlsi = b.gap / b.indices.C_tau;
  b.upper = 2.0 * b.gap;
  return b;
}

struct SchurBound {
  double gap = 0.0;  // min over distinct pairs of (k_i - k_j)^2
  int n_distinct = 0;
  double lower = 0.0;  // gap / (2 ln 2n)
  double upper = 0.0;
};

inline SchurBound schur_cmlsi_lower(std::vector<double> kappa) {
  std::sort(kappa.begin(), kappa.end());
  std::vector<double> distinct;
  for (double k : kappa)
    if (distinct.empty() || k - distinct.back() > 1e-9 * std::max(1.0, std::abs(k))) distinct.push_back(k);
  if (distinct.size() < 2) throw DomainError("schur_cmlsi_lower: need at least two distinct eigenvalues");
  SchurBound s;
  s.n_distinct = static_cast<int>(distinct.size());
  s.gap = kInf;
  for (size_t i = 1; i < distinct.size(); ++i) s.gap = std::min(s.gap, std::pow(distinct[i] - distinct[i - 1], 2));
  s.lower = s.gap / (2.0 * std::log(2.0 * s.n_distinct));
  s.upper = 2.0 * s.gap;
  return s;
}

// ---------------------------------------------------------------------------
// SDPI

// c(C, kappa) = 1 - (1 - t0) a(t0) - b(t0) with kappa in place of every squared
// contraction coefficient; C = 1 uses the limiting forms.
inline double sdpi_constant(double C, double kappa) {
  if (!(C >= 1.0 - 1e-12)) throw DomainError("sdpi_constant: C must be at least 1");
  if (!(kappa >= 0.0) || kappa >= 1.0) throw DomainError("sdpi_constant: kappa must lie in [0, 1)");
  C = std::max(C, 1.0);
  const double x = C - 1.0;
  const double t0 = (1.0 - kappa) / (1.0 + kappa * x);
  // ln(1 + x s) / x and ((1 + x t) ln(1 + x t) - x t) / x^2
  auto lead_a = [x](double s) { return x > 0 ? std::log1p(x * s) / x : s; };
  auto lead_b = [x](double t) {
    double y = x * t;
    if (std::abs(y) < 1e-4) return t * t * (0.5 - y / 6.0 + y * y / 12.0);
    return ((1.0 + y) * std::log1p(y) - y) / (x * x);
  };
  auto a = [&](double s) { return lead_a(s) + (kappa > 0 && s < 1.0 ? kappa * std::log1p(-s) : 0.0); };
  auto b = [&](double t) {
    double tail = (t < 1.0 ? (1.0 - t) * std::log1p(-t) : 0.0) + t;
    return lead_b(t) - kappa * tail;
  };
  double c = 1.0 - (1.0 - t0) * a(t0) - b(t0);
  return std::min(std::max(c, kappa), 1.0);
}

struct CsdpiBounds {
  double kappa = 0.0;  // squared L2 contraction
  double c = 1.0;      // upper bound on the CSDPI contraction
  IndexReport indices;
  ConditionalExpectation E;  // onto the multiplicative domain, sigma-preserving
  bool conservative = false;  // sqrt(kappa) substituted after a failed validation
};

inline CsdpiBounds csdpi_bounds(const QuantumChannel& Phi, const Mat& sigma) {
  CsdpiBounds r;
  SubalgebraStructure N = multiplicative_domain(Phi, sigma);
  r.E = conditional_expectation(N, sigma);
  r.indices = index(r.E);
  double lam = l2_contraction(Phi, r.E, sigma);
  r.kappa = lam * lam;
  r.c = r.kappa < 1.0 ? sdpi_constant(r.indices.C_tau_cb, r.kappa) : 1.0;
  return r;
}

// max over sampled rho of D(Phi rho || Phi E rho) / D(rho || E rho)
inline double sdpi_max_ratio(const QuantumChannel& Phi, const ConditionalExpectation& E, int samples, Rng& rng) {
  const int D = Phi.dim;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Mat rho = (s % 2 == 0) ? random_state(D, rng) : mix_full_rank(random_state(D, rng, 1), 1e-3);
    Mat er = E.schrodinger(rho);
    double den = relative_entropy(rho, er);
    if (den < 1e-10) continue;
    double num = relative_entropy(Phi.apply(rho), Phi.apply(er));
    worst = std::max(worst, num / den);
  }
  return worst;
}

// Bounds followed by the mandatory sampled validation; on failure the
// conservative substitution kappa -> sqrt(kappa) is applied.
inline CsdpiBounds csdpi_certified(const QuantumChannel& Phi, const Mat& sigma, int samples, Rng& rng) {
  CsdpiBounds r = csdpi_bounds(Phi, sigma);
  if (r.kappa >= 1.0) return r;
  if (sdpi_max_ratio(Phi, r.E, samples, rng) > r.c + 1e-9) {
    r.c = sdpi_constant(r.indices.C_tau_cb, std::sqrt(r.kappa));
    r.conservative = true;
  }
  return r;
}

// ---------------------------------------------------------------------------
// approximate tensorization constants

struct AtL2 {
  double lower = 1.0;  // 1 / (1 - lam^2)
  double upper = 1.0;  // 2 C_tau / (1 - lam)^2
};

inline AtL2 at_l2(double C_tau, double lam) {
  if (!(lam >= 0.0) || lam >= 1.0) throw DomainError("at_l2: lam must lie in [0, 1)");
  return {1.0 / (1.0 - lam * lam), 2.0 * C_tau / ((1.0 - lam) * (1.0 - lam))};
}

inline double at_refined(double lam, double C_max) {
  if (!(lam >= 0.0) || lam >= 1.0 / std::sqrt(2.0)) throw DomainError("at_refined: lam must lie in [0, 1/sqrt 2)");
  return 1.0 + (lam / (1.0 - lam) + lam * lam / (1.0 - 2.0 * lam * lam)) * C_max;
}

inline double at_meta(double eps) {
  if (!(eps >= 0.0) || eps >= std::sqrt(kTwoLn2m1)) throw DomainError("at_meta: eps must lie in [0, sqrt(2 ln 2 - 1))");
  return 1.0 / (1.0 - eps * eps / kTwoLn2m1);
}

// 4 ceil((ln C_cb + 1) / ln(1/lam)); a vanishing lam gives the single-step value 4.
inline double at_gap(double C_cb, double lam) {
  if (!(lam >= 0.0) || lam >= 1.0) throw DomainError("at_gap: lam must lie in [0, 1)");
  if (C_cb < 1.0) throw DomainError("at_gap: C_cb must be at least 1");
  if (lam == 0.0) return 4.0;
  return 4.0 * std::max(1.0, guarded_ceil((std::log(C_cb) + 1.0) / std::log(1.0 / lam)));
}

struct AtValidation {
  double max_violation = -kInf;  // max of D(rho||rho_N) - c sum_i D(rho||rho_i)
  double worst_ratio = 0.0;      // max of D(rho||rho_N) / sum_i D(rho||rho_i)
  int samples = 0;
  int violations = 0;  // count above 1e-8
};

inline AtValidation at_validate(const std::vector<ConditionalExpectation>& Es, const ConditionalExpectation& EN, double c,
                                int samples, Rng& rng, int n_anc = 1) {
  if (Es.empty()) throw DimensionError("at_validate: no conditional expectations");
  const int D = EN.dim();
  Mat PN = EN.superop_heisenberg().matrix;
  std::vector<Superoperator> Ss;
  for (const auto& E : Es) {
    Mat Pi = E.superop_heisenberg().matrix;
    if ((PN * Pi - PN).norm() > 1e-9 || (Pi * PN - PN).norm() > 1e-9)
      throw DomainError("at_validate: E_N does not factor through E_i");
    Ss.push_back(E.superop_schrodinger());
  }
  Superoperator SN = EN.superop_schrodinger();
  AtValidation v;
  for (int s = 0; s < samples; ++s) {
    const int Dt = D * n_anc;
    Mat rho = (s % 3 == 2) ? mix_full_rank(random_state(Dt, rng, 1), 1e-3) : random_state(Dt, rng);
    double lhs = relative_entropy(rho, apply_on_system(SN, rho, n_anc));
    double rhs = 0.0;
    for (const auto& S : Ss) rhs += relative_entropy(rho, apply_on_system(S, rho, n_anc));
    double viol = lhs - c * rhs;
    v.max_violation = std::max(v.max_violation, viol);
    if (rhs > 1e-12) v.worst_ratio = std::max(v.worst_ratio, lhs / rhs);
    if (viol > 1e-8) ++v.violations;
    ++v.samples;
  }
  return v;
}

inline AtValidation at_validate(const ConditionalExpectation& E1, const ConditionalExpectation& E2, const ConditionalExpectation& EN,
                                double c, int samples, Rng& rng, int n_anc = 1) {
  return at_validate(std::vector<ConditionalExpectation>{E1, E2}, EN, c, samples, rng, n_anc);
}

// ---------------------------------------------------------------------------
// uncertainty relations

inline double ucr_alpha(double c) {
  if (!(c >= 1.0)) throw DomainError("ucr_alpha: c must be at least 1");
  return c / (2.0 * c - 1.0);
}

inline void check_basis(const Mat& B) {
  if (B.rows() != B.cols() || (B.adjoint() * B - Mat::Identity(B.rows(), B.cols())).norm() > 1e-9)
    throw DomainError("basis columns are not orthonormal");
}

// O[x, y] = |<e_x|e_y>|^2 - 1/d
inline RMat overlap_matrix(const Mat& BX, const Mat& BY) {
  check_basis(BX);
  check_basis(BY);
  if (BX.rows() != BY.rows()) throw DimensionError("overlap_matrix: dimension mismatch");
  const double d = static_cast<double>(BX.rows());
  RMat O = (BX.adjoint() * BY).cwiseAbs2();
  O.array() -= 1.0 / d;
  return O;
}

inline double op_norm_real(const RMat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<RMat> svd(A);
  return svd.singularValues()(0);
}

struct UncertaintyTwo {
  RMat O;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double c1 = 0.0;
  std::optional<double> c2;
  std::optional<double> c3;
  double best() const { return std::min({c1, c2.value_or(kInf), c3.value_or(kInf)}); }
};

inline UncertaintyTwo uncertainty_two(const Mat& BX, const Mat& BY) {
  UncertaintyTwo u;
  u.O = overlap_matrix(BX, BY);
  const double d = static_cast<double>(BX.rows());
  u.lambda1 = u.O.cwiseAbs().maxCoeff();
  u.lambda2 = op_norm_real(u.O);
  u.c1 = at_l2(d, u.lambda2).upper;
  if (u.lambda2 < 1.0 / std::sqrt(2.0)) u.c2 = at_refined(u.lambda2, d);
  if (u.lambda1 < std::sqrt(kTwoLn2m1)) u.c3 = 2.0 * at_meta(u.lambda1);
  return u;
}

struct UncertaintyThree {
  std::array<int, 3> order{0, 1, 2};
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int k = 0;
  double eps = 0.0;
  double c_cb = 0.0;
};

// The bases are taken in the given order (W1, W2, W3).
inline UncertaintyThree uncertainty_three(const Mat& BX, const Mat& BY, const Mat& BZ, std::array<int, 3> order = {0, 1, 2}) {
  const Mat* B[3] = {&BX, &BY, &BZ};
  const Mat& W1 = *B[order[0]];
  const Mat& W2 = *B[order[1]];
  const Mat& W3 = *B[order[2]];
  RMat O12 = overlap_matrix(W1, W2), O23 = overlap_matrix(W2, W3);
  RMat O32 = O23.transpose(), O21 = O12.transpose();
  UncertaintyThree u;
  u.order = order;
  u.lambda1 = (O12 * O23 * O32 * O21).cwiseAbs().maxCoeff();
  u.lambda2 = op_norm_real(O32 * O21);
  const double thr = std::sqrt(kTwoLn2m1);
  for (int k = 0; k <= 64; ++k) {
    double eps = u.lambda1 * std::pow(u.lambda2, 2 * k);
    if (eps < thr) {
      u.k = k;
      u.eps = eps;
      u.c_cb = 4.0 * (k + 1) * at_meta(eps);
      return u;
    }
  }
  throw NumericalError("uncertainty_three: no admissible k <= 64");
}

inline UncertaintyThree uncertainty_three_best(const Mat& BX, const Mat& BY, const Mat& BZ) {
  std::array<int, 3> p{0, 1, 2};
  std::optional<UncertaintyThree> best;
  do {
    try {
      UncertaintyThree u = uncertainty_three(BX, BY, BZ, p);
      if (!best || u.c_cb < best->c_cb) best = u;
    } catch (const NumericalError&) {
    }
  } while (std::next_permutation(p.begin(), p.end()));
  if (!best) throw NumericalError("uncertainty_three_best: no admissible order");
  return *best;
}

// c sum_i S(W_i|M) - ln d_A - (m c - 1) S(A|M) for the pinched states; >= 0 when the relation holds.
inline double uncertainty_slack(const Mat& rho_AM, const std::vector<Mat>& bases, int dA, int dM, double c) {
  double sum = 0.0;
  for (const auto& B : bases) {
    Mat pinched = apply_on_system(pinching(B).superop_schrodinger(), rho_AM, dM);
    sum += conditional_entropy(pinched, dA, dM);
  }
  const double m = static_cast<double>(bases.size());
  return c * sum - std::log(static_cast<double>(dA)) - (m * c - 1.0) * conditional_entropy(rho_AM, dA, dM);
}

// ---------------------------------------------------------------------------
// cp-order from norms

struct CpOrder {
  double eps_measured = 0.0;
  double eps_bound_index = kInf;  // lam^k C_cb
  double eps_bound_choi = kInf;   // lam^k C_E
  double lambda = 0.0;
  double C_cb = 1.0;
  double C_E = 1.0;
};

// Smallest eps with (1 - eps) J_E <= J_A <= (1 + eps) J_E, by bisection.
inline double cp_order_distance(const Mat& JA, const Mat& JE, double tol = 1e-9) {
  auto feasible = [&](double e) {
    return min_eig(herm(JA - (1.0 - e) * JE)) >= -1e-11 && min_eig(herm((1.0 + e) * JE - JA)) >= -1e-11;
  };
  if (feasible(0.0)) return 0.0;
  double hi = 1.0;
  while (!feasible(hi)) {
    hi *= 2.0;
    if (hi > 1e8) return kInf;
  }
  double lo = 0.0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

inline CpOrder cp_order_epsilon(const QuantumChannel& Phi, const ConditionalExpectation& E, int k) {
  if (k < 1) throw DomainError("cp_order_epsilon: k must be positive");
  const int D = Phi.dim;
  if (E.dim() != D) throw DimensionError("cp_order_epsilon: dimension mismatch");
  if ((Phi.S.matrix - Phi.S.matrix.adjoint()).norm() > 1e-9 * std::max(1.0, Phi.S.matrix.norm()))
    throw DomainError("cp_order_epsilon: channel is not trace symmetric");
  // bimodularity over the range of E on a few deterministic samples
  Rng rng(0xb1d0d);
  Superoperator Ph = Phi.heisenberg();
  for (int s = 0; s < 4; ++s) {
    Mat a = E.heisenberg(ginibre(D, D, rng)), b = E.heisenberg(ginibre(D, D, rng)), X = ginibre(D, D, rng);
    if ((Ph.apply(a * X * b) - a * Ph.apply(X) * b).norm() > 1e-8 * std::max(1.0, X.norm()))
      throw DomainError("cp_order_epsilon: channel is not bimodular over the range of E");
  }
  Superoperator SE = E.superop_schrodinger();
  Mat JE = choi_of_superop(SE).matrix;
  Mat JA = choi_of_superop(channel_power(Phi, k).S).matrix;
  CpOrder r;
  r.eps_measured = cp_order_distance(JA, JE);
  r.lambda = l2_contraction(Phi.heisenberg(), E.superop_heisenberg(), Mat::Identity(D, D) / static_cast<double>(D));
  r.C_cb = index(E).C_cb;
  EigH je = eig_hermitian(herm(JE), 1e-8);
  double mn = kInf;
  for (Eigen::Index i = 0; i < je.values.size(); ++i)
    if (je.values(i) > 1e-10 * je.values(0)) mn = std::min(mn, je.values(i));
  r.C_E = 1.0 / mn;
  double lk = std::pow(r.lambda, k);
  r.eps_bound_index = lk * r.C_cb;
  r.eps_bound_choi = lk * r.C_E;
  return r;
}

// ---------------------------------------------------------------------------
// sums of dephasing generators

struct SymmetricCmlsi {
  int l = 0;               // number of terms
  int m = 0;               // max number of non-commuting partners
  double lambda_E = 0.0;   // gap of sum_k (E_k - id)
  double min_term_gap = 0.0;
  double lambda_avg = 0.0;       // 1 - lambda_E / l
  double lambda_prod = 0.0;      // 1 / (lambda_E / m^2 + 1)
  double lambda_prod_measured = 0.0;
  double avg_lower = 0.0;
  double prod_lower = 0.0;
  bool fallback = false;  // commuting family: exact tensorization with the Schur bounds
  double schur_min = 0.0;
};

inline double thm61_value(double lam, int d, double min_gap) {
  double ceil_term = std::max(1.0, guarded_ceil((2.0 * std::log(static_cast<double>(d)) + 1.0) / std::log(1.0 / lam)));
  return min_gap / (8.0 * std::log(2.0 * d)) / ceil_term;
}

inline SymmetricCmlsi symmetric_cmlsi(const std::vector<Mat>& a) {
  if (a.empty()) throw DimensionError("symmetric_cmlsi: empty family");
  const int d = static_cast<int>(a[0].rows());
  check_superop_dim(d);
  SymmetricCmlsi r;
  r.l = static_cast<int>(a.size());
  std::vector<Mat> P;
  r.min_term_gap = kInf;
  r.schur_min = kInf;
  for (const auto& x : a) {
    if (!is_hermitian(x, 1e-12)) throw DomainError("symmetric_cmlsi: terms must be Hermitian");
    P.push_back(trace_conditional_expectation(commutant(algebra_closure({x}))).superop_heisenberg().matrix);
    EigH e = eig_hermitian(herm(x));
    std::vector<double> ks(e.values.data(), e.values.data() + e.values.size());
    SchurBound sb = schur_cmlsi_lower(ks);
    r.min_term_gap = std::min(r.min_term_gap, sb.gap);
    r.schur_min = std::min(r.schur_min, sb.lower);
  }
  Mat PN = trace_conditional_expectation(commutant(algebra_closure(a))).superop_heisenberg().matrix;
  const auto n = P[0].rows();
  Mat S = Mat::Zero(n, n);
  for (const auto& p : P) S += Mat::Identity(n, n) - p;
  r.lambda_E = psd_gap(S);
  if (r.lambda_E <= 0.0) throw DomainError("symmetric_cmlsi: lambda_E vanishes");
  r.m = noncommuting_degree(P);
  r.lambda_avg = std::max(0.0, 1.0 - r.lambda_E / r.l);
  r.lambda_prod = r.m == 0 ? 0.0 : 1.0 / (r.lambda_E / (static_cast<double>(r.m) * r.m) + 1.0);
  Mat prod = Mat::Identity(n, n);
  for (const auto& p : P) prod = p * prod;
  r.lambda_prod_measured = op_norm(prod - PN);
  if (r.lambda_avg <= 1e-12 || r.lambda_prod <= 1e-12) r.fallback = true;
  r.avg_lower = r.lambda_avg <= 1e-12 ? r.schur_min : thm61_value(r.lambda_avg, d, r.min_term_gap);
  r.prod_lower = r.lambda_prod <= 1e-12 ? r.schur_min : thm61_value(r.lambda_prod, d, r.min_term_gap);
  return r;
}

// ---------------------------------------------------------------------------
// graphs

struct GraphCmlsi {
  int gamma = 0;              // max degree
  double lambda_tilde = 0.0;  // gap of sum_e (E_e - id)
  double lambda = 0.0;        // detectability bound with g = 2 (gamma - 1)
  double C_G = 1.0;           // C_cb of the global fixed algebra
  double c_G_inv = 1.0;       // inverse min nonzero eigenvalue of J_{E_G}
  double C = 1.0;
  double at_constant = 4.0;
  double alpha_edge_min = 0.0;
  double cmlsi_lower = 0.0;
};

// Local terms act on d^2 dimensions and must be trace symmetric.
inline GraphCmlsi graph_cmlsi(const Graph& G, const LindbladSpec& local, int d) {
  if (!G.connected()) throw DomainError("graph_cmlsi: graph is disconnected");
  if (G.edges.empty()) throw DomainError("graph_cmlsi: graph has no edges");
  GraphCmlsi r;
  r.gamma = G.max_degree();
  const int dl = d * d;
  Mat sig_loc = Mat::Identity(dl, dl) / static_cast<double>(dl);
  r.alpha_edge_min = cmlsi_bounds(local, sig_loc).lower;

  LindbladSpec LG = subsystem_lindbladian(G, local, d);
  ConditionalExpectation EG = trace_conditional_expectation(fixed_point_algebra(LG));
  r.C_G = index(EG).C_cb;
  Mat JE = choi_of_superop(EG.superop_schrodinger()).matrix;
  EigH je = eig_hermitian(herm(JE), 1e-8);
  double mn = kInf;
  for (Eigen::Index i = 0; i < je.values.size(); ++i)
    if (je.values(i) > 1e-10 * je.values(0)) mn = std::min(mn, je.values(i));
  r.c_G_inv = 1.0 / mn;
  r.C = std::min(r.C_G, r.c_G_inv);

  Mat Eloc = trace_conditional_expectation(fixed_point_algebra(local)).superop_heisenberg().matrix;
  std::vector<int> dims(static_cast<size_t>(G.n_vertices), d);
  const auto N = LG.L.rows();
  Mat S = Mat::Zero(N, N);
  for (auto [u, v] : G.edges) S += Mat::Identity(N, N) - embed_superop(Eloc, dims, {u, v});
  r.lambda_tilde = psd_gap(S);
  if (r.gamma <= 1) {
    r.lambda = 0.0;
  } else {
    const double g = 2.0 * (r.gamma - 1);
    r.lambda = 1.0 / (r.lambda_tilde / (g * g) + 1.0);
  }
  r.at_constant = r.lambda == 0.0 ? 4.0 : 4.0 * std::max(1.0, guarded_ceil((1.0 + std::log(r.C)) / std::log(1.0 / r.lambda)));
  r.cmlsi_lower = r.alpha_edge_min / r.at_constant;
  return r;
}

inline double kac_at_constant(double lambda0, int n, double c) {
  if (!(lambda0 > 0.0) || lambda0 >= 1.0) throw DomainError("kac_at_constant: lambda0 must lie in (0, 1)");
  if (n < 4) throw DomainError("kac_at_constant: n must be at least 4");
  if (c < 1.0) throw DomainError("kac_at_constant: c must be at least 1");
  const double q = static_cast<double>(n / 4) * std::log(1.0 / lambda0);
  return 4.0 * std::max(1.0, guarded_ceil((1.0 + std::log(c)) / q));
}

// The two CMLSI lower bounds for L_n^mu and its rescaled companion.
inline std::pair<double, double> kac_cmlsi_lower(double local_gap, double C_e, int n, double lambda0, double c) {
  double at = kac_at_constant(lambda0, n, c);
  return {local_gap / ((n - 1) * C_e * at), 1.0 / ((n - 1) * at)};
}

inline double design_mixing_time(double alpha, int n, int k, int d, double eps) {
  if (!(alpha > 0.0)) throw DomainError("design_mixing_time: alpha must be positive");
  if (d < 2) throw DomainError("design_mixing_time: d must be at least 2");
  if (!(eps > 0.0) || eps > 1.0) throw DomainError("design_mixing_time: eps must lie in (0, 1]");
  return (std::log(4.0 * k * n) + std::log(std::log(static_cast<double>(d))) + 2.0 * std::log(1.0 / eps)) / alpha;
}

struct DesignIndex {
  double blocks = 0.0;    // sum_i dK_i^2 from the twirl's block structure
  double binomial = 0.0;  // binom(k + 2D - 1, k)
  bool agree = false;
};

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline DesignIndex design_index(int D, int k) {
  DesignIndex r;
  r.blocks = index(haar_twirl_ce(D, k)).C_cb;
  r.binomial = binomial(k + 2 * D - 1, k);
  r.agree = std::abs(r.blocks - r.binomial) < 1e-9;
  return r;
}

// ---------------------------------------------------------------------------
// entropy decay certificate

struct DecayValidation {
  double max_excess = -kInf;  // max of D_t - e^{-alpha t} D_0 (1 + 1e-6)
  int violations = 0;
  int checks = 0;
};

// rho lives on system (x) ancilla with layout i * n_anc + a.
inline void decay_validate(DecayValidation& v, const LindbladSpec& L, const ConditionalExpectation& E, double alpha,
                           const std::vector<double>& ts, const Mat& rho, int n_anc) {
  Mat ref = apply_on_system(E.superop_schrodinger(), rho, n_anc);
  double D0 = relative_entropy(rho, ref);
  for (double t : ts) {
    Mat rt = herm(apply_on_system(schrodinger_semigroup(L, t), rho, n_anc));
    double Dt = relative_entropy(rt, ref);
    double ex = Dt - std::exp(-alpha * t) * D0 * (1.0 + 1e-6);
    v.max_excess = std::max(v.max_excess, ex);
    if (ex > 1e-12) ++v.violations;
    ++v.checks;
  }
}

// ---------------------------------------------------------------------------
// SU(2) sub-Laplacian chain

struct Su2Refined {
  int m = 0;
  double gap = 0.0;
  double C_cb = 0.0;
  double thm33_lower = 0.0;  // gap / C_cb
  double lambda1 = 0.0, lambda2 = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double c_bar = 0.0;           // c3 rounded up as published (3 for m = 3, 2.1 for m = 4)
  double alpha_refined = 0.0;   // 1 / (c_bar ln 2m)
  double alpha_exact_c3 = 0.0;  // 1 / (c3 ln 2m)
  double alpha_unit_gap = 0.0;  // Schur bound of the h = iX/2 terms divided by c3
};

inline Su2Refined su2_refined_pipeline(int m) {
  Su2Refined r;
  r.m = m;
  LindbladSpec L = su2_sublaplacian(m);
  Mat sig = Mat::Identity(m, m) / static_cast<double>(m);
  CmlsiBounds cb = cmlsi_bounds(L, sig);
  r.gap = cb.gap;
  r.C_cb = cb.indices.C_tau_cb;
  r.thm33_lower = cb.lower;
  Su2Irrep ir = su2_irrep(m);
  UncertaintyTwo u = uncertainty_two(su2_eigenbasis(ir.X), su2_eigenbasis(ir.Y));
  r.lambda1 = u.lambda1;
  r.lambda2 = u.lambda2;
  r.c1 = u.c1;
  r.c2 = u.c2.value_or(kInf);
  if (!u.c3) throw NumericalError("su2_refined_pipeline: lambda1 too large for the meta bound");
  r.c3 = *u.c3;
  r.c_bar = m == 3 ? 3.0 : (m == 4 ? 2.1 : r.c3);
  if (r.c_bar < r.c3) throw NumericalError("su2_refined_pipeline: rounded constant below c3");
  const double l2m = std::log(2.0 * m);
  r.alpha_refined = 1.0 / (r.c_bar * l2m);
  r.alpha_exact_c3 = 1.0 / (r.c3 * l2m);
  const cplx I(0.0, 1.0);
  EigH e = eig_hermitian(herm(I * ir.X / 2.0));
  std::vector<double> ks(e.values.data(), e.values.data() + e.values.size());
  r.alpha_unit_gap = schur_cmlsi_lower(ks).lower / r.c3;
  return r;
}

// ---------------------------------------------------------------------------
// report

struct SdpiBlock {
  double kappa = 0.0;
  double c_upper = 1.0;
};

struct AtBlock {
  std::string method;  // l2 | refined | meta | gap
  double constant = 1.0;
};

struct UncertaintyBlock {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double c1 = 0.0;
  std::optional<double> c2;
  std::optional<double> c3;
};

struct ConstantsReport {
  std::string model_id;
  double gap = 0.0;
  IndexReport indices;
  double cmlsi_lower = 0.0;
  double cmlsi_upper = 0.0;
  std::optional<SdpiBlock> sdpi;
  std::optional<AtBlock> at;
  std::optional<UncertaintyBlock> uncertainty;
  std::vector<std::string> provenance;
  std::vector<std::pair<std::string, double>> values;  // model-specific, in emission order
  std::vector<std::string> notes;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
};

}  // namespace qfit
