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

// Divergences and BKM-weighted L2 machinery. All logarithms are natural.
//
// The BKM integrals are evaluated through the logarithmic mean
//   lm(a, b) = (a - b) / (ln a - ln b),   lm(a, a) = a,
// using  int_0^1 a^s b^(1-s) ds = lm(a, b)  and
//        int_0^inf (a + r)^-1 (b + r)^-1 dr = 1 / lm(a, b).

#include "qfit/semigroup.hpp"

namespace qfit {

inline double log_mean(double a, double b) {
  if (a <= 0 || b <= 0) return 0.0;
  if (a == b) return a;
  // b * (e^x - 1) / x with x = ln(a / b), stable near a == b
  double x = std::log1p((a - b) / b);
  if (std::abs(x) < 1e-300) return a;
  return b * std::expm1(x) / x;
}

// Eigen-decomposition helper with nonnegative eigenvalues.
inline EigH state_eig(const Mat& rho) {
  EigH e = eig_hermitian(herm(rho), 1e-8);
  for (Eigen::Index i = 0; i < e.values.size(); ++i) e.values(i) = std::max(e.values(i), 0.0);
  return e;
}

inline double von_neumann_entropy(const Mat& rho) {
  EigH e = state_eig(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > 0) s -= e.values(i) * std::log(e.values(i));
  return s;
}

// D(rho || sigma) = tr(rho ln rho - rho ln sigma); +inf on support failure.
inline double relative_entropy(const Mat& rho, const Mat& sigma, double cutoff = 1e-13) {
  if (rho.rows() != sigma.rows()) throw DimensionError("relative_entropy: dimension mismatch");
  EigH r = state_eig(rho);
  EigH s = state_eig(sigma);
  const double stop = std::max(s.values(0), 1e-300);
  const double rtop = std::max(r.values(0), 1e-300);
  Mat overlap = (r.vectors.adjoint() * s.vectors).cwiseAbs2();
  double out = 0.0;
  for (Eigen::Index i = 0; i < r.values.size(); ++i) {
    double p = r.values(i);
    if (p <= cutoff * rtop) continue;
    out += p * std::log(p);
    for (Eigen::Index j = 0; j < s.values.size(); ++j) {
      double w = overlap(i, j).real();
      double q = s.values(j);
      if (q <= cutoff * stop) {
        if (p * w > 1e-12) return kInf;
        continue;
      }
      out -= p * w * std::log(q);
    }
  }
  return out;
}

// D_max(rho || sigma) = ln inf{c : rho <= c sigma}
inline double dmax(const Mat& rho, const Mat& sigma) {
  double m = max_relative_eigenvalue(rho, sigma);
  return std::isinf(m) ? kInf : std::log(m);
}

// ---------------------------------------------------------------------------
// BKM kernels

struct BKMKernel {
  Mat base;
  EigH eig;
  bool inverse = false;

  Mat apply(const Mat& X) const {
    const Mat& V = eig.vectors;
    Mat Y = V.adjoint() * X * V;
    const auto n = eig.values.size();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        double m = log_mean(eig.values(i), eig.values(j));
        Y(i, j) = inverse ? Y(i, j) / m : Y(i, j) * m;
      }
    return V * Y * V.adjoint();
  }
};

inline BKMKernel make_bkm_kernel(const Mat& rho, bool inverse) {
  EigH e = eig_hermitian(herm(rho), 1e-8);
  const double top = std::max(e.values(0), 1e-300);
  if (e.values(e.values.size() - 1) <= 1e-14 * top) throw DomainError("BKM kernel: base state is rank deficient");
  return {rho, e, inverse};
}

inline Mat bkm_apply(const BKMKernel& k, const Mat& X) { return k.apply(X); }

// <X, Gamma_rho(X)>
inline double bkm_norm_sq(const Mat& X, const Mat& rho) {
  BKMKernel k = make_bkm_kernel(rho, false);
  return hs_inner(X, k.apply(X)).real();
}

// Asymmetric weight sum_ij |X_ij|^2 / lm(mu1 l_i, mu2 l_j) in sigma's eigenbasis.
inline double weighted_norm_asymmetric(const Mat& X, const Mat& sigma, double mu1, double mu2) {
  if (mu1 <= 0 || mu2 <= 0) throw DomainError("weighted_norm_asymmetric: weights must be positive");
  BKMKernel k = make_bkm_kernel(sigma, true);
  const Mat& V = k.eig.vectors;
  Mat Y = V.adjoint() * X * V;
  double s = 0.0;
  for (Eigen::Index i = 0; i < Y.rows(); ++i)
    for (Eigen::Index j = 0; j < Y.cols(); ++j)
      s += std::norm(Y(i, j)) / log_mean(mu1 * k.eig.values(i), mu2 * k.eig.values(j));
  return s;
}

// ||X||^2_{sigma^-1} = <X, Gamma_sigma^-1(X)>
inline double chi_square(const Mat& X, const Mat& sigma) { return weighted_norm_asymmetric(X, sigma, 1.0, 1.0); }

inline double chi_square_states(const Mat& rho, const Mat& sigma) { return chi_square(rho - sigma, sigma); }

// k(c) = (c ln c - c + 1) / (c - 1)^2, with k(1) = 1/2
inline double k_of_c(double c) {
  if (!(c >= 1.0 - 1e-12)) throw DomainError("k_of_c: c must be at least 1");
  double x = c - 1.0;
  if (std::abs(x) < 1e-3) return 0.5 - x / 6.0 + x * x / 12.0 - x * x * x / 20.0;
  return (c * std::log(c) - c + 1.0) / (x * x);
}

struct SandwichResult {
  double D = 0.0;
  double chi2 = 0.0;
  double c = 1.0;
  double lower_slack = 0.0;  // D - k(c) chi2
  double upper_slack = 0.0;  // chi2 - D
};

inline SandwichResult sandwich_check(const Mat& rho, const Mat& sigma) {
  SandwichResult r;
  r.D = relative_entropy(rho, sigma);
  if (std::isinf(r.D)) throw DomainError("sandwich_check: support condition fails");
  r.chi2 = chi_square_states(rho, sigma);
  r.c = std::max(1.0, std::exp(dmax(rho, sigma)));
  r.lower_slack = r.D - k_of_c(r.c) * r.chi2;
  r.upper_slack = r.chi2 - r.D;
  return r;
}

// 2 c D(rho || sigma) - ||rho - sigma||^2_{omega^-1}, requiring rho, sigma <= c omega
inline double three_point_bound_check(const Mat& rho, const Mat& sigma, const Mat& omega, double c) {
  if (min_eig(c * omega - rho) < -1e-9 || min_eig(c * omega - sigma) < -1e-9)
    throw DomainError("three_point_bound_check: rho, sigma <= c omega does not hold");
  return 2.0 * c * relative_entropy(rho, sigma) - chi_square(rho - sigma, omega);
}

// ---------------------------------------------------------------------------
// entropy production and Dirichlet form

// EP_L(rho) = -tr(L_*(rho)(ln rho - ln E_{F*}(rho)))
inline double entropy_production(const LindbladSpec& L, const Mat& rho, const ConditionalExpectation& EF) {
  if (!is_full_rank(rho, 1e-13)) throw DomainError("entropy_production: rho must be full rank");
  Mat lr = L.apply_star(rho);
  Mat lg = apply_matrix_function(herm(rho), [](double x) { return std::log(x); });
  Mat lf = apply_matrix_function(herm(EF.schrodinger(rho)), [](double x) { return std::log(x); });
  return -(lr * (lg - lf)).trace().real();
}

inline double entropy_production(const LindbladSpec& L, const Mat& rho) {
  return entropy_production(L, rho, fixed_point_expectation(L, L.sigma));
}

struct DirichletForm {
  double value = 0.0;        // -<X, L(X)> in the BKM inner product of sigma
  double derivation = 0.0;   // sum_j int_0^1 e^{(1/2-s)w_j} <d_j X, d_j X>_{sigma,s} ds
};

// <Y, Y>_{sigma,s} is read as tr(Y^dag sigma^{1-s} Y sigma^s); with that reading
// the s-integral equals sum_ab |Y_ab|^2 lm(e^{w/2} l_a, e^{-w/2} l_b) and the
// two sides agree (checked in the tests).
inline DirichletForm dirichlet_form(const LindbladSpec& L, const Mat& sigma, const Mat& X) {
  if (L.apply_star(sigma).norm() > 1e-9 * std::max(1.0, L.L.norm())) throw DomainError("dirichlet_form: sigma is not invariant");
  BKMKernel k = make_bkm_kernel(sigma, false);
  DirichletForm f;
  f.value = -hs_inner(X, k.apply(L.apply(X))).real();
  const Mat& V = k.eig.vectors;
  for (const auto& j : L.jumps) {
    Mat Y = V.adjoint() * commutator(j.A, X) * V;
    double ep = std::exp(j.omega / 2), em = std::exp(-j.omega / 2);
    for (Eigen::Index a = 0; a < Y.rows(); ++a)
      for (Eigen::Index b = 0; b < Y.cols(); ++b)
        f.derivation += std::norm(Y(a, b)) * log_mean(ep * k.eig.values(a), em * k.eig.values(b));
  }
  return f;
}

// S(A|M) = S(AM) - S(M) for rho on A (x) M.
inline double conditional_entropy(const Mat& rho_AM, int dA, int dM) {
  if (rho_AM.rows() != static_cast<Eigen::Index>(dA) * dM) throw DimensionError("conditional_entropy: dimension mismatch");
  return von_neumann_entropy(rho_AM) - von_neumann_entropy(partial_trace(rho_AM, {dA, dM}, {1}));
}

}  // namespace qfit
