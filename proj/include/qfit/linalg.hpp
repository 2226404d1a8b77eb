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

// Dense complex linear algebra used by every other header.
//
// Vectorization is column stacking throughout: vec(A X B) = (B^T (x) A) vec(X),
// which is what Eigen's column-major storage gives for free when a D x D
// matrix is viewed as a D^2 vector.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qfit {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// small helpers

inline Mat identity(int d) { return Mat::Identity(d, d); }

inline Vec vec(const Mat& X) { return Eigen::Map<const Vec>(X.data(), X.size()); }

inline Mat unvec(const Vec& v, int d) {
  if (v.size() != static_cast<Eigen::Index>(d) * d) throw DimensionError("unvec: size mismatch");
  return Eigen::Map<const Mat>(v.data(), d, d);
}

inline int isqrt_exact(Eigen::Index n) {
  int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (static_cast<Eigen::Index>(r) * r != n) throw DimensionError("not a perfect square");
  return r;
}

inline cplx hs_inner(const Mat& A, const Mat& B) { return (A.adjoint() * B).trace(); }

inline Mat herm(const Mat& A) { return (A + A.adjoint()) * 0.5; }

inline bool is_hermitian(const Mat& A, double rel = 1e-10) {
  if (A.rows() != A.cols()) return false;
  double n = std::max(1.0, A.norm());
  return (A - A.adjoint()).norm() <= rel * n;
}

// Largest singular value.
inline double op_norm(const Mat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(A);
  return svd.singularValues()(0);
}

inline double trace_norm(const Mat& A) {
  Eigen::JacobiSVD<Mat> svd(A);
  return svd.singularValues().sum();
}

inline Mat commutator(const Mat& A, const Mat& B) { return A * B - B * A; }

inline Mat kron(const Mat& A, const Mat& B) {
  Mat out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

inline Mat kron_all(const std::vector<Mat>& ops) {
  Mat out = Mat::Identity(1, 1);
  for (const auto& o : ops) out = kron(out, o);
  return out;
}

// ---------------------------------------------------------------------------
// partial trace over a tensor product with row-major factor order
// (factor 0 is the most significant index, matching kron(A, B)).

inline Mat partial_trace(const Mat& X, const std::vector<int>& dims, const std::vector<int>& keep) {
  long D = 1;
  for (int d : dims) {
    if (d < 1) throw DimensionError("partial_trace: non-positive factor");
    D *= d;
  }
  if (X.rows() != D || X.cols() != D) throw DimensionError("partial_trace: dims do not match operator");
  const int nf = static_cast<int>(dims.size());
  std::vector<bool> kept(nf, false);
  for (int k : keep) {
    if (k < 0 || k >= nf) throw DimensionError("partial_trace: bad factor index");
    kept[k] = true;
  }
  long dk = 1, dt = 1;
  for (int f = 0; f < nf; ++f) (kept[f] ? dk : dt) *= dims[f];

  // full index of (kept multi-index, traced multi-index)
  std::vector<long> full(static_cast<size_t>(dk * dt));
  for (long idx = 0; idx < D; ++idx) {
    long rem = idx, ki = 0, ti = 0, kstride = 1, tstride = 1;
    for (int f = nf - 1; f >= 0; --f) {
      long digit = rem % dims[f];
      rem /= dims[f];
      if (kept[f]) {
        ki += digit * kstride;
        kstride *= dims[f];
      } else {
        ti += digit * tstride;
        tstride *= dims[f];
      }
    }
    full[static_cast<size_t>(ki * dt + ti)] = idx;
  }
  Mat out = Mat::Zero(dk, dk);
  for (long a = 0; a < dk; ++a)
    for (long b = 0; b < dk; ++b) {
      cplx s = 0;
      for (long t = 0; t < dt; ++t) s += X(full[a * dt + t], full[b * dt + t]);
      out(a, b) = s;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Hermitian spectral routines

struct EigH {
  RVec values;  // descending
  Mat vectors;  // columns
};

inline EigH eig_hermitian(const Mat& A, double rel = 1e-10) {
  if (A.rows() != A.cols()) throw DimensionError("eig_hermitian: not square");
  if (!is_hermitian(A, rel)) throw DomainError("eig_hermitian: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(A));
  if (es.info() != Eigen::Success) throw NumericalError("eig_hermitian: solver failed");
  const Eigen::Index n = A.rows();
  EigH out{RVec(n), Mat(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

inline double min_eig(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double max_eig(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(A.rows() - 1);
}

inline Mat apply_matrix_function(const Mat& A, const std::function<double(double)>& f) {
  EigH e = eig_hermitian(A);
  RVec fv(e.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) {
    fv(i) = f(e.values(i));
    if (!std::isfinite(fv(i))) throw DomainError("apply_matrix_function: f undefined on spectrum");
  }
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

// f applied on the support (eigenvalues above cutoff * max); zero elsewhere.
inline Mat apply_on_support(const Mat& A, const std::function<double(double)>& f, double cutoff = 1e-12) {
  EigH e = eig_hermitian(A);
  double top = std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)));
  RVec fv = RVec::Zero(e.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i)
    if (e.values(i) > cutoff * top) fv(i) = f(e.values(i));
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

inline Mat mpow(const Mat& A, double p) {
  return apply_matrix_function(A, [p](double x) { return std::pow(std::max(x, 0.0), p); });
}

// Spectral projections with eigenvalues clustered within tol * ||A||.
struct SpectralCluster {
  double value;
  Mat basis;  // orthonormal columns
};

inline std::vector<SpectralCluster> spectral_clusters(const Mat& A, double rel = 1e-8) {
  EigH e = eig_hermitian(A);
  double scale = std::max(1.0, e.values.cwiseAbs().maxCoeff());
  std::vector<SpectralCluster> out;
  Eigen::Index start = 0;
  const Eigen::Index n = e.values.size();
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n || e.values(i - 1) - e.values(i) > rel * scale) {
      double mean = e.values.segment(start, i - start).mean();
      out.push_back({mean, e.vectors.middleCols(start, i - start)});
      start = i;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// states

inline void check_state(const Mat& rho, const char* who = "state") {
  if (rho.rows() != rho.cols()) throw DimensionError(std::string(who) + ": not square");
  double n = std::max(1.0, rho.norm());
  if (!is_hermitian(rho, 1e-10)) throw DomainError(std::string(who) + ": not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-10) throw DomainError(std::string(who) + ": trace is not one");
  if (min_eig(rho) < -1e-9 * n) throw DomainError(std::string(who) + ": not positive semidefinite");
}

inline int support_rank(const Mat& rho, double cutoff = 1e-12) {
  RVec ev = eig_hermitian(rho).values;
  double top = std::max(ev(0), 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > cutoff * std::max(top, 1e-300)) ++r;
  return r;
}

inline bool is_full_rank(const Mat& rho, double cutoff = 1e-10) {
  return support_rank(rho, cutoff) == rho.rows();
}

// Opt-in full-rank enforcement.
inline Mat mix_full_rank(const Mat& rho, double eps = 1e-6) {
  const auto D = rho.rows();
  return (1.0 - eps) * rho + eps * Mat::Identity(D, D) / static_cast<double>(D);
}

// ---------------------------------------------------------------------------
// superoperators

struct Superoperator {
  int dim = 0;  // operator dimension D
  Mat matrix;   // D^2 x D^2

  Mat apply(const Mat& X) const { return unvec(matrix * vec(X), dim); }
  Superoperator adjoint() const { return {dim, matrix.adjoint()}; }
  Superoperator operator*(const Superoperator& o) const { return {dim, matrix * o.matrix}; }
};

inline Superoperator identity_superop(int D) { return {D, Mat::Identity(D * D, D * D)}; }

// X -> A X B
inline Mat sop_sandwich(const Mat& A, const Mat& B) { return kron(B.transpose(), A); }
inline Mat sop_left(const Mat& A) { return kron(Mat::Identity(A.rows(), A.rows()), A); }
inline Mat sop_right(const Mat& B) { return kron(B.transpose(), Mat::Identity(B.rows(), B.rows())); }

inline Superoperator superop_of_kraus(const std::vector<Mat>& kraus) {
  if (kraus.empty()) throw DimensionError("superop_of_kraus: empty Kraus list");
  const int D = static_cast<int>(kraus[0].rows());
  Mat S = Mat::Zero(D * D, D * D);
  for (const auto& K : kraus) {
    if (K.rows() != D || K.cols() != D) throw DimensionError("superop_of_kraus: dimension mismatch");
    S += kron(K.conjugate(), K);
  }
  return {D, S};
}

// Superoperator of an arbitrary linear map given by its action.
inline Superoperator superop_of_map(int D, const std::function<Mat(const Mat&)>& f) {
  Mat S(D * D, D * D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) {
      Mat E = Mat::Zero(D, D);
      E(i, j) = 1.0;
      S.col(i + j * D) = vec(f(E));
    }
  return {D, S};
}

struct ChoiMatrix {
  int dim = 0;
  Mat matrix;
  bool normalized = true;
};

// J[(i,k),(j,l)] = Phi(|i><j|)[k,l] / D
inline ChoiMatrix choi_of_superop(const Superoperator& S) {
  const int D = S.dim;
  Mat J(D * D, D * D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l) J(i * D + k, j * D + l) = S.matrix(k + l * D, i + j * D) / static_cast<double>(D);
  return {D, J, true};
}

inline Superoperator superop_of_choi(const ChoiMatrix& J) {
  const int D = J.dim;
  const double scale = J.normalized ? static_cast<double>(D) : 1.0;
  Mat S(D * D, D * D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l) S(k + l * D, i + j * D) = J.matrix(i * D + k, j * D + l) * scale;
  return {D, S};
}

inline double choi_min_eig(const Superoperator& S) { return min_eig(choi_of_superop(S).matrix); }

// ---------------------------------------------------------------------------
// matrix exponential

inline Mat expm(const Mat& A) {
  const double n = std::max(1.0, A.norm());
  if (is_hermitian(A, 1e-13)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(herm(A));
    Vec ev = es.eigenvalues().array().exp().cast<cplx>();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  }
  if ((A * A.adjoint() - A.adjoint() * A).norm() <= 1e-12 * n * n) {
    Eigen::ComplexSchur<Mat> cs(A);
    const Mat& T = cs.matrixT();
    Vec ev = T.diagonal().array().exp();
    return cs.matrixU() * ev.asDiagonal() * cs.matrixU().adjoint();
  }
  return A.exp();
}

inline Superoperator expm(const Superoperator& S, double t) {
  if (t == 0.0) return identity_superop(S.dim);
  Mat M = S.matrix * t;
  return {S.dim, expm(M)};
}

// ---------------------------------------------------------------------------
// random objects; every sampler takes an explicit generator

inline double randn(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return n(rng);
}

inline double randu(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng);
}

inline int randint(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> u(lo, hi);
  return u(rng);
}

inline Mat ginibre(int rows, int cols, Rng& rng) {
  Mat G(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) G(i, j) = cplx(randn(rng), randn(rng)) / std::sqrt(2.0);
  return G;
}

// QR of a Ginibre matrix with the phases of diag(R) fixed.
inline Mat haar_unitary(int D, Rng& rng) {
  Mat G = ginibre(D, D, rng);
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ() * Mat::Identity(D, D);
  Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < D; ++i) {
    cplx r = R(i, i);
    cplx ph = std::abs(r) > 0 ? r / std::abs(r) : cplx(1.0);
    Q.col(i) *= ph;
  }
  return Q;
}

inline Mat random_hermitian(int D, Rng& rng) { return herm(ginibre(D, D, rng)); }

inline Mat random_state(int D, Rng& rng, int rank = -1) {
  if (rank <= 0) rank = D;
  Mat G = ginibre(D, rank, rng);
  Mat rho = G * G.adjoint();
  rho /= rho.trace().real();
  return herm(rho);
}

inline Vec random_pure_vector(int D, Rng& rng) {
  Vec v = ginibre(D, 1, rng).col(0);
  return v / v.norm();
}

inline Mat projector(const Vec& v) { return v * v.adjoint(); }

// Random channel with nk Kraus operators from an isometry.
inline std::vector<Mat> random_kraus(int D, int nk, Rng& rng) {
  Mat V = haar_unitary(D * nk, rng).leftCols(D);
  std::vector<Mat> K;
  for (int k = 0; k < nk; ++k) K.push_back(V.middleRows(k * D, D));
  return K;
}

// ---------------------------------------------------------------------------
// Pauli matrices

inline Mat pauli(char c) {
  Mat P = Mat::Zero(2, 2);
  switch (c) {
    case 'I': P << 1, 0, 0, 1; break;
    case 'X': P << 0, 1, 1, 0; break;
    case 'Y': P << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': P << 1, 0, 0, -1; break;
    default: throw DomainError("pauli: unknown label");
  }
  return P;
}

// Swap of two d-dimensional factors.
inline Mat swap_operator(int d) {
  Mat S = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) S(j * d + i, i * d + j) = 1.0;
  return S;
}

// Orthonormal basis (columns) of the null space of a Hermitian PSD matrix.
inline Mat psd_null_space(const Mat& G, double rel = 1e-10, double abs_floor = 0.0) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(G));
  const RVec& ev = es.eigenvalues();
  double top = std::max(std::abs(ev(ev.size() - 1)), 1e-300);
  const double cut = std::max(rel * top, abs_floor);
  Eigen::Index k = 0;
  while (k < ev.size() && ev(k) <= cut) ++k;
  if (ev(ev.size() - 1) == 0.0) k = ev.size();
  return es.eigenvectors().leftCols(k);
}

// Orthonormal basis of the right null space of a general matrix.
inline Mat null_space(const Mat& M, double rel = 1e-9) {
  Eigen::BDCSVD<Mat> svd(M, Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  double top = s.size() ? s(0) : 0.0;
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rel * std::max(top, 1e-300)) ++r;
  return svd.matrixV().rightCols(M.cols() - r);
}

// Orthonormal basis of the column span of M (rank by singular value cutoff).
inline Mat column_span(const Mat& M, double rel = 1e-9) {
  if (M.cols() == 0) return Mat(M.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU);
  const RVec& s = svd.singularValues();
  double top = s.size() ? s(0) : 0.0;
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rel * std::max(top, 1e-300)) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace qfit
