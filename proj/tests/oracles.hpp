// Independent reference computations for the test suites. Nothing here calls
// into qfit numerics; only the Mat/Vec typedefs are shared.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline Mat kron(const Mat& A, const Mat& B) { return Eigen::kroneckerProduct(A, B).eval(); }

inline Mat eye(Eigen::Index n) { return Mat::Identity(n, n); }

inline Mat gaussian(Eigen::Index r, Eigen::Index c, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat G(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) G(i, j) = cplx(n(rng), n(rng));
  return G;
}

// QR of a Ginibre matrix with the phases of diag(R) absorbed.
inline Mat haar(int D, Rng& rng) {
  Mat G = gaussian(D, D, rng);
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ();
  Mat R = qr.matrixQR();
  for (int i = 0; i < D; ++i) {
    cplx r = R(i, i);
    Q.col(i) *= r / std::abs(r);
  }
  return Q;
}

inline Mat state(int D, Rng& rng, int rank = -1) {
  Mat G = gaussian(D, rank > 0 ? rank : D, rng);
  Mat rho = G * G.adjoint();
  return rho / rho.trace().real();
}

inline Mat hermitian_part(const Mat& A) { return (A + A.adjoint()) / 2.0; }

struct Eig {
  RVec values;
  Mat vectors;
};

inline Eig eig(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(A));
  return {es.eigenvalues(), es.eigenvectors()};
}

inline double min_eigenvalue(const Mat& A) { return eig(A).values.minCoeff(); }
inline double max_eigenvalue(const Mat& A) { return eig(A).values.maxCoeff(); }

inline Mat func(const Mat& A, double (*f)(double)) {
  Eig e = eig(A);
  RVec v = e.values.unaryExpr(f);
  return e.vectors * v.asDiagonal() * e.vectors.adjoint();
}

inline double entropy(const Mat& rho) {
  Eig e = eig(rho);
  double s = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > 1e-15) s -= e.values(i) * std::log(e.values(i));
  return s;
}

// tr rho (ln rho - ln sigma), sigma assumed full rank
inline double rel_entropy(const Mat& rho, const Mat& sigma) {
  Eig s = eig(sigma);
  RVec ls = s.values.unaryExpr([](double x) { return std::log(std::max(x, 1e-300)); });
  Mat logs = s.vectors * ls.asDiagonal() * s.vectors.adjoint();
  return -entropy(rho) - (rho * logs).trace().real();
}

// sum_ij |X_ij|^2 (ln a_i - ln a_j) / (a_i - a_j) in sigma's eigenbasis
inline double chi2(const Mat& rho, const Mat& sigma) {
  Eig s = eig(sigma);
  Mat X = s.vectors.adjoint() * (rho - sigma) * s.vectors;
  double out = 0;
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      double a = s.values(i), b = s.values(j);
      double w = std::abs(a - b) < 1e-14 * std::max(a, b) ? 1.0 / a : (std::log(a) - std::log(b)) / (a - b);
      out += std::norm(X(i, j)) * w;
    }
  return out;
}

inline double dmax(const Mat& rho, const Mat& sigma) {
  Mat s = func(sigma, [](double x) { return 1.0 / std::sqrt(x); });
  return std::log(max_eigenvalue(s * rho * s));
}

inline double k_of_c(double c) {
  if (std::abs(c - 1) < 1e-6) return 0.5;
  return (c * std::log(c) - c + 1) / ((c - 1) * (c - 1));
}

// vec(A X B) = (B^T (x) A) vec(X), column stacking
inline Vec vec(const Mat& X) { return Eigen::Map<const Vec>(X.data(), X.size()); }
inline Mat unvec(const Vec& v, Eigen::Index D) { return Eigen::Map<const Mat>(v.data(), D, D); }
inline Mat sandwich(const Mat& A, const Mat& B) { return kron(B.transpose(), A); }

inline Mat channel(const std::vector<Mat>& kraus, const Mat& rho) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& K : kraus) out += K * rho * K.adjoint();
  return out;
}

// Kraus operators tensored with the identity on an n-dimensional ancilla (system first).
inline std::vector<Mat> on_system(const std::vector<Mat>& kraus, int n) {
  std::vector<Mat> out;
  for (const auto& K : kraus) out.push_back(kron(K, eye(n)));
  return out;
}

inline std::vector<Mat> pinching_kraus(const Mat& basis) {
  std::vector<Mat> out;
  for (Eigen::Index i = 0; i < basis.cols(); ++i) out.push_back(basis.col(i) * basis.col(i).adjoint());
  return out;
}

inline Mat partial_trace_second(const Mat& rho, int dA, int dB) {
  Mat out = Mat::Zero(dA, dA);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j)
      for (int b = 0; b < dB; ++b) out(i, j) += rho(i * dB + b, j * dB + b);
  return out;
}

inline double cond_entropy(const Mat& rho, int dA, int dB) {
  // S(AB) - S(B); trace out A
  Mat rB = Mat::Zero(dB, dB);
  for (int a = 0; a < dA; ++a) rB += rho.block(a * dB, a * dB, dB, dB);
  return entropy(rho) - entropy(rB);
}

// Schroedinger generator of an adjoint-closed GNS jump list:
//   L_*(rho) = sum_j e^{-w_j/2} (2 A rho A^dag - {A^dag A, rho})
struct Jump {
  Mat A;
  double omega;
};

inline Mat schrodinger_generator(const std::vector<Jump>& jumps, int D) {
  Mat L = Mat::Zero(D * D, D * D);
  for (const auto& j : jumps) {
    double w = std::exp(-j.omega / 2);
    Mat AdA = j.A.adjoint() * j.A;
    L += w * (2.0 * sandwich(j.A, j.A.adjoint()) - sandwich(AdA, eye(D)) - sandwich(eye(D), AdA));
  }
  return L;
}

inline Mat expm(const Mat& A) { return A.exp(); }

// rho on system (x) ancilla, superoperator acting on the system (column stacking).
inline Mat apply_superop_on_system(const Mat& S, const Mat& rho, int D, int n) {
  Mat out = Mat::Zero(D * n, D * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Mat blk(D, D);
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) blk(i, j) = rho(i * n + a, j * n + b);
      Mat r = unvec(S * vec(blk), D);
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) out(i * n + a, j * n + b) = r(i, j);
    }
  return out;
}

// Normalized Choi matrix (1/D) sum_ij |i><j| (x) Phi(|i><j|) of a superoperator.
inline Mat choi(const Mat& S, int D) {
  Mat J = Mat::Zero(D * D, D * D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      Mat E = Mat::Zero(D, D);
      E(i, j) = 1.0;
      Mat out = unvec(S * vec(E), D);
      J.block(i * D, j * D, D, D) = out;
    }
  return J / static_cast<double>(D);
}

inline Mat superop_of_kraus(const std::vector<Mat>& kraus) {
  const auto D = kraus.at(0).rows();
  Mat S = Mat::Zero(D * D, D * D);
  for (const auto& K : kraus) S += sandwich(K, K.adjoint());
  return S;
}

// Orthonormal basis of the null space of a PSD matrix.
inline Mat psd_kernel(const Mat& A, double tol) {
  Eig e = eig(A);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) < tol) keep.push_back(i);
  Mat K(A.rows(), static_cast<Eigen::Index>(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c) K.col(static_cast<Eigen::Index>(c)) = e.vectors.col(keep[c]);
  return K;
}

inline double op_norm(const Mat& A) {
  Eigen::JacobiSVD<Mat> svd(A);
  return svd.singularValues()(0);
}

}  // namespace oracle
