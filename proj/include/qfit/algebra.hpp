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

// Finite-dimensional *-subalgebras N = (+)_i B(H_i) (x) 1_{K_i}, conditional
// expectations onto them, and Pimsner-Popa indices.

#include "qfit/linalg.hpp"

#include <numeric>
#include <tuple>

namespace qfit {

inline constexpr std::uint64_t kDefaultAlgebraSeed = 0x5eed0a19ebULL;

struct Block {
  int dH = 1;
  int dK = 1;
  bool operator==(const Block& o) const { return dH == o.dH && dK == o.dK; }
};

struct SubalgebraStructure {
  int ambient_dim = 0;
  std::vector<Block> blocks;
  // Columns: orthonormal basis adapted to (+) H_i (x) K_i. Inside block i the
  // column index is offset_i + h * dK_i + k.
  Mat basis_change;
  std::vector<Mat> hs_basis;

  std::vector<int> offsets() const {
    std::vector<int> off;
    int o = 0;
    for (const auto& b : blocks) {
      off.push_back(o);
      o += b.dH * b.dK;
    }
    return off;
  }
  int algebra_dim() const {
    int s = 0;
    for (const auto& b : blocks) s += b.dH * b.dH;
    return s;
  }
  Mat block_columns(size_t i) const { return basis_change.middleCols(offsets()[i], blocks[i].dH * blocks[i].dK); }
  Mat central_projection(size_t i) const {
    Mat V = block_columns(i);
    return V * V.adjoint();
  }
  // HS-orthogonal projection onto the algebra (the trace-preserving CE).
  Mat project(const Mat& X) const {
    Mat out = Mat::Zero(X.rows(), X.cols());
    for (const auto& b : hs_basis) out += hs_inner(b, X) * b;
    return out;
  }
  bool contains(const Mat& X, double rel = 1e-9) const {
    return (X - project(X)).norm() <= rel * std::max(1.0, X.norm());
  }
};

namespace detail {

// Appends the columns of C to the orthonormal prefix Q[:, :r]; returns the new r.
inline int extend_orthonormal(Mat& Q, int r, const Mat& C, double tol, double abs_floor = 0.0) {
  for (Eigen::Index c = 0; c < C.cols() && r < Q.cols(); ++c) {
    Vec v = C.col(c);
    double n0 = v.norm();
    if (n0 <= 1e-300) continue;
    for (int pass = 0; pass < 2; ++pass)
      if (r > 0) v -= Q.leftCols(r) * (Q.leftCols(r).adjoint() * v);
    if (v.norm() <= std::max(tol * n0, abs_floor)) continue;
    Q.col(r++) = v / v.norm();
  }
  return r;
}

inline std::vector<Mat> with_adjoints(const std::vector<Mat>& gens) {
  std::vector<Mat> out;
  for (const auto& g : gens) {
    out.push_back(g);
    if ((g - g.adjoint()).norm() > 1e-12 * std::max(1.0, g.norm())) out.push_back(g.adjoint());
  }
  return out;
}

inline std::vector<Mat> columns_as_ops(const Mat& span, int D) {
  std::vector<Mat> out;
  for (Eigen::Index k = 0; k < span.cols(); ++k) out.push_back(unvec(span.col(k), D));
  return out;
}

inline void sort_blocks(std::vector<Block>& blocks, std::vector<Mat>& cols, std::vector<double>& keys) {
  std::vector<size_t> order(blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const auto& x = blocks[a];
    const auto& y = blocks[b];
    return std::make_tuple(-x.dH, -x.dK, -x.dH * x.dK, keys[a]) < std::make_tuple(-y.dH, -y.dK, -y.dH * y.dK, keys[b]);
  });
  std::vector<Block> nb;
  std::vector<Mat> nc;
  std::vector<double> nk;
  for (size_t i : order) {
    nb.push_back(blocks[i]);
    nc.push_back(cols[i]);
    nk.push_back(keys[i]);
  }
  blocks = nb;
  cols = nc;
  keys = nk;
}

}  // namespace detail

// Builds the structure (and its HS basis of matrix units) from block data.
inline SubalgebraStructure structure_from_blocks(int D, const std::vector<Block>& blocks, const Mat& U) {
  SubalgebraStructure S;
  S.ambient_dim = D;
  S.blocks = blocks;
  S.basis_change = U;
  int total = 0;
  for (const auto& b : blocks) total += b.dH * b.dK;
  if (total != D || U.rows() != D || U.cols() != D) throw DimensionError("structure_from_blocks: block sizes do not fill the space");
  auto off = S.offsets();
  for (size_t i = 0; i < blocks.size(); ++i) {
    const int dH = blocks[i].dH, dK = blocks[i].dK;
    Mat V = U.middleCols(off[i], dH * dK);
    for (int a = 0; a < dH; ++a)
      for (int b = 0; b < dH; ++b) {
        Mat E = Mat::Zero(dH, dH);
        E(a, b) = 1.0;
        Mat unit = kron(E, Mat::Identity(dK, dK)) / std::sqrt(static_cast<double>(dK));
        S.hs_basis.push_back(V * unit * V.adjoint());
      }
  }
  return S;
}

// Orthonormal (HS) basis, as vectorized columns, of the unital *-algebra
// generated by gens: start from span{1, G, G^dag} and left-multiply by the
// generators until nothing new appears.
inline Mat algebra_span(const std::vector<Mat>& gens, double tol = 1e-8) {
  if (gens.empty()) throw DimensionError("algebra_span: no generators");
  const int D = static_cast<int>(gens[0].rows());
  for (const auto& g : gens)
    if (g.rows() != D || g.cols() != D) throw DimensionError("algebra_span: generator dimension mismatch");
  const int D2 = D * D;
  std::vector<Mat> G = detail::with_adjoints(gens);
  // products that vanish exactly come out as roundoff; measure them against the generators
  double gscale = 1.0;
  for (const auto& g : G) gscale = std::max(gscale, g.norm());
  const double floor = 1e-10 * gscale;
  Mat Q = Mat::Zero(D2, D2);
  Mat seed(D2, 1 + static_cast<Eigen::Index>(G.size()));
  seed.col(0) = vec(Mat::Identity(D, D));
  for (size_t i = 0; i < G.size(); ++i) seed.col(1 + static_cast<Eigen::Index>(i)) = vec(G[i]);
  int r = detail::extend_orthonormal(Q, 0, seed, tol);
  int begin = 0;
  for (int iter = 0; iter <= D2 && r < D2; ++iter) {
    int end = r;
    if (begin == end) break;
    Mat cand(D2, static_cast<Eigen::Index>(G.size()) * (end - begin));
    Eigen::Index c = 0;
    for (int b = begin; b < end; ++b) {
      Mat B = unvec(Q.col(b), D);
      for (const auto& g : G) cand.col(c++) = vec(g * B);
    }
    begin = end;
    r = detail::extend_orthonormal(Q, r, cand, tol, floor);
    if (iter == D2) throw NumericalError("algebra_span: closure did not stabilize");
  }
  return Q.leftCols(r);
}

// Commutant of a set of operators by brute force: null space of
// sum_g ad_g^dag ad_g on the D^2-dimensional operator space.
inline Mat commutant_span(const std::vector<Mat>& gens, double rel = 1e-10) {
  const int D = static_cast<int>(gens.at(0).rows());
  Mat I = Mat::Identity(D, D);
  Mat G = Mat::Zero(D * D, D * D);
  for (const auto& g : detail::with_adjoints(gens)) {
    Mat ad = kron(I, g) - kron(g.transpose(), I);
    G += ad.adjoint() * ad;
  }
  return psd_null_space(G, rel);
}

// Block decomposition of a *-algebra given by an HS-orthonormal spanning set.
// `gens` must generate the algebra (the span itself is fine); the center is
// computed as the part of the span commuting with them.
inline SubalgebraStructure structure_from_span(const Mat& span, std::vector<Mat> gens = {},
                                               std::uint64_t seed = kDefaultAlgebraSeed) {
  const int D = isqrt_exact(span.rows());
  const int r = static_cast<int>(span.cols());
  if (r == 0) throw DimensionError("structure_from_span: empty span");
  std::vector<Mat> basis = detail::columns_as_ops(span, D);
  if (gens.empty()) gens = basis;
  gens = detail::with_adjoints(gens);

  // center: coefficients c with [g, sum_k c_k B_k] = 0 for every generator
  Mat gram = Mat::Zero(r, r);
  double scale = 0.0;
  for (const auto& g : gens) scale += g.squaredNorm();
  for (const auto& g : gens) {
    Mat M(D * D, r);
    for (int k = 0; k < r; ++k) M.col(k) = vec(commutator(g, basis[k]));
    gram += M.adjoint() * M;
  }
  // the floor catches an all-roundoff gram (commutative span)
  Mat center = psd_null_space(gram, 1e-10, 1e-14 * scale);
  if (center.cols() == 0) throw NumericalError("structure_from_span: span is not a unital algebra");

  Rng rng(seed);
  std::vector<Mat> central;
  for (Eigen::Index j = 0; j < center.cols(); ++j) {
    Mat Z = Mat::Zero(D, D);
    for (int k = 0; k < r; ++k) Z += center(k, j) * basis[k];
    central.push_back(Z);
  }

  for (int attempt = 0; attempt < 8; ++attempt) {
    Mat z = Mat::Zero(D, D);
    for (const auto& Z : central) z += cplx(randn(rng), randn(rng)) * Z;
    auto clusters = spectral_clusters(herm(z), 1e-7);
    if (static_cast<Eigen::Index>(clusters.size()) != center.cols()) continue;

    std::vector<Block> blocks;
    std::vector<Mat> cols;
    std::vector<double> keys;
    bool ok = true;
    for (const auto& cl : clusters) {
      const Mat& V = cl.basis;
      const int rank = static_cast<int>(V.cols());
      std::vector<Mat> comp;
      Mat stacked(rank * rank, r);
      for (int k = 0; k < r; ++k) {
        comp.push_back(V.adjoint() * basis[k] * V);
        stacked.col(k) = vec(comp.back());
      }
      const int a = static_cast<int>(column_span(stacked, 1e-8).cols());
      const int dH = static_cast<int>(std::lround(std::sqrt(static_cast<double>(a))));
      if (dH * dH != a || rank % dH != 0) {
        ok = false;
        break;
      }
      const int dK = rank / dH;

      // align: eigenspaces of a generic Hermitian element give the 1_K copies;
      // a generic element transports the first one onto the others
      Mat W(rank, rank);
      bool aligned = false;
      for (int t = 0; t < 8 && !aligned; ++t) {
        Mat h = Mat::Zero(rank, rank), x = Mat::Zero(rank, rank);
        for (int k = 0; k < r; ++k) {
          h += cplx(randn(rng), randn(rng)) * comp[k];
          x += cplx(randn(rng), randn(rng)) * comp[k];
        }
        auto sub = spectral_clusters(herm(h), 1e-7);
        if (static_cast<int>(sub.size()) != dH) continue;
        bool sizes = true;
        for (const auto& s : sub) sizes = sizes && s.basis.cols() == dK;
        if (!sizes) continue;
        aligned = true;
        const Mat& Q0 = sub[0].basis;
        for (int hh = 0; hh < dH && aligned; ++hh) {
          Mat Pa = sub[hh].basis * sub[hh].basis.adjoint();
          for (int k = 0; k < dK; ++k) {
            Vec w = hh == 0 ? Vec(Q0.col(k)) : Vec(Pa * x * Q0.col(k));
            if (w.norm() < 1e-6) {
              aligned = false;
              break;
            }
            W.col(hh * dK + k) = w / w.norm();
          }
        }
      }
      if (!aligned) {
        ok = false;
        break;
      }
      blocks.push_back({dH, dK});
      cols.push_back(V * W);
      keys.push_back(cl.value);
    }
    if (!ok) continue;
    detail::sort_blocks(blocks, cols, keys);
    Mat U(D, D);
    int o = 0;
    for (const auto& c : cols) {
      U.middleCols(o, c.cols()) = c;
      o += static_cast<int>(c.cols());
    }
    SubalgebraStructure S = structure_from_blocks(D, blocks, U);
    // every span element must be block diagonal of the form M (x) 1_K
    double worst = 0.0;
    for (const auto& B : basis) worst = std::max(worst, (B - S.project(B)).norm());
    if (worst > 1e-7 || S.algebra_dim() != r) continue;
    return S;
  }
  throw NumericalError("structure_from_span: block decomposition failed");
}

inline SubalgebraStructure algebra_closure(const std::vector<Mat>& generators) {
  return structure_from_span(algebra_span(generators), generators);
}

// Swaps the roles of H_i and K_i.
inline SubalgebraStructure commutant(const SubalgebraStructure& S) {
  const int D = S.ambient_dim;
  std::vector<Block> blocks;
  std::vector<Mat> cols;
  std::vector<double> keys;
  auto off = S.offsets();
  for (size_t i = 0; i < S.blocks.size(); ++i) {
    const int dH = S.blocks[i].dH, dK = S.blocks[i].dK;
    Mat V = S.basis_change.middleCols(off[i], dH * dK);
    Mat W(D, dH * dK);
    for (int h = 0; h < dH; ++h)
      for (int k = 0; k < dK; ++k) W.col(k * dH + h) = V.col(h * dK + k);
    blocks.push_back({dK, dH});
    cols.push_back(W);
    keys.push_back(static_cast<double>(i));
  }
  detail::sort_blocks(blocks, cols, keys);
  Mat U(D, D);
  int o = 0;
  for (const auto& c : cols) {
    U.middleCols(o, c.cols()) = c;
    o += static_cast<int>(c.cols());
  }
  return structure_from_blocks(D, blocks, U);
}

// Diagonal algebra of an orthonormal basis (columns of U).
inline SubalgebraStructure diagonal_structure(const Mat& U) {
  const int D = static_cast<int>(U.rows());
  return structure_from_blocks(D, std::vector<Block>(D, Block{1, 1}), U);
}

inline SubalgebraStructure full_structure(int D) { return structure_from_blocks(D, {Block{D, 1}}, Mat::Identity(D, D)); }

inline SubalgebraStructure trivial_structure(int D) { return structure_from_blocks(D, {Block{1, D}}, Mat::Identity(D, D)); }

// ---------------------------------------------------------------------------
// conditional expectations

struct ConditionalExpectation {
  SubalgebraStructure structure;
  std::vector<Mat> tau;  // one density per K_i

  int dim() const { return structure.ambient_dim; }

  // E_N(X) = (+) tr_K(X_i (1 (x) tau_i)) (x) 1_K
  Mat heisenberg(const Mat& X) const {
    const Mat& U = structure.basis_change;
    Mat Y = U.adjoint() * X * U;
    Mat out = Mat::Zero(Y.rows(), Y.cols());
    auto off = structure.offsets();
    for (size_t i = 0; i < structure.blocks.size(); ++i) {
      const int dH = structure.blocks[i].dH, dK = structure.blocks[i].dK, o = off[i];
      Mat Xi = Y.block(o, o, dH * dK, dH * dK) * kron(Mat::Identity(dH, dH), tau[i]);
      Mat red = partial_trace(Xi, {dH, dK}, {0});
      out.block(o, o, dH * dK, dH * dK) = kron(red, Mat::Identity(dK, dK));
    }
    return U * out * U.adjoint();
  }

  // E_{N*}(rho) = (+) tr_K(rho_i) (x) tau_i
  Mat schrodinger(const Mat& rho) const {
    const Mat& U = structure.basis_change;
    Mat Y = U.adjoint() * rho * U;
    Mat out = Mat::Zero(Y.rows(), Y.cols());
    auto off = structure.offsets();
    for (size_t i = 0; i < structure.blocks.size(); ++i) {
      const int dH = structure.blocks[i].dH, dK = structure.blocks[i].dK, o = off[i];
      Mat red = partial_trace(Y.block(o, o, dH * dK, dH * dK), {dH, dK}, {0});
      out.block(o, o, dH * dK, dH * dK) = kron(red, tau[i]);
    }
    return U * out * U.adjoint();
  }

  Superoperator superop_heisenberg() const {
    return superop_of_map(dim(), [this](const Mat& X) { return heisenberg(X); });
  }
  Superoperator superop_schrodinger() const {
    return superop_of_map(dim(), [this](const Mat& X) { return schrodinger(X); });
  }

  // tau = (+) 1_{H_i} (x) tau_i in ambient coordinates
  Mat tau_operator() const {
    const Mat& U = structure.basis_change;
    Mat out = Mat::Zero(dim(), dim());
    auto off = structure.offsets();
    for (size_t i = 0; i < structure.blocks.size(); ++i) {
      const int dH = structure.blocks[i].dH, dK = structure.blocks[i].dK;
      out.block(off[i], off[i], dH * dK, dH * dK) = kron(Mat::Identity(dH, dH), tau[i]);
    }
    return U * out * U.adjoint();
  }
};

inline ConditionalExpectation trace_conditional_expectation(const SubalgebraStructure& S) {
  ConditionalExpectation E{S, {}};
  for (const auto& b : S.blocks) E.tau.push_back(Mat::Identity(b.dK, b.dK) / static_cast<double>(b.dK));
  return E;
}

// sigma-preserving CE. sigma must have the product form (+) q_i sigma_i (x) tau_i
// in the adapted basis; the tau_i are read off from it.
inline ConditionalExpectation conditional_expectation(const SubalgebraStructure& S, const Mat& sigma) {
  check_state(sigma, "conditional_expectation");
  const Mat& U = S.basis_change;
  Mat Y = U.adjoint() * sigma * U;
  const double tol = 1e-9 * std::max(1.0, sigma.norm());
  ConditionalExpectation E{S, {}};
  auto off = S.offsets();
  Mat blockdiag = Mat::Zero(Y.rows(), Y.cols());
  for (size_t i = 0; i < S.blocks.size(); ++i) {
    const int dH = S.blocks[i].dH, dK = S.blocks[i].dK, n = dH * dK, o = off[i];
    Mat si = Y.block(o, o, n, n);
    blockdiag.block(o, o, n, n) = si;
    double q = si.trace().real();
    if (q <= 1e-12) throw DomainError("conditional_expectation: sigma vanishes on a block (non-faithful)");
    Mat tau = partial_trace(si, {dH, dK}, {1}) / q;
    Mat sH = partial_trace(si, {dH, dK}, {0});
    if ((si - kron(sH, tau)).norm() > tol) throw DomainError("conditional_expectation: sigma is not invariant");
    EigH te = eig_hermitian(herm(tau));
    if (te.values(te.values.size() - 1) < 1e-10 * te.values(0)) throw DomainError("conditional_expectation: tau is rank deficient");
    E.tau.push_back(herm(tau));
  }
  if ((Y - blockdiag).norm() > tol) throw DomainError("conditional_expectation: sigma is not invariant");
  return E;
}

// ---------------------------------------------------------------------------
// indices

struct IndexReport {
  double C = 1.0;
  double C_cb = 1.0;
  double C_tau = 1.0;
  double C_tau_cb = 1.0;
  double min_tau_eigenvalue = 1.0;
  double mu_min = 1.0;  // min_i dK_i * lambda_min(tau_i); equals 1 for the trace CE
};

inline IndexReport index(const ConditionalExpectation& E) {
  IndexReport r;
  r.C = 0.0;
  r.C_cb = 0.0;
  r.mu_min = kInf;
  r.min_tau_eigenvalue = kInf;
  for (size_t i = 0; i < E.structure.blocks.size(); ++i) {
    const auto& b = E.structure.blocks[i];
    r.C += static_cast<double>(std::min(b.dH, b.dK)) * b.dK;
    r.C_cb += static_cast<double>(b.dK) * b.dK;
    double lmin = min_eig(E.tau[i]);
    double lmax = max_eig(E.tau[i]);
    if (lmin < 1e-10 * lmax) throw DomainError("index: non-faithful conditional expectation");
    r.min_tau_eigenvalue = std::min(r.min_tau_eigenvalue, lmin);
    r.mu_min = std::min(r.mu_min, b.dK * lmin);
  }
  r.C_tau = r.C / r.mu_min;
  r.C_tau_cb = r.C_cb / r.mu_min;
  return r;
}

// Largest eigenvalue of sigma^{-1/2} rho sigma^{-1/2} on supp(sigma), or +inf
// when supp(rho) is not contained in supp(sigma).
inline double max_relative_eigenvalue(const Mat& rho, const Mat& sigma, double cutoff = 1e-12) {
  EigH e = eig_hermitian(herm(sigma));
  const double top = std::max(e.values(0), 1e-300);
  Eigen::Index k = 0;
  while (k < e.values.size() && e.values(k) > cutoff * top) ++k;
  Mat V = e.vectors.leftCols(k);
  Mat Vperp = e.vectors.rightCols(e.values.size() - k);
  if (Vperp.cols() > 0) {
    double leak = (Vperp.adjoint() * rho * Vperp).trace().real();
    if (leak > 1e-10 * std::max(1.0, rho.trace().real())) return kInf;
  }
  RVec s = e.values.head(k).array().rsqrt();
  Mat M = s.asDiagonal() * (V.adjoint() * rho * V) * s.asDiagonal();
  return max_eig(herm(M));
}

struct DmaxCheck {
  double max_ratio = 0.0;  // largest c with rho <= c E_{N*}(rho) observed
  double min_eig = kInf;   // min over samples of lambda_min(C E_{N*}(rho) - rho)
  int samples = 0;
};

// Pure state reaching C_tau-type extremality: a maximally entangled vector of
// Schmidt rank min(dH, dK) in every block, placed on the smallest tau eigenvectors.
inline Mat extremal_state(const ConditionalExpectation& E) {
  const auto& S = E.structure;
  auto off = S.offsets();
  Vec psi = Vec::Zero(S.ambient_dim);
  const double w = 1.0 / static_cast<double>(S.blocks.size());
  for (size_t i = 0; i < S.blocks.size(); ++i) {
    const int dH = S.blocks[i].dH, dK = S.blocks[i].dK, r = std::min(dH, dK);
    EigH te = eig_hermitian(herm(E.tau[i]));
    Vec block = Vec::Zero(dH * dK);
    for (int j = 0; j < r; ++j) {
      Vec h = Vec::Zero(dH);
      h(j) = 1.0;
      Vec k = te.vectors.col(dK - 1 - j);
      block += kron(h, k) / std::sqrt(static_cast<double>(r));
    }
    psi.segment(off[i], dH * dK) = std::sqrt(w) * block;
  }
  Vec amb = S.basis_change * psi;
  return projector(amb);
}

inline DmaxCheck dmax_violation_check(const ConditionalExpectation& E, double C, int samples, Rng& rng) {
  const int D = E.dim();
  DmaxCheck out;
  for (int s = 0; s < samples; ++s) {
    int rank = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(D));
    Mat rho = random_state(D, rng, rank);
    Mat er = E.schrodinger(rho);
    double me = min_eig(herm(C * er - rho));
    out.min_eig = std::min(out.min_eig, me);
    out.max_ratio = std::max(out.max_ratio, max_relative_eigenvalue(rho, er));
    ++out.samples;
    if (me < -1e-8) throw NumericalError("dmax_violation_check: rho <= C E(rho) violated");
  }
  return out;
}

struct CommutingSquare {
  bool commuting = false;
  double dev12 = 0.0;
  double dev21 = 0.0;
};

inline CommutingSquare commuting_square_check(const Superoperator& E1, const Superoperator& E2, const Superoperator& EN) {
  if (E1.dim != E2.dim || E1.dim != EN.dim) throw DimensionError("commuting_square_check: dimension mismatch");
  CommutingSquare c;
  c.dev12 = op_norm(E1.matrix * E2.matrix - EN.matrix);
  c.dev21 = op_norm(E2.matrix * E1.matrix - EN.matrix);
  c.commuting = c.dev12 <= 1e-9 && c.dev21 <= 1e-9;
  return c;
}

inline CommutingSquare commuting_square_check(const ConditionalExpectation& E1, const ConditionalExpectation& E2,
                                              const ConditionalExpectation& EN) {
  return commuting_square_check(E1.superop_heisenberg(), E2.superop_heisenberg(), EN.superop_heisenberg());
}

// Pinching onto an orthonormal basis (columns of U).
inline ConditionalExpectation pinching(const Mat& U) { return trace_conditional_expectation(diagonal_structure(U)); }

}  // namespace qfit
