#include <gtest/gtest.h>

#include <qfit/bounds.hpp>
#include <qfit/models.hpp>

#include <set>

#include "oracles.hpp"

namespace {

using qfit::Mat;

TEST(Su2, IrrepCommutationRelations) {
  for (int m : {2, 3, 5}) {
    auto r = qfit::su2_irrep(m);
    EXPECT_LT((qfit::commutator(r.X, r.Y) - 2.0 * r.Z).norm(), 1e-12);
    EXPECT_LT((qfit::commutator(r.Y, r.Z) - 2.0 * r.X).norm(), 1e-12);
    EXPECT_LT((qfit::commutator(r.Z, r.X) - 2.0 * r.Y).norm(), 1e-12);
    EXPECT_LT((r.X + r.X.adjoint()).norm(), 1e-14);
  }
  EXPECT_THROW(qfit::su2_irrep(1), qfit::DomainError);
}

TEST(Su2, SubLaplacianQubitIsOrnsteinUhlenbeck) {
  // -[X/2,[X/2,.]] - [Y/2,[Y/2,.]] on M_2: eigenvalues 0, 1, 1, 2
  auto L = qfit::su2_sublaplacian(2);
  auto ev = oracle::eig(-L.L).values;
  std::vector<double> v(ev.data(), ev.data() + ev.size());
  std::sort(v.begin(), v.end());
  EXPECT_NEAR(v[0], 0.0, 1e-12);
  EXPECT_NEAR(v[1], 1.0, 1e-12);
  EXPECT_NEAR(v[2], 1.0, 1e-12);
  EXPECT_NEAR(v[3], 2.0, 1e-12);
}

TEST(Su2, Gaps) {
  for (int m : {3, 4}) {
    Mat s = Mat::Identity(m, m) / static_cast<double>(m);
    EXPECT_NEAR(qfit::spectral_gap(qfit::su2_sublaplacian(m), s).gap, 1.0, 1e-9);
    // the full Laplacian is the Casimir, l(l+1) on spin-l operators
    EXPECT_NEAR(qfit::spectral_gap(qfit::su2_laplacian(m), s).gap, 2.0, 1e-9);
  }
}

TEST(Su2, IrreducibleSoFixedPointsAreScalars) {
  auto F = qfit::fixed_point_algebra(qfit::su2_sublaplacian(4));
  EXPECT_EQ(F.algebra_dim(), 1);
}

TEST(Dephasing, GapIsMinSquaredSpacing) {
  auto L = qfit::dephasing_lindbladian({0.0, 0.5, 2.0});
  EXPECT_NEAR(qfit::spectral_gap(L, Mat::Identity(3, 3) / 3.0).gap, 0.25, 1e-12);
}

TEST(Permutations, TraceCountsCycles) {
  for (const auto& p : qfit::all_permutations(3)) {
    Mat P = qfit::permutation_operator(2, p);
    EXPECT_NEAR(P.trace().real(), std::pow(2.0, qfit::cycle_count(p)), 1e-12);
    EXPECT_LT((P.adjoint() * P - Mat::Identity(8, 8)).norm(), 1e-12);
  }
  EXPECT_EQ(qfit::all_permutations(4).size(), 24u);
  // the transposition of two factors is the swap
  EXPECT_LT((qfit::permutation_operator(3, {1, 0}) - qfit::swap_operator(3)).norm(), 1e-14);
}

TEST(Permutations, RandomTranspositionGap) {
  // complete graph: gap n for the unit-weight chain
  for (int n : {3, 4, 5}) EXPECT_NEAR(qfit::classical_gap(qfit::symmetric_group_chain(n, qfit::Graph::complete(n))), n, 1e-9);
  // path on 3: the Cayley graph is a 6-cycle
  EXPECT_NEAR(qfit::classical_gap(qfit::symmetric_group_chain(3, qfit::Graph::path(3))), 1.0, 1e-9);
  EXPECT_NEAR(qfit::classical_gap(qfit::symmetric_group_chain(3, qfit::Graph::path(3), false)), 0.5, 1e-9);
}

TEST(Nnrt, GapMatchesClassicalChain) {
  // the quantum gap on (C^2)^3 equals the half-weight classical gap
  auto G = qfit::Graph::path(3);
  auto L = qfit::nnrt_lindbladian(G, 2);
  double q = qfit::spectral_gap(L, Mat::Identity(8, 8) / 8.0).gap;
  EXPECT_NEAR(q, qfit::classical_gap(qfit::symmetric_group_chain(3, G, false)), 1e-9);
  auto F = qfit::fixed_point_algebra(L);
  // commutant of the S_3 action: blocks M_4 (spin 3/2) and M_2 (x) 1_2 (spin 1/2)
  EXPECT_EQ(F.algebra_dim(), 16 + 4);
}

TEST(HaarTwirl, FirstMomentIsTrace) {
  oracle::Rng rng(301);
  Mat X = oracle::gaussian(3, 3, rng);
  auto h = qfit::haar_twirl(3, 1);
  EXPECT_LT((h.apply(X) - X.trace() / 3.0 * Mat::Identity(3, 3)).norm(), 1e-12);
}

TEST(HaarTwirl, SecondMomentMatchesWeingarten) {
  oracle::Rng rng(302);
  const int D = 3;
  Mat X = oracle::gaussian(D * D, D * D, rng);
  Mat F = qfit::swap_operator(D);
  const double dd = D * D - 1.0;
  oracle::cplx tx = X.trace(), tf = (F * X).trace();
  Mat ref = (tx - tf / double(D)) / dd * oracle::eye(D * D) + (tf - tx / double(D)) / dd * F;
  auto h = qfit::haar_twirl(D, 2);
  EXPECT_LT((h.apply(X) - ref).norm(), 1e-10);
  EXPECT_LT((h.S.matrix * h.S.matrix - h.S.matrix).norm(), 1e-10);
  qfit::Rng r2(303);
  Mat mc = qfit::monte_carlo_twirl(X, D, 2, 4000, r2);
  // sampling error scales like ||X|| / sqrt(N)
  EXPECT_LT((mc - ref).norm(), 3.0 * X.norm() / std::sqrt(4000.0));
}

TEST(HaarTwirl, BudgetEnforced) { EXPECT_THROW(qfit::haar_twirl(3, 4), qfit::DimensionError); }

TEST(Designs, FiniteChannelIsAverage) {
  oracle::Rng rng(304);
  std::vector<Mat> us{oracle::haar(2, rng), oracle::haar(2, rng)};
  auto mu = qfit::DesignMeasure::symmetrized(us);
  EXPECT_TRUE(mu.symmetric());
  Mat X = oracle::gaussian(4, 4, rng);
  Mat ref = Mat::Zero(4, 4);
  for (const auto& U : mu.unitaries) {
    Mat U2 = oracle::kron(U, U);
    ref += U2 * X * U2.adjoint() / static_cast<double>(mu.unitaries.size());
  }
  EXPECT_LT((qfit::design_channel(mu, 2).apply(X) - ref).norm(), 1e-12);
  EXPECT_THROW(qfit::DesignMeasure::finite({2.0 * oracle::eye(2)}, {1.0}), qfit::DomainError);
  EXPECT_THROW(qfit::DesignMeasure::finite(us, {0.5, 0.6}), qfit::DomainError);
}

TEST(Designs, HaarLindbladianKernel) {
  // first moment on a connected graph: only scalars survive
  auto L = qfit::design_lindbladian(qfit::Graph::path(3), 2, 1, qfit::DesignMeasure::haar(4));
  EXPECT_EQ(qfit::kernel_dimension(L), 1);
  // second moment on one edge: span{1, F} on the pair of copies of C^4
  auto L2 = qfit::design_lindbladian(qfit::Graph::path(2), 2, 2, qfit::DesignMeasure::haar(4));
  EXPECT_EQ(qfit::kernel_dimension(L2), 2);
  EXPECT_THROW(qfit::design_lindbladian(qfit::Graph::path(2), 3, 1, qfit::DesignMeasure::haar(4)), qfit::DimensionError);
}

TEST(Kac, HaarCollisionsMixToScalars) {
  qfit::CollisionSpec cs{qfit::DesignMeasure::haar(4), Mat()};
  auto L = qfit::kac_lindbladian(3, 2, cs);
  EXPECT_EQ(qfit::kernel_dimension(L), 1);
  // Q averages three pair-replacements; the smallest nonzero eigenvalue of n (id - Q)
  // sits on single-site traceless operators: each is killed by 2 of the 3 pairs
  EXPECT_NEAR(qfit::spectral_gap(L, Mat::Identity(8, 8) / 8.0).gap, 3.0 * 2.0 / 3.0, 1e-9);
}

TEST(Kac, EnergyConservingCollisions) {
  Mat h = Mat::Zero(2, 2);
  h(1, 1) = 1.0;
  qfit::Rng rng(305);
  Mat U = qfit::energy_preserving_unitary(h, rng);
  Mat H2 = oracle::kron(h, oracle::eye(2)) + oracle::kron(oracle::eye(2), h);
  EXPECT_LT((U * H2 - H2 * U).norm(), 1e-10);
  EXPECT_LT((U.adjoint() * U - oracle::eye(4)).norm(), 1e-10);
  auto mu = qfit::collision_closure({U});
  qfit::CollisionSpec cs{mu, h};
  EXPECT_NO_THROW(cs.validate());
  auto L = qfit::kac_lindbladian(3, 2, cs);
  // total excitation number is conserved, so its spectral projections are fixed
  EXPECT_GE(qfit::kernel_dimension(L), 4);
  // a collision that does not conserve energy is rejected
  qfit::CollisionSpec bad{qfit::collision_closure({oracle::haar(4, rng)}), h};
  EXPECT_THROW(bad.validate(), qfit::DomainError);
}

TEST(Graphs, DecompositionProperties) {
  for (int n = 4; n <= 24; ++n) {
    auto parts = qfit::graph_decompose(n);
    std::set<std::pair<int, int>> seen;
    for (const auto& g : parts) {
      EXPECT_TRUE(g.connected()) << n;
      EXPECT_LE(g.max_degree(), 3) << n;
      EXPECT_EQ(g.n_vertices, n);
      for (auto e : g.edges) EXPECT_TRUE(seen.insert(e).second) << "edge reused for n=" << n;
    }
    EXPECT_GE(static_cast<int>(parts.size()), n / 4);
  }
  EXPECT_THROW(qfit::graph_decompose(3), qfit::DomainError);
}

TEST(Graphs, Constructors) {
  EXPECT_EQ(qfit::Graph::cycle(5).edges.size(), 5u);
  EXPECT_EQ(qfit::Graph::complete(5).edges.size(), 10u);
  EXPECT_FALSE(qfit::Graph(4, {{0, 1}, {2, 3}}).connected());
  EXPECT_THROW(qfit::Graph(2, {{0, 0}}), std::invalid_argument);
  EXPECT_EQ(qfit::Graph(3, {{1, 0}, {0, 1}}).edges.size(), 1u);
}

}  // namespace
