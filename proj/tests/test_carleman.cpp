#include "swe_carleman/carleman.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace swe;

namespace {

Eigen::VectorXd flat(const DistributionField& f) {
  return Eigen::Map<const Eigen::VectorXd>(f.data(), f.size());
}

// Level (1, 2 or 3) that a Carleman index belongs to.
int level_of(Eigen::Index i, int n) {
  for (int level = 1; level <= kTruncationOrder; ++level)
    if (i < level_offset(n, level + 1)) return level;
  return -1;
}

SparseMatrix dense_to_sparse(const Eigen::MatrixXd& m) { return m.sparseView(); }

Eigen::VectorXd kron_vec(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

PhysParams params(int n) {
  PhysParams p;
  p.grid_points = n;
  p.tau = 0.8;
  p.g = 1.1;
  p.length = 1.3;
  return p;
}

}  // namespace

TEST_CASE("F-matrix shapes") {
  const auto F = build_F_matrices(PhysParams{});
  CHECK(F.F1.rows() == 3);
  CHECK(F.F1.cols() == 3);
  CHECK(F.F2.cols() == 9);
  CHECK(F.F3.cols() == 27);
  CHECK_THROWS_AS(F.degree(4), std::out_of_range);
  PhysParams bad;
  bad.tau = 0.0;
  CHECK_THROWS_AS(build_F_matrices(bad), std::invalid_argument);
}

TEST_CASE("F-matrix polynomial vanishes at rest equilibrium") {
  const auto F = build_F_matrices(PhysParams{});
  const Eigen::Vector3d f(2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0);
  CHECK(F.apply(f).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("F-matrix polynomial equals the truncated BGK collision") {
  for (int k = 0; k < 300; ++k) {
    PhysParams p;
    p.tau = swe::test::uniform(0.3, 3.0);
    p.g = swe::test::uniform(0.1, 10.0);
    const auto F = build_F_matrices(p);
    const Eigen::Vector3d f(swe::test::uniform(0, 1), swe::test::uniform(0, 1), swe::test::uniform(0, 1));
    const Eigen::Vector3d want = (swe::test::truncated_equilibrium(f, p.g) - f) / p.tau;
    const Eigen::Vector3d got = F.F1 * f + F.F2 * kron_power(f, 2) + F.F3 * kron_power(f, 3);
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((F.apply(f) - got).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(std::abs(got.sum()) <= 1e-13);
    CHECK(std::abs(got(1) - got(2)) <= 1e-13);
  }
}

TEST_CASE("F2 and F3 are symmetric under Kronecker slot permutations") {
  const auto F = build_F_matrices(PhysParams{});
  for (int r = 0; r < 3; ++r)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        CHECK(F.F2(r, 3 * a + b) == F.F2(r, 3 * b + a));
        for (int c = 0; c < 3; ++c) {
          const double v = F.F3(r, 9 * a + 3 * b + c);
          CHECK(v == doctest::Approx(F.F3(r, 9 * b + 3 * a + c)).epsilon(1e-15));
          CHECK(v == doctest::Approx(F.F3(r, 9 * c + 3 * b + a)).epsilon(1e-15));
        }
      }
}

TEST_CASE("single-point transfer matrices") {
  const auto F = build_F_matrices(PhysParams{});
  CHECK(Eigen::MatrixXd(transfer_matrix(F, 1, 1)).isApprox(F.F1));
  CHECK(Eigen::MatrixXd(transfer_matrix(F, 1, 3)).isApprox(F.F3));
  const SparseMatrix F1 = dense_to_sparse(F.F1), I3 = sparse_identity(3);
  const Eigen::MatrixXd want = Eigen::MatrixXd(kron(F1, I3)) + Eigen::MatrixXd(kron(I3, F1));
  const Eigen::MatrixXd A22 = transfer_matrix(F, 2, 2);
  CHECK(A22.rows() == 9);
  CHECK(A22.cols() == 9);
  CHECK((A22 - want).cwiseAbs().maxCoeff() <= 1e-15);
  const Eigen::MatrixXd A23 = transfer_matrix(F, 2, 3);
  CHECK(A23.rows() == 9);
  CHECK(A23.cols() == 27);
  CHECK_THROWS_AS(transfer_matrix(F, 3, 2), std::out_of_range);
  CHECK_THROWS_AS(transfer_matrix(F, 1, 4), std::out_of_range);
  CHECK_THROWS_AS(transfer_matrix(F, 0, 1), std::out_of_range);
}

TEST_CASE("lift to grid") {
  const auto F = build_F_matrices(PhysParams{});
  SUBCASE("one point is the identity lift") {
    for (int j = 1; j <= 3; ++j)
      CHECK(Eigen::MatrixXd(lift_to_grid(F, j, 0, 1)).isApprox(F.degree(j)));
  }
  SUBCASE("N=2, first point, degree 1 reads the first three entries") {
    const Eigen::MatrixXd L = lift_to_grid(F, 1, 0, 2);
    CHECK(L.rows() == 3);
    CHECK(L.cols() == 6);
    Eigen::VectorXd phi(6);
    phi << 0.3, 0.2, 0.1, 9, 9, 9;
    CHECK((L * phi - F.F1 * phi.head(3)).cwiseAbs().maxCoeff() <= 1e-15);
    const Eigen::MatrixXd L2 = lift_to_grid(F, 1, 1, 2);
    CHECK((L2 * phi - F.F1 * phi.tail(3)).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("column count is (3N)^j") {
    for (int n = 1; n <= 3; ++n)
      for (int j = 1; j <= 3; ++j)
        CHECK(lift_to_grid(F, j, 0, n).cols() == ipow(3 * n, j));
  }
  SUBCASE("stacked lift applies the local polynomial at every point") {
    const int n = 3;
    const auto f = swe::test::random_field(n);
    const Eigen::VectorXd phi = flat(f);
    Eigen::VectorXd got = Eigen::VectorXd::Zero(3 * n);
    for (int j = 1; j <= 3; ++j) got += lift_to_grid(F, j, n) * kron_power(phi, j);
    for (int a = 0; a < n; ++a)
      CHECK((got.segment(3 * a, 3) - F.apply(f.row(a).transpose())).cwiseAbs().maxCoeff() <= 1e-14);
  }
  CHECK_THROWS_AS(lift_to_grid(F, 1, 3, 3), std::out_of_range);
  CHECK_THROWS_AS(lift_to_grid(F, 1, -1, 3), std::out_of_range);
}

TEST_CASE("Carleman dimensions") {
  CHECK(carleman_dimension(1) == 39);
  CHECK(carleman_dimension(3) == 819);
  for (int n : {1, 3, 4, 5, 6}) {
    CHECK(carleman_dimension(n) == 3 * n + 9 * n * n + 27 * n * n * n);
    const auto F = build_F_matrices(PhysParams{});
    CHECK(build_collision_matrix(F, n).rows() == carleman_dimension(n));
  }
  CHECK(build_carleman(params(4)).dim() == carleman_dimension(4));
}

TEST_CASE("streaming operator") {
  auto p = params(5);
  const SparseMatrix S = streaming_operator(p);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(15);
  CHECK((S * ones).cwiseAbs().maxCoeff() <= 1e-15);
  const double k = gradient_coefficient(p);
  // Point 0, velocity +1 reads points 1 and N-1 (periodic).
  CHECK(S.coeff(1, 3 * 1 + 1) == doctest::Approx(-k));
  CHECK(S.coeff(1, 3 * 4 + 1) == doctest::Approx(k));
  CHECK(S.coeff(2, 3 * 1 + 2) == doctest::Approx(k));
  CHECK(S.coeff(0, 3) == 0.0);

  const std::vector<double> h(5, 0.7), u(5, 0.1);
  CHECK((build_streaming_matrix(p) * embed_state(initial_field(h, u))).cwiseAbs().maxCoeff() <= 1e-14);

  p.grid_points = 2;
  CHECK_THROWS_WITH_AS(build_streaming_matrix(p),
                       "streaming matrix for one grid point has no meaning: N >= 3 required",
                       std::invalid_argument);
}

TEST_CASE("embed and extract") {
  DistributionField one(1, 3);
  one << 1, 0, 0;
  const Eigen::VectorXd V = embed_state(one);
  CHECK(V.size() == 39);
  CHECK(V.sum() == 3.0);
  CHECK(V(0) == 1.0);
  CHECK(V(3) == 1.0);
  CHECK(V(12) == 1.0);

  const auto f = swe::test::random_field(3);
  const Eigen::VectorXd W = embed_state(f);
  CHECK(W.size() == 819);
  const Eigen::VectorXd phi = W.head(9);
  const Eigen::MatrixXd outer = phi * phi.transpose();
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b) CHECK(W(9 + 9 * a + b) == doctest::Approx(outer(a, b)));

  CHECK((extract_state(W, 3) - f).cwiseAbs().maxCoeff() == 0.0);
  CHECK(extract_state(Eigen::VectorXd::Zero(819), 3).cwiseAbs().maxCoeff() == 0.0);
  Eigen::VectorXd scrambled = W;
  scrambled.tail(819 - 9).setRandom();
  CHECK((extract_state(scrambled, 3) - f).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(extract_state(Eigen::VectorXd::Zero(100), 3), std::invalid_argument);
}

TEST_CASE("first Carleman level reproduces the truncated DVBE rate") {
  for (int n : {3, 4, 5}) {
    for (auto scale : {StreamingScale::physical, StreamingScale::lattice}) {
      auto p = params(n);
      p.streaming = scale;
      const auto C = build_carleman(p);
      for (int k = 0; k < 20; ++k) {
        const auto f = swe::test::random_field(n);
        const Eigen::VectorXd got = (C.total * embed_state(f)).head(3 * n);
        const Eigen::VectorXd want = flat(rate(f, p, Nonlinearity::truncated));
        CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, want.cwiseAbs().maxCoeff()));
      }
    }
  }
}

TEST_CASE("higher Carleman levels are the product rule with the top degree dropped") {
  const int n = 3, D = 3 * n;
  const auto p = params(n);
  const auto C = build_carleman(p);
  const auto F = build_F_matrices(p);
  const SparseMatrix S = streaming_operator(p);
  const SparseMatrix L1 = lift_to_grid(F, 1, n), L2 = lift_to_grid(F, 2, n);
  for (int k = 0; k < 5; ++k) {
    const auto f = swe::test::random_field(n);
    const Eigen::VectorXd phi = flat(f);
    const Eigen::VectorXd CV = C.total * embed_state(f);
    // Level 2 keeps the terms of degree <= 3: (S + F1) phi and F2 phi^[2] in each slot.
    const Eigen::VectorXd r12 = S * phi + L1 * phi + L2 * kron_power(phi, 2);
    const Eigen::VectorXd level2 = kron_vec(r12, phi) + kron_vec(phi, r12);
    CHECK((CV.segment(D, D * D) - level2).cwiseAbs().maxCoeff() <= 1e-12);
    // Level 3 keeps only the linear part in each of the three slots.
    const Eigen::VectorXd r1 = S * phi + L1 * phi;
    const Eigen::VectorXd level3 = kron_vec(r1, kron_vec(phi, phi)) + kron_vec(phi, kron_vec(r1, phi)) +
                                   kron_vec(kron_vec(phi, phi), r1);
    CHECK((CV.segment(D + D * D, D * D * D) - level3).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("collision rows annihilate mass and momentum") {
  const int n = 4;
  const auto C = build_carleman(params(n));
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd r = (C.collision * embed_state(swe::test::random_field(n))).head(3 * n);
    for (int a = 0; a < n; ++a) {
      CHECK(std::abs(r.segment(3 * a, 3).sum()) <= 1e-13);
      CHECK(std::abs(r(3 * a + 1) - r(3 * a + 2)) <= 1e-13);
    }
  }
}

TEST_CASE("Carleman sparsity follows the block structure") {
  const int n = 3;
  const auto C = build_carleman(params(n));
  for (Eigen::Index r = 0; r < C.streaming.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(C.streaming, r); it; ++it)
      CHECK(level_of(it.row(), n) == level_of(it.col(), n));
  int upper_blocks[4][4] = {};
  for (Eigen::Index r = 0; r < C.collision.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(C.collision, r); it; ++it) {
      const int i = level_of(it.row(), n), j = level_of(it.col(), n);
      CHECK(j >= i);
      CHECK(j <= std::min(i + 2, 3));
      ++upper_blocks[i][j];
    }
  CHECK(upper_blocks[1][1] > 0);
  CHECK(upper_blocks[1][3] > 0);
  CHECK(upper_blocks[2][3] > 0);
  CHECK(upper_blocks[3][3] > 0);
  CHECK((Eigen::MatrixXd(C.total) - Eigen::MatrixXd(C.collision) - Eigen::MatrixXd(C.streaming))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("disabled dynamics leave empty parts") {
  const auto p = params(3);
  const auto none = build_carleman(p, {false, false});
  CHECK(none.total.nonZeros() == 0);
  CHECK(none.dim() == 819);
  const auto only_collision = build_carleman(p, {true, false});
  CHECK(only_collision.streaming.nonZeros() == 0);
  CHECK(only_collision.total.nonZeros() == only_collision.collision.nonZeros());
}

TEST_CASE("assembly is deterministic") {
  const auto a = build_carleman(params(4)), b = build_carleman(params(4));
  REQUIRE(a.total.nonZeros() == b.total.nonZeros());
  CHECK(std::equal(a.total.valuePtr(), a.total.valuePtr() + a.total.nonZeros(), b.total.valuePtr()));
  CHECK(std::equal(a.total.innerIndexPtr(), a.total.innerIndexPtr() + a.total.nonZeros(),
                   b.total.innerIndexPtr()));
}
