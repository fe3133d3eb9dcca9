#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "svgene/rng.hpp"
#include "svgene/types.hpp"

using namespace svgene;

namespace {

Eigen::MatrixXi small_counts() {
  Eigen::MatrixXi y(4, 3);
  y << 1, 0, 2,
       0, 3, 0,
       4, 0, 0,
       2, 1, 5;
  return y;
}

Coordinates small_coords() {
  Matrix c(4, 2);
  c << 0, 0, 1, 0, 0, 1, 1, 1;
  return Coordinates{c};
}

CellCompositions small_comps(int n = 4, int K = 2) {
  Matrix w(n, K);
  for (int i = 0; i < n; ++i) {
    w(i, 0) = 0.25 + 0.1 * (i % 3);
    w(i, 1) = 1.0 - w(i, 0);
  }
  return CellCompositions{w};
}

}  // namespace

TEST_CASE("validate_dataset assembles consistent parts") {
  auto ds = validate_dataset(CountMatrix::from_dense(small_counts()), small_coords(),
                             small_comps(), GeneNetwork(3, {{0, 1}}));
  CHECK(ds.n() == 4);
  CHECK(ds.p() == 3);
  CHECK(ds.K() == 2);
  CHECK(ds.zero_count() == 5);
}

TEST_CASE("composition row sums are enforced") {
  Matrix w(4, 2);
  w.setConstant(0.5);
  w(2, 1) = 0.6;  // row sums to 1.1
  CHECK_THROWS_WITH_AS(validate_dataset(CountMatrix::from_dense(small_counts()), small_coords(),
                                        CellCompositions{w}, GeneNetwork(3, {})),
                       doctest::Contains("row 2"), Error);
}

TEST_CASE("asymmetric adjacency is rejected") {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(3, 3);
  a(0, 1) = 1;  // missing the mirror entry
  CHECK_THROWS_AS(GeneNetwork::from_adjacency(a), Error);
  a(1, 0) = 1;
  CHECK(GeneNetwork::from_adjacency(a).edges().size() == 1);
}

TEST_CASE("dimension mismatches name the offending pair") {
  Matrix c(3, 2);
  c << 0, 0, 1, 0, 0, 1;
  CHECK_THROWS_WITH_AS(validate_dataset(CountMatrix::from_dense(small_counts()), Coordinates{c},
                                        small_comps(), GeneNetwork(3, {})),
                       doctest::Contains("coordinates rows"), Error);
  CHECK_THROWS_WITH_AS(validate_dataset(CountMatrix::from_dense(small_counts()), small_coords(),
                                        small_comps(), GeneNetwork(4, {})),
                       doctest::Contains("network node count"), Error);
}

TEST_CASE("validation is idempotent") {
  auto ds = validate_dataset(CountMatrix::from_dense(small_counts()), small_coords(),
                             small_comps(), GeneNetwork(3, {{0, 1}}));
  auto again = validate_dataset(ds.counts(), ds.coords(), ds.comps(), ds.network());
  CHECK(again.counts().to_dense() == ds.counts().to_dense());
  CHECK(again.coords().coords == ds.coords().coords);
  CHECK(again.zero_count() == ds.zero_count());
}

TEST_CASE("zero index set matches the zero entries exactly") {
  rng::Stream st(7);
  const int n = 23, p = 9;
  Eigen::MatrixXi y(n, p);
  long zeros = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) {
      y(i, j) = st.uniform() < 0.4 ? 0 : static_cast<int>(st.uniform() * 10) + 1;
      zeros += y(i, j) == 0;
    }
  auto cm = CountMatrix::from_dense(y);
  CHECK(cm.zero_count() == zeros);
  for (int j = 0; j < p; ++j)
    for (int i : cm.zero_spots(j)) CHECK(y(i, j) == 0);

  auto all_pos = CountMatrix::from_dense(Eigen::MatrixXi::Ones(4, 3));
  CHECK(all_pos.zero_count() == 0);
}

TEST_CASE("counts round-trip through the sparse layout") {
  auto cm = CountMatrix::from_dense(small_counts());
  CHECK(cm.at(0, 0) == 1);
  CHECK(cm.at(1, 0) == 0);
  CHECK(cm.at(3, 2) == 5);
  CHECK(cm.to_dense()(3, 1) == 1.0);
}

TEST_CASE("hyperparameter invariants") {
  HyperParams hp;
  hp.lambda_u = 1.0;
  CHECK_NOTHROW(hp.validate());
  hp.bfdr_level = 1.5;
  CHECK_THROWS_AS(hp.validate(), Error);
}
