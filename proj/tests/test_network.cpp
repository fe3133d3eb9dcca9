#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "svgene/network.hpp"
#include "svgene/reference.hpp"
#include "svgene/rng.hpp"
#include "svgene/simulate.hpp"

using namespace svgene;

namespace {

// independent union-find oracle for component checks
std::vector<int> uf_components(int p, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(p);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : edges) parent[find(a)] = find(b);
  std::vector<int> root(p);
  for (int i = 0; i < p; ++i) root[i] = find(i);
  return root;
}

GeneNetwork random_graph(int p, double edge_prob, rng::Stream& st) {
  std::vector<std::pair<int, int>> edges;
  for (int j = 0; j < p; ++j)
    for (int l = j + 1; l < p; ++l)
      if (st.uniform() < edge_prob) edges.emplace_back(j, l);
  return GeneNetwork(p, std::move(edges));
}

Matrix dense_ltilde(const GeneNetwork& net) {
  Matrix l = Matrix::Identity(net.p(), net.p());
  for (const auto& [j, k] : net.edges()) {
    const double v = -1.0 / std::sqrt(static_cast<double>(net.degrees()[j]) * net.degrees()[k]);
    l(j, k) = v;
    l(k, j) = v;
  }
  return l;
}

}  // namespace

TEST_CASE("connected components: edgeless, path, and stars") {
  GeneNetwork edgeless(3, {});
  CHECK(edgeless.components().size() == 3);

  GeneNetwork path(4, {{0, 1}, {1, 2}});
  REQUIRE(path.components().size() == 2);
  CHECK(path.components()[0] == std::vector<int>{0, 1, 2});
  CHECK(path.components()[1] == std::vector<int>{3});

  // two 50-node stars, checked against the union-find oracle
  auto stars = sim::make_network(sim::NetworkKind::Star, 2, 50, 1);
  REQUIRE(stars.components().size() == 2);
  const auto roots = uf_components(100, stars.edges());
  for (int c = 0; c < 2; ++c) {
    CHECK(stars.components()[c].size() == 50);
    for (int g : stars.components()[c]) CHECK(roots[g] == roots[stars.components()[c][0]]);
  }
}

TEST_CASE("components are deterministic and sorted by smallest member") {
  rng::Stream st(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = random_graph(30, 0.05, st);
    int prev = -1;
    std::vector<bool> seen(30, false);
    for (const auto& comp : net.components()) {
      CHECK(comp.front() > prev);
      prev = comp.front();
      for (int g : comp) {
        CHECK(!seen[g]);
        seen[g] = true;
      }
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
  }
}

TEST_CASE("normalized Laplacian of a 4-node star") {
  GeneNetwork star(4, {{0, 1}, {0, 2}, {0, 3}});
  auto blocks = normalized_laplacian(star);
  REQUIRE(blocks.size() == 1);
  const Matrix& l = blocks[0].ltilde;
  for (int a = 0; a < 4; ++a) CHECK(l(a, a) == doctest::Approx(1.0));
  for (int leaf = 1; leaf < 4; ++leaf)
    CHECK(l(0, leaf) == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(l(1, 2) == 0.0);
}

TEST_CASE("edgeless graph yields identity blocks") {
  auto blocks = normalized_laplacian(GeneNetwork(5, {}));
  CHECK(blocks.size() == 5);
  for (const auto& b : blocks) {
    CHECK(b.genes.size() == 1);
    CHECK(b.ltilde(0, 0) == 1.0);
  }
}

TEST_CASE("two-node edge: off-diagonal -1 and the difference quadratic form") {
  GeneNetwork pair(2, {{0, 1}});
  auto blocks = normalized_laplacian(pair);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].ltilde(0, 1) == doctest::Approx(-1.0));
  Vector g(2);
  g << 1.7, -0.4;
  const double quad = g.dot(blocks[0].ltilde * g);
  CHECK(quad == doctest::Approx((g(0) - g(1)) * (g(0) - g(1))));
}

TEST_CASE("Laplacian edge-difference identity on random graphs") {
  rng::Stream st(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 2 + static_cast<int>(st.uniform() * 49);
    auto net = random_graph(p, st.uniform(0.0, 0.25), st);
    Vector g(p);
    for (int j = 0; j < p; ++j) g(j) = st.normal();

    const double lhs = g.dot(dense_ltilde(net) * g);
    double rhs = 0.0;
    for (const auto& [j, l] : net.edges()) {
      const double diff = g(j) / std::sqrt(net.degrees()[j]) - g(l) / std::sqrt(net.degrees()[l]);
      rhs += diff * diff;
    }
    for (int j = 0; j < p; ++j)
      if (net.degrees()[j] == 0) rhs += g(j) * g(j);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("rough_beta recovers an exact linear signal") {
  const int n = 40;
  rng::Stream st(23);
  Matrix coords(n, 2);
  for (int i = 0; i < n; ++i) {
    coords(i, 0) = st.uniform(0, 8);
    coords(i, 1) = st.uniform(0, 8);
  }
  auto sc = standardize(Coordinates{coords});
  auto design = build_design(sc, KernelSpec{KernelFamily::Linear, ScaleQuantile::None, {1, 1}});

  Matrix w(n, 2);
  for (int i = 0; i < n; ++i) {
    w(i, 0) = 0.3 + 0.4 * (i % 2);
    w(i, 1) = 1.0 - w(i, 0);
  }

  // log1p(y) = 0.5 + 2 K(x1) exactly, via y = expm1(...)
  Eigen::MatrixXi y(n, 2);
  std::vector<std::vector<std::pair<int, long>>> nz(2);
  for (int i = 0; i < n; ++i) {
    const double v = std::expm1(0.5 + 2.0 * design.values(i, 0) + 3.0);
    nz[0].emplace_back(i, std::lround(std::max(0.0, v)));
    nz[1].emplace_back(i, 0);
  }
  // gene 1: identically zero counts -> zero slopes
  auto ds = validate_dataset(CountMatrix(n, 2, {nz[0], {}}), Coordinates{coords},
                             CellCompositions{w}, GeneNetwork(2, {}));

  // exact-recovery variant: fit on synthetic continuous response needs exact
  // log1p linearity, so rebuild with counts equal to round(expm1(...)) and a
  // regression check instead of equality
  const Vector tb = rough_beta(ds, design);
  CHECK(tb(1) == 0.0);  // zero-count gene falls back to 0
  CHECK(tb(3) == 0.0);
  CHECK(std::abs(tb(0) - 2.0) < 0.05);  // rounding noise only

  // permutation invariance of least squares
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  Matrix coords_p(n, 2), w_p(n, 2);
  std::vector<std::vector<std::pair<int, long>>> nz_p(2);
  for (int i = 0; i < n; ++i) {
    coords_p(i, 0) = coords(perm[i], 0);
    coords_p(i, 1) = coords(perm[i], 1);
    w_p.row(i) = w.row(perm[i]);
  }
  for (const auto& [i, v] : nz[0]) nz_p[0].emplace_back(n - 1 - i, v);
  auto ds_p = validate_dataset(CountMatrix(n, 2, {nz_p[0], {}}), Coordinates{coords_p},
                               CellCompositions{w_p}, GeneNetwork(2, {}));
  auto design_p = build_design(standardize(Coordinates{coords_p}),
                               KernelSpec{KernelFamily::Linear, ScaleQuantile::None, {1, 1}});
  const Vector tb_p = rough_beta(ds_p, design_p);
  CHECK(tb_p(0) == doctest::Approx(tb(0)).epsilon(1e-10));
}

TEST_CASE("exact least-squares recovery when log1p(Y) is exactly linear") {
  // choose integer counts first, then build the design column so that
  // log1p(y) = 1 + 2 K(x1) holds exactly; the fitted slope must be 2
  const int n = 12;
  std::vector<std::vector<std::pair<int, long>>> nz(1);
  DesignMatrix design;
  design.values.resize(n, 2);
  Matrix coords(n, 2);
  for (int i = 0; i < n; ++i) {
    const long y = 3 * i + 1;
    nz[0].emplace_back(i, y);
    design.values(i, 0) = (std::log1p(static_cast<double>(y)) - 1.0) / 2.0;
    design.values(i, 1) = ((i * 5) % 7) / 7.0;
    coords(i, 0) = i;
    coords(i, 1) = (i * 3) % 5;
  }
  Matrix w(n, 1);
  w.setOnes();  // K = 1: no composition columns enter the regression
  auto ds = validate_dataset(CountMatrix(n, 1, nz), Coordinates{coords}, CellCompositions{w},
                             GeneNetwork(1, {}));
  const Vector tb = rough_beta(ds, design);
  CHECK(tb(0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(std::abs(tb(1)) < 1e-8);
}

TEST_CASE("signed Laplacian sign structure") {
  GeneNetwork pair(2, {{0, 1}});

  // all positive signs: L equals Ltilde
  Vector tb_pos(4);
  tb_pos << 1.0, 2.0, 0.5, 3.0;
  SignedLaplacian sl_pos(pair, tb_pos, 1e-3);
  CHECK(sl_pos.block(0, 0).m(0, 1) == doctest::Approx(-1.0));

  // mixed signs flip the off-diagonal; quadratic form becomes (g1+g2)^2 + eps|g|^2
  Vector tb_mix(4);
  tb_mix << 1.0, -1.0, 1.0, 1.0;
  SignedLaplacian sl_mix(pair, tb_mix, 1e-3);
  CHECK(sl_mix.block(0, 0).m(0, 1) == doctest::Approx(1.0));
  Vector g = Vector::Zero(4);
  g(0) = 0.8;
  g(1) = -0.3;
  const double expected = (g(0) + g(1)) * (g(0) + g(1)) + 1e-3 * (g(0) * g(0) + g(1) * g(1));
  CHECK(sl_mix.quad_form(g) == doctest::Approx(expected).epsilon(1e-12));

  // global sign flip leaves L unchanged
  SignedLaplacian sl_flip(pair, Vector(-tb_mix), 1e-3);
  CHECK((sl_flip.dense() - sl_mix.dense()).cwiseAbs().maxCoeff() == 0.0);

  // sgn(0) := +1
  Vector tb_zero = Vector::Zero(4);
  SignedLaplacian sl_zero(pair, tb_zero, 1e-3);
  CHECK(sl_zero.sign().minCoeff() == 1.0);
}

TEST_CASE("factorization reconstructs L + eps I") {
  GeneNetwork pair(2, {{0, 1}});
  Vector tb = Vector::Ones(4);
  SignedLaplacian sl(pair, tb, 1e-3);
  const auto& b = sl.block(0, 0);
  Matrix l = b.llt.matrixL();
  CHECK(((l * l.transpose()) - b.m).cwiseAbs().maxCoeff() < 1e-12);

  // singleton block is the scalar 1 + eps
  GeneNetwork lone(1, {});
  SignedLaplacian sl1(lone, Vector::Ones(2), 1e-3);
  CHECK(sl1.block(0, 0).m(0, 0) == doctest::Approx(1.0 + 1e-3));
}

TEST_CASE("block eigenvalues lie in [eps, 2 + eps]") {
  rng::Stream st(29);
  for (int trial = 0; trial < 10; ++trial) {
    const int p = 3 + static_cast<int>(st.uniform() * 20);
    auto net = random_graph(p, 0.2, st);
    Vector tb(2 * p);
    for (int t = 0; t < 2 * p; ++t) tb(t) = st.normal();
    SignedLaplacian sl(net, tb, 1e-3);
    for (const auto& b : sl.blocks()) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(b.m);
      CHECK(es.eigenvalues().minCoeff() >= 1e-3 - 1e-12);
      CHECK(es.eigenvalues().maxCoeff() <= 2.0 + 1e-3 + 1e-12);
    }
  }
}

TEST_CASE("component relabeling permutes the Laplacian") {
  // relabel genes within one component; dense matrices must be permutation-similar
  GeneNetwork net(4, {{0, 1}, {1, 2}, {0, 2}, {0, 3}});
  Vector tb = Vector::Ones(8);
  SignedLaplacian a(net, tb, 1e-3);
  // swap labels 1 and 2 (same component, degree-preserving here)
  GeneNetwork relabeled(4, {{0, 2}, {2, 1}, {0, 1}, {0, 3}});
  SignedLaplacian b(relabeled, tb, 1e-3);
  Eigen::VectorXi perm(8);
  perm << 0, 2, 1, 3, 4, 6, 5, 7;
  Matrix da = a.dense(), db = b.dense();
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) CHECK(da(r, c) == doctest::Approx(db(perm(r), perm(c))));
}

TEST_CASE("sampling against a block matches sigma^2 (L+eps I)^{-1}") {
  GeneNetwork tri(3, {{0, 1}, {1, 2}, {0, 2}});
  Vector tb = Vector::Ones(6);
  SignedLaplacian sl(tri, tb, 1e-3);
  const auto& blk = sl.block(0, 0);
  const double sigma = 1.7;

  Matrix cov = Matrix::Zero(3, 3);
  const int draws = 100000;
  rng::Stream st(101);
  Vector z(3);
  for (int t = 0; t < draws; ++t) {
    for (int a = 0; a < 3; ++a) z(a) = st.normal();
    Vector x = sl.sample_zero_mean(blk, z, sigma);
    cov += x * x.transpose();
  }
  cov /= draws;
  const Matrix target = sigma * sigma * blk.m.inverse();
  CHECK(((cov - target).norm() / target.norm()) < 0.05);
}

TEST_CASE("quad_form agrees with the dense assembly") {
  rng::Stream st(31);
  auto net = random_graph(12, 0.2, st);
  Vector tb(24), g(24);
  for (int t = 0; t < 24; ++t) {
    tb(t) = st.normal();
    g(t) = st.normal();
  }
  SignedLaplacian sl(net, tb, 1e-3);
  CHECK(sl.quad_form(g) == doctest::Approx(ref::quad_form(sl.dense(), g)).epsilon(1e-10));
}
