#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "mmot/costs.hpp"
#include "mmot/errors.hpp"
#include "mmot/extremal.hpp"
#include "mmot/solver.hpp"

using namespace mmot;

namespace {

PointCloud line_points(std::initializer_list<double> xs) {
  std::vector<std::vector<double>> pts;
  for (double x : xs) pts.push_back({x});
  return PointCloud(pts);
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const char* name)
      : path(std::filesystem::temp_directory_path() / name) {}
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("coulomb generator") {
  const PairwiseCost two = coulomb_pairwise(line_points({0.0, 2.0}));
  CHECK(two.at(0, 1) == doctest::Approx(0.5));
  CHECK(std::isinf(two.at(0, 0)));
  CHECK(std::isinf(two.at(1, 1)));

  const PairwiseCost three = coulomb_pairwise(line_points({0.0, 1.0, 2.0}));
  CHECK(three.at(0, 2) == doctest::Approx(0.5));
  CHECK(three.at(0, 1) == doctest::Approx(1.0));
  CHECK(three.at(1, 2) == doctest::Approx(1.0));

  // Nearly coincident points get an infinite off-diagonal entry.
  const PairwiseCost dup = coulomb_pairwise(line_points({0.0, 1e-15}));
  CHECK(std::isinf(dup.at(0, 1)));
}

TEST_CASE("spring generator") {
  const PairwiseCost c = spring_pairwise(line_points({1.0, 2.0, 3.0}), 0.75);
  CHECK(c.at(0, 0) == 0.5625);  // exactly 9/16
  CHECK(c.at(0, 1) == 0.0625);  // exactly 1/16
  CHECK(c.at(0, 2) == 1.5625);  // exactly 25/16
  CHECK(c.at(1, 2) == 0.0625);
  CHECK(c.at(0, 1) == c.at(1, 0));

  const PairwiseCost sq = spring_pairwise(line_points({0.0, 3.0}), 0.0);
  CHECK(sq.at(0, 1) == doctest::Approx(9.0));
  CHECK(sq.at(0, 0) == 0.0);

  // Off-diagonal vanishes exactly when distances equal the rest length.
  const PairwiseCost rest = spring_pairwise(line_points({0.0, 0.75}), 0.75);
  CHECK(rest.at(0, 1) == 0.0);
  CHECK(rest.at(0, 0) == doctest::Approx(0.5625));

  CHECK_THROWS_AS(spring_pairwise(line_points({0.0}), -1.0), ValidationError);
}

TEST_CASE("discrete metric generator") {
  const PairwiseCost one = discrete_metric_pairwise(1);
  CHECK(one.at(0, 0) == 0.0);
  const PairwiseCost two = discrete_metric_pairwise(2);
  CHECK(two.at(0, 1) == 1.0);
  CHECK(two.at(0, 0) == 0.0);

  // Pairing with any pair measure reproduces the discrete transport cost.
  const PairwiseCost d3 = discrete_metric_pairwise(3);
  const PairMeasure mu = phi_n(Marginal({2.0 / 3, 1.0 / 3, 0.0}), 3);
  double paired = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) paired += d3.at(i, j) * mu.at(i, j);
  CHECK(paired == doctest::Approx(wasserstein_discrete(mu)).epsilon(1e-12));
}

TEST_CASE("nbody lift of a pairwise cost") {
  const PairwiseCost c = spring_pairwise(line_points({1.0, 2.0, 3.0}), 0.75);
  const NBodyCallable lifted = nbody_from_pairwise(c, 3);
  const std::vector<int> tuple{0, 0, 1};
  CHECK(lifted.fn(tuple) == doctest::Approx(11.0 / 16).epsilon(1e-14));

  const PairwiseCost zero = PairwiseCost::from_matrix(2, {0, 0, 0, 0});
  const NBodyCallable zl = nbody_from_pairwise(zero, 4);
  CHECK(zl.fn(std::vector<int>{0, 1, 1, 0}) == 0.0);

  // Agreement with the occupation-based evaluation over whole catalogs.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> entry(0.0, 1.0);
  for (int l = 2; l <= 4; ++l)
    for (int n = 2; n <= 5; ++n) {
      std::vector<double> m(static_cast<std::size_t>(l) * l);
      for (int i = 0; i < l; ++i)
        for (int j = i; j < l; ++j) {
          const double v = entry(rng);
          m[static_cast<std::size_t>(i) * l + j] = v;
          m[static_cast<std::size_t>(j) * l + i] = v;
        }
      const PairwiseCost cost = PairwiseCost::from_matrix(l, std::move(m));
      const NBodyCallable nb = nbody_from_pairwise(cost, n);
      for (const QuantizedMeasure& q : enumerate_quantized(l, n)) {
        const double via_pairs = extreme_cost_pairwise(q, cost);
        const double via_nbody = extreme_cost_general(q, CostSpec(nb));
        CHECK(std::abs(via_pairs - via_nbody) <= 1e-10);
      }
    }
}

TEST_CASE("pairwise cost validation") {
  CHECK_THROWS_AS(PairwiseCost::from_matrix(2, {0, 1, 2, 0}), ValidationError);
  CHECK_THROWS_AS(
      PairwiseCost::from_matrix(2, {0, std::nan(""), std::nan(""), 0}),
      ValidationError);
  const PairwiseCost inf_ok =
      PairwiseCost::from_matrix(2, {kInfiniteCost, 1, 1, 0});
  CHECK(std::isinf(inf_ok.at(0, 0)));
}

TEST_CASE("cost files roundtrip including infinities") {
  TempFile file("mmot_cost_roundtrip.json");
  const PairwiseCost original =
      coulomb_pairwise(line_points({0.0, 0.5, 2.0}));
  save_cost(CostSpec(original), file.path);
  const CostSpec loaded = load_cost(file.path);
  const auto& back = std::get<PairwiseCost>(loaded);
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (std::isinf(original.at(i, j)))
        CHECK(std::isinf(back.at(i, j)));
      else
        CHECK(back.at(i, j) == original.at(i, j));  // bit-exact roundtrip
    }
}

TEST_CASE("nbody table files roundtrip and mean infinity off-table") {
  TempFile file("mmot_nbody_roundtrip.json");
  NBodyTable table;
  table.num_marginals = 2;
  table.num_sites = 2;
  table.entries[{0, 0}] = 0.25;
  table.entries[{0, 1}] = kInfiniteCost;
  save_cost(CostSpec(table), file.path);
  const CostSpec loaded = load_cost(file.path);
  const auto& back = std::get<NBodyTable>(loaded);
  CHECK(back.at(std::vector<int>{0, 0}) == 0.25);
  CHECK(std::isinf(back.at(std::vector<int>{0, 1})));
  CHECK(std::isinf(back.at(std::vector<int>{1, 1})));  // absent key
}

TEST_CASE("cost files reject asymmetry and garbage") {
  TempFile file("mmot_cost_bad.json");
  {
    std::ofstream out(file.path);
    out << R"({"type":"pairwise","matrix":[[0.0,1.0],[2.0,0.0]]})";
  }
  CHECK_THROWS_AS(load_cost(file.path), ValidationError);
  {
    std::ofstream out(file.path);
    out << "not json";
  }
  CHECK_THROWS_AS(load_cost(file.path), ValidationError);
  CHECK_THROWS_AS(load_cost("/nonexistent/cost.json"), ValidationError);
}

TEST_CASE("point cloud validation") {
  CHECK_THROWS_AS(PointCloud(std::vector<std::vector<double>>{}),
                  ValidationError);
  CHECK_THROWS_AS(PointCloud(std::vector<std::vector<double>>{{1.0}, {1.0, 2.0}}),
                  ValidationError);
  CHECK_THROWS_AS(PointCloud(std::vector<std::vector<double>>{{std::nan("")}}),
                  ValidationError);
  const PointCloud p({{0.0, 0.0}, {3.0, 4.0}});
  CHECK(p.distance(0, 1) == doctest::Approx(5.0));
}
