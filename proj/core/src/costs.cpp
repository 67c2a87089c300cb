#include "mmot/costs.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "mmot/errors.hpp"
#include "mmot/log.hpp"
#include "mmot/serialization.hpp"

namespace mmot {

PointCloud::PointCloud(std::vector<std::vector<double>> pts) : points(std::move(pts)) {
  if (points.empty()) throw ValidationError("point cloud must be nonempty");
  const std::size_t d = points.front().size();
  if (d == 0) throw ValidationError("point cloud dimension must be positive");
  for (const auto& p : points) {
    if (p.size() != d)
      throw ValidationError("point cloud points must share one dimension");
    for (double v : p)
      if (!std::isfinite(v))
        throw ValidationError("point cloud coordinates must be finite");
  }
}

double PointCloud::distance(int i, int j) const {
  const auto& a = points[static_cast<std::size_t>(i)];
  const auto& b = points[static_cast<std::size_t>(j)];
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

PairwiseCost PairwiseCost::from_matrix(int size, std::vector<double> row_major) {
  if (size < 1) throw ValidationError("pairwise cost needs at least one site");
  if (row_major.size() !=
      static_cast<std::size_t>(size) * static_cast<std::size_t>(size))
    throw ValidationError("pairwise cost matrix has wrong shape");
  for (double v : row_major)
    if (std::isnan(v)) throw ValidationError("pairwise cost contains NaN");
  for (int i = 0; i < size; ++i)
    for (int j = i + 1; j < size; ++j)
      if (row_major[static_cast<std::size_t>(i) * size + j] !=
          row_major[static_cast<std::size_t>(j) * size + i])
        throw ValidationError("pairwise cost must be symmetric");
  return PairwiseCost(size, std::move(row_major));
}

double NBodyTable::at(std::span<const int> index) const {
  const auto it = entries.find(sorted_index(index));
  return it == entries.end() ? kInfiniteCost : it->second;
}

int cost_num_sites(const CostSpec& cost) {
  return std::visit(
      [](const auto& c) -> int {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, PairwiseCost>)
          return c.size();
        else
          return c.num_sites;
      },
      cost);
}

namespace {
// Fills one symmetric matrix from a generator evaluated once per
// unordered pair, so c_ij and c_ji are the same double bit for bit.
template <class F>
PairwiseCost symmetric_from_generator(int size, F&& gen) {
  std::vector<double> m(static_cast<std::size_t>(size) * size, 0.0);
  for (int i = 0; i < size; ++i) {
    for (int j = i; j < size; ++j) {
      const double v = gen(i, j);
      m[static_cast<std::size_t>(i) * size + j] = v;
      m[static_cast<std::size_t>(j) * size + i] = v;
    }
  }
  return PairwiseCost::from_matrix(size, std::move(m));
}
}  // namespace

PairwiseCost coulomb_pairwise(const PointCloud& cloud) {
  const int l = cloud.size();
  return symmetric_from_generator(l, [&](int i, int j) {
    if (i == j) return kInfiniteCost;
    const double d = cloud.distance(i, j);
    if (d < 1e-14) {
      log_info("coulomb_pairwise: sites ", i, " and ", j,
               " nearly coincide; setting infinite cost");
      return kInfiniteCost;
    }
    return 1.0 / d;
  });
}

PairwiseCost spring_pairwise(const PointCloud& cloud, double r0) {
  if (!(r0 >= 0.0)) throw ValidationError("spring rest length must be >= 0");
  return symmetric_from_generator(cloud.size(), [&](int i, int j) {
    const double d = (i == j) ? 0.0 : cloud.distance(i, j);
    const double v = d - r0;
    return v * v;
  });
}

PairwiseCost discrete_metric_pairwise(int size) {
  return symmetric_from_generator(size,
                                  [](int i, int j) { return i == j ? 0.0 : 1.0; });
}

NBodyCallable nbody_from_pairwise(const PairwiseCost& cost, int num_marginals) {
  if (num_marginals < 1) throw ValidationError("nbody lift needs N >= 1");
  NBodyCallable out;
  out.num_marginals = num_marginals;
  out.num_sites = cost.size();
  out.symmetric = true;
  out.fn = [cost](std::span<const int> index) {
    double s = 0.0;
    for (std::size_t p = 0; p < index.size(); ++p)
      for (std::size_t q = p + 1; q < index.size(); ++q)
        s += cost.at(index[p], index[q]);
    return s;
  };
  return out;
}

CostSpec load_cost(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open cost file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("cost file " + path.string() + ": " + e.what());
  }
  return cost_from_json(j);
}

void save_cost(const CostSpec& cost, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write cost file " + path.string());
  out << cost_to_json(cost).dump(2) << "\n";
}

}  // namespace mmot
