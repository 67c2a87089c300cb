#include "mmot/serialization.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "mmot/errors.hpp"

namespace mmot {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw ValidationError(what); }

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing JSON field \"") + key + "\"");
  return *it;
}

std::vector<int> one_based(const std::vector<int>& zero_based) {
  std::vector<int> out = zero_based;
  for (int& v : out) ++v;
  return out;
}

std::vector<int> zero_based(const json& arr, const char* what) {
  if (!arr.is_array()) bad(std::string(what) + " must be an array");
  std::vector<int> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number_integer()) bad(std::string(what) + " must hold integers");
    const int x = v.get<int>();
    if (x < 1) bad(std::string(what) + " entries are 1-based");
    out.push_back(x - 1);
  }
  return out;
}

json matrix_to_json(int size, const std::vector<double>& row_major) {
  json rows = json::array();
  for (int i = 0; i < size; ++i) {
    json row = json::array();
    for (int j = 0; j < size; ++j)
      row.push_back(double_to_json(
          row_major[static_cast<std::size_t>(i) * static_cast<std::size_t>(size) +
                    static_cast<std::size_t>(j)]));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> matrix_from_json(const json& j, int& size) {
  if (!j.is_array() || j.empty()) bad("matrix must be a nonempty array of rows");
  size = static_cast<int>(j.size());
  std::vector<double> m;
  m.reserve(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != size)
      bad("matrix must be square");
    for (const auto& v : row) m.push_back(double_from_json(v));
  }
  return m;
}

std::string rational_to_string(const Rational& r) {
  return r.str();
}

}  // namespace

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
  return j;
}

void save_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) bad("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

json double_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  if (std::isnan(v)) bad("NaN is not serializable");
  return json(v);
}

double double_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInfiniteCost;
    if (s == "-inf") return -kInfiniteCost;
    bad("unrecognized numeric token \"" + s + "\"");
  }
  if (!j.is_number()) bad("expected a number");
  const double v = j.get<double>();
  if (std::isnan(v)) bad("NaN is not a valid value");
  return v;
}

json marginal_to_json(const Marginal& m) {
  json weights = json::array();
  for (double v : m.weights()) weights.push_back(v);
  return json{{"weights", std::move(weights)}};
}

Marginal marginal_from_json(const json& j) {
  const json& arr = j.is_array() ? j : field(j, "weights");
  if (!arr.is_array()) bad("marginal weights must be an array");
  std::vector<double> w;
  for (const auto& v : arr) w.push_back(double_from_json(v));
  return Marginal::renormalized(std::move(w), 1e-9);
}

json quantized_to_json(const QuantizedMeasure& q) {
  return json{{"N", q.num_marginals()}, {"rho", q.occupations()}};
}

QuantizedMeasure quantized_from_json(const json& j) {
  const int n = field(j, "N").get<int>();
  std::vector<int> rho = field(j, "rho").get<std::vector<int>>();
  return QuantizedMeasure(n, std::move(rho));
}

json plan_to_json(const SymmetricPlan& plan) {
  json entries = json::array();
  for (const auto& [key, w] : plan.entries())
    entries.push_back(json{{"idx", one_based(key)}, {"w", w}});
  return json{{"N", plan.num_marginals()},
              {"l", plan.num_sites()},
              {"entries", std::move(entries)}};
}

SymmetricPlan plan_from_json(const json& j) {
  const int n = field(j, "N").get<int>();
  const int l = field(j, "l").get<int>();
  SymmetricPlan::EntryMap entries;
  for (const auto& e : field(j, "entries")) {
    MultiIndex idx = zero_based(field(e, "idx"), "plan idx");
    const double w = double_from_json(field(e, "w"));
    entries[sorted_index(idx)] += w;
  }
  return SymmetricPlan::renormalized(n, l, std::move(entries), 1e-9);
}

json pair_measure_to_json(const PairMeasure& mu) {
  return json{{"l", mu.size()}, {"matrix", matrix_to_json(mu.size(), mu.data())}};
}

PairMeasure pair_measure_from_json(const json& j, bool allow_signed) {
  int size = 0;
  std::vector<double> m = matrix_from_json(field(j, "matrix"), size);
  if (j.contains("l") && field(j, "l").get<int>() != size)
    bad("pair measure \"l\" disagrees with the matrix shape");
  return allow_signed ? PairMeasure::signed_measure(size, std::move(m))
                      : PairMeasure::probability(size, std::move(m));
}

json sae_to_json(const SAEState& state) {
  json support = json::array();
  for (const auto& site : state.support())
    support.push_back(json{{"alpha", site.weight},
                           {"rho", site.distribution.occupations()}});
  json out{{"N", state.num_marginals()},
           {"l", state.num_sites()},
           {"support", std::move(support)}};
  if (state.has_maps()) {
    json maps = json::array();
    for (const auto& m : state.maps()) maps.push_back(one_based(m));
    out["maps"] = std::move(maps);
  }
  return out;
}

SAEState sae_from_json(const json& j) {
  const int n = field(j, "N").get<int>();
  const int l = field(j, "l").get<int>();
  std::vector<SAEState::Site> support;
  for (const auto& s : field(j, "support")) {
    const double alpha = double_from_json(field(s, "alpha"));
    std::vector<int> rho = field(s, "rho").get<std::vector<int>>();
    support.push_back({alpha, QuantizedMeasure(n, std::move(rho))});
  }
  SAEState state(n, l, std::move(support));
  if (j.contains("maps")) {
    std::vector<std::vector<int>> maps;
    for (const auto& m : j["maps"]) maps.push_back(zero_based(m, "map image"));
    state.attach_maps(std::move(maps));
  }
  return state;
}

json monge_to_json(const MongeState& state) {
  json maps = json::array();
  for (const auto& m : state.permutations) maps.push_back(one_based(m));
  return json{{"l", state.num_sites()},
              {"N", state.num_marginals()},
              {"maps", std::move(maps)}};
}

MongeState monge_from_json(const json& j) {
  const int l = field(j, "l").get<int>();
  std::vector<std::vector<int>> maps;
  for (const auto& m : field(j, "maps"))
    maps.push_back(zero_based(m, "map image"));
  return MongeState(l, std::move(maps));
}

json cost_to_json(const CostSpec& cost) {
  if (const auto* pw = std::get_if<PairwiseCost>(&cost))
    return json{{"type", "pairwise"},
                {"matrix", matrix_to_json(pw->size(), pw->data())}};
  if (const auto* table = std::get_if<NBodyTable>(&cost)) {
    json entries = json::array();
    for (const auto& [idx, c] : table->entries)
      entries.push_back(json{{"idx", one_based(idx)}, {"c", double_to_json(c)}});
    return json{{"type", "nbody"},
                {"N", table->num_marginals},
                {"l", table->num_sites},
                {"entries", std::move(entries)}};
  }
  bad("callable costs cannot be serialized");
}

CostSpec cost_from_json(const json& j) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "pairwise") {
    int size = 0;
    std::vector<double> m = matrix_from_json(field(j, "matrix"), size);
    return PairwiseCost::from_matrix(size, std::move(m));
  }
  if (type == "nbody") {
    NBodyTable table;
    table.num_marginals = field(j, "N").get<int>();
    table.num_sites = field(j, "l").get<int>();
    for (const auto& e : field(j, "entries")) {
      MultiIndex idx = sorted_index(zero_based(field(e, "idx"), "cost idx"));
      if (static_cast<int>(idx.size()) != table.num_marginals)
        bad("nbody cost entry has wrong index length");
      for (int v : idx)
        if (v >= table.num_sites) bad("nbody cost entry site out of range");
      table.entries[idx] = double_from_json(field(e, "c"));
    }
    return table;
  }
  bad("unknown cost type \"" + type + "\"");
}

json point_cloud_to_json(const PointCloud& cloud) {
  return json{{"points", cloud.points}};
}

PointCloud point_cloud_from_json(const json& j) {
  const json& pts = j.is_array() ? j : field(j, "points");
  std::vector<std::vector<double>> points;
  for (const auto& p : pts) {
    std::vector<double> coords;
    for (const auto& v : p) coords.push_back(double_from_json(v));
    points.push_back(std::move(coords));
  }
  return PointCloud(std::move(points));
}

json certificate_to_json(const RepresentabilityCertificate& cert,
                         int num_sites) {
  json out;
  out["verdict"] =
      cert.representable() ? "representable" : "not-representable";
  if (cert.witness) {
    out["witness"] = sae_to_json(*cert.witness);
    out["witness_residual"] = cert.witness_residual;
  }
  if (cert.separating) {
    out["separating"] = matrix_to_json(num_sites, *cert.separating);
    out["margin"] = cert.margin;
  }
  return out;
}

namespace {
// Wall-clock timing stays on the human channel (stderr); the machine JSON
// is bit-deterministic for fixed inputs and seed.
json solve_stats_to_json(const SolveStats& stats) {
  return json{{"catalog_size", stats.catalog_size},
              {"finite_columns", stats.finite_columns},
              {"columns_generated", stats.columns_generated},
              {"master_solves", stats.master_solves},
              {"pivots", stats.pivots}};
}
}  // namespace

json solve_report_to_json(const SolveReport& report, const std::string& method) {
  json out;
  out["method"] = method;
  out["status"] =
      report.outcome == SolveOutcome::optimal ? "optimal" : "infinite";
  out["cost"] = double_to_json(report.cost);
  if (report.state) out["state"] = sae_to_json(*report.state);
  if (report.plan) out["plan"] = plan_to_json(*report.plan);
  if (report.outcome == SolveOutcome::optimal) {
    out["uniqueness_margin"] = double_to_json(report.uniqueness_margin);
    out["unique_vertex"] = report.unique_vertex;
    out["certified_optimal"] = report.certified_optimal;
  }
  out["stats"] = solve_stats_to_json(report.stats);
  return out;
}

json oracle_report_to_json(const OracleReport& report) {
  json out;
  out["method"] = "oracle";
  out["status"] =
      report.outcome == SolveOutcome::optimal ? "optimal" : "infinite";
  out["cost"] = double_to_json(report.cost);
  out["l"] = report.num_sites;
  out["N"] = report.num_marginals;
  json atoms = json::array();
  for (const auto& [tuple, w] : report.atoms)
    atoms.push_back(json{{"idx", one_based(tuple)}, {"w", w}});
  out["atoms"] = std::move(atoms);
  out["stats"] = solve_stats_to_json(report.stats);
  return out;
}

json monge_report_to_json(const MongeReport& report) {
  json out;
  out["method"] = "monge";
  out["status"] =
      report.outcome == SolveOutcome::optimal ? "optimal" : "infinite";
  out["cost"] = double_to_json(report.cost);
  if (report.best) out["state"] = monge_to_json(*report.best);
  if (report.plan) out["plan"] = plan_to_json(*report.plan);
  out["states_visited"] = report.states_visited;
  return out;
}

json maximize_report_to_json(const MaximizeReport& report) {
  json out;
  out["value"] = double_to_json(report.value);
  out["optimizer"] = pair_measure_to_json(report.optimizer);
  out["mixture"] = sae_to_json(report.mixture);
  out["marginal_quantized"] = report.marginal_quantized;
  if (report.marginal_quantized) {
    out["uniqueness_margin"] = double_to_json(report.uniqueness_margin);
    out["unique"] = report.unique;
  }
  return out;
}

json gs_report_to_json(const GsMaximizeReport& report) {
  json out;
  out["value"] = double_to_json(report.value);
  out["optimizer"] = plan_to_json(report.optimizer);
  out["mixture"] = sae_to_json(report.mixture);
  out["marginal_quantized"] = report.marginal_quantized;
  if (report.marginal_quantized) {
    out["uniqueness_margin"] = double_to_json(report.uniqueness_margin);
    out["unique"] = report.unique;
  }
  return out;
}

json exact_report_to_json(const ExactSolveReport& report) {
  json out;
  if (report.infinite) {
    out["status"] = "infinite";
    return out;
  }
  out["status"] = "optimal";
  out["cost"] = rational_to_string(report.cost);
  out["cost_value"] = rational_to_double(report.cost);
  json support = json::array();
  for (const auto& site : report.support)
    support.push_back(json{{"alpha", rational_to_string(site.weight)},
                           {"alpha_value", rational_to_double(site.weight)},
                           {"rho", site.distribution.occupations()}});
  out["support"] = std::move(support);
  out["uniqueness_margin"] = rational_to_string(report.uniqueness_margin);
  out["unique"] = report.unique;
  return out;
}

namespace {

CostSpec cost_spec_from_problem(const json& j, const StateSpace& space, int n,
                                const std::filesystem::path& base_dir) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "pairwise" || type == "nbody") {
    CostSpec cost = cost_from_json(j);
    if (cost_num_sites(cost) != space.size())
      bad("cost size does not match the state space");
    if (const auto* table = std::get_if<NBodyTable>(&cost);
        table != nullptr && table->num_marginals != n)
      bad("nbody cost N does not match the problem N");
    return cost;
  }
  if (type == "file") {
    std::filesystem::path p = field(j, "path").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return load_cost(p);
  }
  if (type == "coulomb" || type == "spring") {
    if (!space.has_coordinates())
      bad("geometric costs need state-space points");
    const PointCloud cloud(space.coordinates());
    if (type == "coulomb") return coulomb_pairwise(cloud);
    return spring_pairwise(cloud, double_from_json(field(j, "r0")));
  }
  if (type == "discrete") return discrete_metric_pairwise(space.size());
  bad("unknown cost type \"" + type + "\"");
}

}  // namespace

Problem problem_from_json(const json& j, const std::filesystem::path& base_dir) {
  const json& ss = field(j, "state_space");
  const int l = field(ss, "l").get<int>();
  std::vector<std::string> labels;
  if (ss.contains("labels"))
    labels = ss["labels"].get<std::vector<std::string>>();
  else
    for (int i = 1; i <= l; ++i) labels.push_back("a" + std::to_string(i));
  std::optional<std::vector<std::vector<double>>> points;
  if (ss.contains("points"))
    points = point_cloud_from_json(ss["points"]).points;
  StateSpace space(l, std::move(labels), std::move(points));

  const int n = field(j, "N").get<int>();
  if (n < 1) bad("problem needs N >= 1");

  const json& marg = field(j, "marginal");
  const bool uniform =
      marg.is_string() && marg.get<std::string>() == "uniform";
  Marginal marginal =
      uniform ? Marginal::uniform(l) : marginal_from_json(marg);
  if (marginal.size() != l) bad("marginal size does not match the state space");

  CostSpec cost = cost_spec_from_problem(field(j, "cost"), space, n, base_dir);

  SolverSettings settings;
  if (j.contains("solver")) {
    const json& s = j["solver"];
    if (s.contains("method")) settings.method = s["method"].get<std::string>();
    if (s.contains("pricing")) {
      const std::string p = s["pricing"].get<std::string>();
      if (p == "enumerate")
        settings.pricing = Pricing::enumerate;
      else if (p == "local-search")
        settings.pricing = Pricing::local_search;
      else
        bad("unknown pricing \"" + p + "\"");
    }
    if (s.contains("exact")) settings.exact = s["exact"].get<bool>();
    if (s.contains("seed")) settings.seed = s["seed"].get<std::uint64_t>();
    if (s.contains("threads")) settings.threads = s["threads"].get<int>();
    if (s.contains("limit_columns"))
      settings.limits.enumeration = s["limit_columns"].get<std::uint64_t>();
    if (s.contains("limit_oracle"))
      settings.limits.oracle_atoms = s["limit_oracle"].get<std::uint64_t>();
    if (s.contains("limit_monge"))
      settings.limits.monge_states = s["limit_monge"].get<std::uint64_t>();
  }
  if (settings.method != "sae" && settings.method != "colgen" &&
      settings.method != "oracle" && settings.method != "monge")
    bad("unknown solver method \"" + settings.method + "\"");

  return Problem{std::move(space), n, std::move(marginal), uniform,
                 std::move(cost), std::move(settings)};
}

Problem load_problem(const std::filesystem::path& path) {
  return problem_from_json(load_json(path), path.parent_path());
}

}  // namespace mmot
