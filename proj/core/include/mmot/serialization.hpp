#pragma once

#include <filesystem>

#include "mmot/costs.hpp"
#include "mmot/exact.hpp"
#include "mmot/ext/json.hpp"
#include "mmot/extremal.hpp"
#include "mmot/marginal.hpp"
#include "mmot/monge.hpp"
#include "mmot/pair_measure.hpp"
#include "mmot/problem.hpp"
#include "mmot/quantized.hpp"
#include "mmot/sae_state.hpp"
#include "mmot/solver.hpp"
#include "mmot/symmetric_plan.hpp"

// JSON wire formats. Site and multi-index entries are 1-based on the wire
// (matching the printed catalogs); +inf serializes as the string "inf".
// Plans: {"N":int,"l":int,"entries":[{"idx":[...],"w":float}]}.
// Pair measures and costs: {"l":int,"matrix":[[...]]}.
// Occupation vectors: plain integer arrays.

namespace mmot {

nlohmann::json load_json(const std::filesystem::path& path);
void save_json(const nlohmann::json& j, const std::filesystem::path& path);

nlohmann::json double_to_json(double v);
double double_from_json(const nlohmann::json& j);

nlohmann::json marginal_to_json(const Marginal& m);
Marginal marginal_from_json(const nlohmann::json& j);

nlohmann::json quantized_to_json(const QuantizedMeasure& q);
QuantizedMeasure quantized_from_json(const nlohmann::json& j);

nlohmann::json plan_to_json(const SymmetricPlan& plan);
SymmetricPlan plan_from_json(const nlohmann::json& j);

nlohmann::json pair_measure_to_json(const PairMeasure& mu);
PairMeasure pair_measure_from_json(const nlohmann::json& j,
                                   bool allow_signed = false);

nlohmann::json sae_to_json(const SAEState& state);
SAEState sae_from_json(const nlohmann::json& j);

nlohmann::json monge_to_json(const MongeState& state);
MongeState monge_from_json(const nlohmann::json& j);

nlohmann::json cost_to_json(const CostSpec& cost);
CostSpec cost_from_json(const nlohmann::json& j);

nlohmann::json point_cloud_to_json(const PointCloud& cloud);
PointCloud point_cloud_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const RepresentabilityCertificate& cert,
                                   int num_sites);

nlohmann::json solve_report_to_json(const SolveReport& report,
                                    const std::string& method);
nlohmann::json oracle_report_to_json(const OracleReport& report);
nlohmann::json monge_report_to_json(const MongeReport& report);
nlohmann::json maximize_report_to_json(const MaximizeReport& report);
nlohmann::json gs_report_to_json(const GsMaximizeReport& report);
nlohmann::json exact_report_to_json(const ExactSolveReport& report);

Problem problem_from_json(const nlohmann::json& j,
                          const std::filesystem::path& base_dir);

}  // namespace mmot
