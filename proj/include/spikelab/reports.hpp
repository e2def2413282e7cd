#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "spikelab/acceptance.hpp"
#include "spikelab/ground_state.hpp"
#include "spikelab/nlep.hpp"
#include "spikelab/pde_sim.hpp"
#include "spikelab/reduced_problem.hpp"
#include "spikelab/stability.hpp"

namespace spikelab {

inline constexpr const char* kFormatVersion = "1";

nlohmann::json groundstate_report(const RadialProfile& profile, const GroundStateConstants& g);

nlohmann::json equilibrium_report(int k, bool with_centre, const ModelParams& params,
                                  const ReducedConstants& rc, const RadiusResult& root,
                                  double asymptotic);

nlohmann::json stability_report(int k);

nlohmann::json nlep_report(const RadialOperator& op, const Spectrum& spectrum);

/// Sidecar describing one flat binary grid dump (row-major doubles).
nlohmann::json field_sidecar(const Field2D& field, double t, const std::string& data_file);

nlohmann::json reproduce_report(const std::vector<CriterionResult>& results);

}  // namespace spikelab
