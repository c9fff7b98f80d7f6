#pragma once

#include "adrsplit/advection.hpp"
#include "adrsplit/analysis.hpp"
#include "adrsplit/operators.hpp"
#include "adrsplit/splitting.hpp"

#include <json.hpp>

#include <iosfwd>

namespace adrsplit {

nlohmann::json to_json(const FieldReport& report);
nlohmann::json to_json(const NormEstimate& estimate);
nlohmann::json to_json(const ConvergenceReport& report);
nlohmann::json to_json(const EnergyReport& report);
/// Scalars only; the solution field goes to CSV.
nlohmann::json to_json(const StationaryResult& result);

/// `dt,error,observed_order`; the first row has an empty order.
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);
/// `j,t,norm_u`.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Non-finite doubles become JSON null.
nlohmann::json number_or_null(double value);

} // namespace adrsplit
