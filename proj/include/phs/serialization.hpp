#pragma once

#include <iosfwd>

#include <json.hpp>

#include "phs/diagnostics.hpp"
#include "phs/interpolation.hpp"
#include "phs/unisolvence.hpp"

namespace phs {

using Json = nlohmann::ordered_json;

// Non-finite values (log|det| = -inf, condition = +inf) are written as null.
Json number_or_null(double value);

Json to_json(const MatrixDiagnostics& diag);

// {kernel, epsilon, points, coefficients, tail{degree, coeffs} | null}
Json to_json(const InterpolationModel& model);
InterpolationModel model_from_json(const Json& doc);

// {config, exploratory, aggregates, records}
Json to_json(const UnisolvenceReport& report);

// Header: n,trial,det_sign,log_abs_det,sigma_min,sigma_max,condition,min_dist
void write_records_csv(std::ostream& out, const UnisolvenceReport& report);

Json to_json(const GrowthReport& report);
Json to_json(const ScaleCheckReport& report);

}  // namespace phs
