#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "phs/domains.hpp"

namespace phs {

struct PointData {
    PointSet points;
    std::optional<Eigen::VectorXd> values;
};

// CSV with header `x1,...,xd[,value]`, one point per row. Ragged rows,
// unparseable fields and non-finite numbers are rejected with InputError.
PointData read_points_csv(std::istream& in, const std::string& source = "<stream>");
PointData read_points_csv_file(const std::string& path);

void write_points_csv(std::ostream& out, const PointSet& points,
                      const Eigen::VectorXd* values = nullptr);

}  // namespace phs
