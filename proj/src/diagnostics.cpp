#include "phs/diagnostics.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "phs/errors.hpp"
#include "phs/format.hpp"

namespace phs {

double SignedLogDet::value() const
{
    if (sign == 0) return 0.0;
    return sign * std::exp(log_abs);
}

SignedLogDet signed_log_det(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu)
{
    const auto& factors = lu.matrixLU();
    SignedLogDet out;
    out.sign = static_cast<int>(lu.permutationP().determinant());
    out.log_abs = 0.0;
    for (Eigen::Index i = 0; i < factors.rows(); ++i) {
        const double pivot = factors(i, i);
        if (pivot == 0.0) return {0, -std::numeric_limits<double>::infinity()};
        if (pivot < 0.0) out.sign = -out.sign;
        out.log_abs += std::log(std::abs(pivot));
    }
    return out;
}

SignedLogDet signed_log_det(const Eigen::MatrixXd& matrix)
{
    if (matrix.rows() != matrix.cols()) throw InputError("determinant of a non-square matrix");
    if (matrix.size() == 0) return {1, 0.0};
    return signed_log_det(Eigen::PartialPivLU<Eigen::MatrixXd>(matrix));
}

MatrixDiagnostics diagnostics(const Eigen::MatrixXd& matrix, double tau)
{
    if (matrix.rows() != matrix.cols() || matrix.size() == 0)
        throw InputError("diagnostics require a non-empty square matrix");
    if (!matrix.allFinite()) throw InputError("diagnostics require finite matrix entries");
    if (!(tau > 0.0)) throw InputError("singularity threshold must be positive");

    MatrixDiagnostics d;
    d.rel_threshold = tau;

    const SignedLogDet det = signed_log_det(matrix);
    d.det_sign = det.sign;
    d.log_abs_det = det.log_abs;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix);
    const auto& sv = svd.singularValues();
    d.sigma_max = sv.maxCoeff();
    d.sigma_min = sv.minCoeff();
    d.condition = d.sigma_min > 0.0 ? d.sigma_max / d.sigma_min : std::numeric_limits<double>::infinity();
    d.singular_verdict = d.sigma_max == 0.0 || d.sigma_min <= tau * d.sigma_max || d.det_sign == 0;
    return d;
}

std::string MatrixDiagnostics::summary() const
{
    return "det_sign=" + std::to_string(det_sign) + " log|det|=" + format_double(log_abs_det) +
           " sigma_min=" + format_double(sigma_min) + " sigma_max=" + format_double(sigma_max) +
           " cond=" + format_double(condition) + " tau=" + format_double(rel_threshold) +
           (singular_verdict ? " (singular)" : " (nonsingular)");
}

}  // namespace phs
