#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/LU>

namespace phs {

inline constexpr double kDefaultSingularityThreshold = 1e-12;

// Determinant as (sign, log|det|). sign == 0 iff a pivot was exactly zero, in
// which case log_abs == -inf.
struct SignedLogDet {
    int sign = 0;
    double log_abs = 0.0;

    // sign * exp(log_abs); may over/underflow for large matrices.
    double value() const;
};

// Product of pivot signs (including the row permutation parity) and sum of
// log|pivot| of a partial-pivoting LU factorization.
SignedLogDet signed_log_det(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu);
SignedLogDet signed_log_det(const Eigen::MatrixXd& matrix);

// Numerical nonsingularity summary of a square matrix.
struct MatrixDiagnostics {
    int det_sign = 0;
    double log_abs_det = 0.0;  // -inf when det_sign == 0
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double condition = 0.0;    // sigma_max / sigma_min, +inf when sigma_min == 0
    bool singular_verdict = true;
    double rel_threshold = kDefaultSingularityThreshold;

    std::string summary() const;
};

// Verdict: singular iff sigma_max == 0, sigma_min <= tau * sigma_max, or an
// exactly zero pivot was met. Throws InputError on non-square or non-finite input.
MatrixDiagnostics diagnostics(const Eigen::MatrixXd& matrix, double tau = kDefaultSingularityThreshold);

// Numerically singular linear system; carries the diagnostics that decided it.
class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(const std::string& what, MatrixDiagnostics diag)
        : std::runtime_error(what), diagnostics_(diag) {}

    const MatrixDiagnostics& diagnostics() const { return diagnostics_; }

private:
    MatrixDiagnostics diagnostics_;
};

}  // namespace phs
