#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "phs/diagnostics.hpp"
#include "phs/domains.hpp"
#include "phs/interpolation.hpp"
#include "phs/kernels.hpp"

namespace phs {

// a12 a23 a31 + a13 a21 a32: the determinant of a 3x3 matrix with zero
// diagonal. Throws DomainError if any diagonal entry is nonzero.
double det3_null_diag(const Eigen::Matrix3d& a);

// Reason a (kernel, dimension) pair lies outside the proven regime, if it does:
// univariate sampling, or a radial power with odd integer exponent above 3.
std::optional<std::string> exploratory_reason(const Kernel& kernel, int dim);

// V_n bordered by Phi_n(x) = [phi(eps |x - x_1|), ..., phi(eps |x - x_n|)]:
//
//            | V_n        Phi_n(x)^T |
//   U(x) =   |                       |
//            | Phi_n(x)   0          |
//
// f_n(x) = det U(x). The base factorization is computed once.
class BorderedSystem {
public:
    explicit BorderedSystem(InterpMatrix base, double tau = kDefaultSingularityThreshold);
    BorderedSystem(const PointSet& points, const Kernel& kernel, double epsilon = 1.0,
                   double tau = kDefaultSingularityThreshold);

    const InterpMatrix& base() const { return base_; }
    const MatrixDiagnostics& base_diagnostics() const { return base_diag_; }
    int size() const { return base_.points.size(); }

    Eigen::VectorXd border(const ConstVectorRef& x) const;
    Eigen::MatrixXd bordered_matrix(const ConstVectorRef& x) const;

    // Block identity det U = det V * (-Phi V^-1 Phi^T); needs a nonsingular base.
    bool schur_applicable() const { return !base_diag_.singular_verdict; }
    SignedLogDet f_n_schur(const ConstVectorRef& x) const;

    // Partial-pivoting LU of the full (n+1) x (n+1) matrix.
    SignedLogDet f_n_direct(const ConstVectorRef& x) const;

    // Schur path when applicable, direct path otherwise.
    SignedLogDet f_n_signed(const ConstVectorRef& x) const;
    double f_n(const ConstVectorRef& x) const { return f_n_signed(x).value(); }

private:
    void check_point(const ConstVectorRef& x) const;

    InterpMatrix base_;
    MatrixDiagnostics base_diag_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    SignedLogDet base_det_;
};

struct GridSpec {
    double x_min = 0.0;
    double x_max = 1.0;
    int nx = 101;
    double y_min = 0.0;
    double y_max = 1.0;
    int ny = 101;

    double x(int i) const { return nx == 1 ? x_min : x_min + (x_max - x_min) * i / (nx - 1); }
    double y(int j) const { return ny == 1 ? y_min : y_min + (y_max - y_min) * j / (ny - 1); }
};

// values(j, i) = f_n(x(i), y(j)).
struct FieldGrid {
    GridSpec grid;
    Eigen::MatrixXd values;
};

// Planar systems only; throws InputError otherwise.
FieldGrid f_n_grid(const BorderedSystem& system, const GridSpec& grid);

// ---------------------------------------------------------------------------
// Monte Carlo harness

struct MonteCarloConfig {
    Kernel kernel;
    double epsilon = 1.0;
    Domain domain;
    Density density;
    std::vector<int> n_list;
    int trials = 1;
    std::uint64_t seed = 0;
    double tau = kDefaultSingularityThreshold;
    // Worker count; 0 means hardware concurrency. Results do not depend on it.
    int threads = 0;
};

struct TrialRecord {
    int n = 0;
    int trial = 0;
    int det_sign = 0;
    double log_abs_det = 0.0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double condition = 0.0;
    double min_pairwise_distance = 0.0;
    bool singular = false;
};

struct SizeAggregate {
    int n = 0;
    int failures = 0;
    double failure_rate = 0.0;
    double min_sigma_ratio = 0.0;  // min over trials of sigma_min / sigma_max
    double max_condition = 0.0;
};

struct UnisolvenceReport {
    MonteCarloConfig config;
    std::optional<std::string> exploratory;
    std::vector<TrialRecord> records;  // n-list order, then trial index
    std::vector<SizeAggregate> aggregates;

    int total_failures() const;
};

// Points for trial t at size n come from substream mix_seed(seed, n, t).
// Singular matrices are recorded, never thrown; sampling errors propagate.
UnisolvenceReport monte_carlo(const MonteCarloConfig& config);

struct GrowthConfig {
    Kernel kernel;
    double epsilon = 1.0;
    Domain domain;
    Density density;
    int n_max = 10;
    std::uint64_t seed = 0;
    double tau = kDefaultSingularityThreshold;
};

struct GrowthStep {
    int n = 0;                            // size of the base system V_n
    std::optional<SignedLogDet> schur;    // f_n(x_{n+1}) by the block identity
    SignedLogDet direct;                  // f_n(x_{n+1}) by full factorization
    SignedLogDet det_next;                // det V_{n+1} assembled from scratch
    double base_condition = 0.0;
    double rel_disagreement = 0.0;        // between f_n(x_{n+1}) and det V_{n+1}
    bool ill_conditioned = false;         // rel_disagreement > 1e-6
    bool singular_next = false;           // tau-verdict on V_{n+1}
};

struct GrowthReport {
    GrowthConfig config;
    std::vector<GrowthStep> steps;  // n = 1 .. n_max - 1
    std::vector<int> sign_chain;    // det sign of V_2 .. V_{n_max}
};

inline constexpr double kGrowthDisagreementFlag = 1e-6;

// Relative difference |a - b| / max(|a|, |b|) of two signed determinants.
double relative_difference(const SignedLogDet& a, const SignedLogDet& b);

// Adds one random point at a time and checks f_n(x_{n+1}) = det V_{n+1}.
GrowthReport incremental_growth(const GrowthConfig& config);

}  // namespace phs
