#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "phs/diagnostics.hpp"
#include "phs/domains.hpp"
#include "phs/kernels.hpp"

namespace phs {

// V = [phi(eps * |x_i - x_j|)], symmetric with an exactly zero diagonal.
struct InterpMatrix {
    Eigen::MatrixXd entries;
    Kernel kernel;
    double epsilon;
    PointSet points;
};

// Each off-diagonal entry is evaluated once and mirrored. Throws InputError on
// non-finite coordinates.
InterpMatrix assemble(const PointSet& points, const Kernel& kernel, double epsilon = 1.0);

// Rows are queries (columns of `queries`, d x m), columns are nodes: (m x n).
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& queries, const PointSet& nodes, const Kernel& kernel,
                              double epsilon = 1.0);

// Exponent vectors of all monomials of total degree <= `degree` in `dim`
// variables, graded lexicographic: 1 | x1..xd | x1^2, x1x2, .., xd^2 | ...
std::vector<std::vector<int>> monomial_exponents(int dim, int degree);

// dim of the polynomial space of total degree <= degree in `dim` variables.
int polynomial_space_dim(int dim, int degree);

// P with P(i, l) = p_l(x_i) for points stored column-wise (d x n).
Eigen::MatrixXd monomial_matrix(const Eigen::MatrixXd& points, int degree);

struct PolynomialTail {
    int degree = 0;
    Eigen::VectorXd coefficients;  // graded lexicographic order
};

// s(x) = sum_j c_j phi(eps |x - x_j|) + tail(x). Immutable once built.
class InterpolationModel {
public:
    InterpolationModel(PointSet points, Kernel kernel, double epsilon, Eigen::VectorXd coefficients,
                       std::optional<PolynomialTail> tail, std::optional<MatrixDiagnostics> diagnostics = {});

    const PointSet& points() const { return points_; }
    const Kernel& kernel() const { return kernel_; }
    double epsilon() const { return epsilon_; }
    const Eigen::VectorXd& coefficients() const { return coefficients_; }
    const std::optional<PolynomialTail>& tail() const { return tail_; }

    // Diagnostics of the matrix that was factored (V, or the saddle matrix
    // when augmented). Empty for models loaded from disk.
    const std::optional<MatrixDiagnostics>& diagnostics() const { return diagnostics_; }

    // One value per column of `queries` (d x m). Throws InputError on dimension mismatch.
    Eigen::VectorXd evaluate(const Eigen::MatrixXd& queries) const;

private:
    PointSet points_;
    Kernel kernel_;
    double epsilon_;
    Eigen::VectorXd coefficients_;
    std::optional<PolynomialTail> tail_;
    std::optional<MatrixDiagnostics> diagnostics_;
};

// Solves V c = f by partial-pivoting LU. Throws SingularSystemError when the
// diagnostics verdict says V is numerically singular.
InterpolationModel solve_unaugmented(const PointSet& points, const Eigen::VectorXd& values, const Kernel& kernel,
                                     double epsilon = 1.0, double tau = kDefaultSingularityThreshold);

// Solves [[V, P], [P^T, 0]] [c; b] = [f; 0]. `degree` defaults to m - 1 of the
// kernel. Throws AugmentationRankError when P is rank deficient and
// SingularSystemError when the saddle matrix is numerically singular.
InterpolationModel solve_augmented(const PointSet& points, const Eigen::VectorXd& values, const Kernel& kernel,
                                   double epsilon = 1.0, std::optional<int> degree = std::nullopt,
                                   double tau = kDefaultSingularityThreshold);

// Entry (q, j) is the j-th cardinal function of the unaugmented interpolant at
// query column q. Throws SingularSystemError on singular V.
Eigen::MatrixXd cardinal_values(const PointSet& points, const Kernel& kernel, double epsilon,
                                const Eigen::MatrixXd& queries, double tau = kDefaultSingularityThreshold);

// Lattice over the bounding box of `points` with about `budget` nodes.
Eigen::MatrixXd bounding_box_grid(const PointSet& points, int budget = 2500);

struct ScaleCheckReport {
    std::string kernel;
    std::optional<int> degree;
    std::vector<double> epsilons;
    std::vector<double> conditions;
    double max_interpolant_deviation = 0.0;          // relative to max |s| at the first scale
    std::optional<double> max_cardinal_deviation;    // unaugmented only
    double max_condition_deviation = 0.0;            // relative
    bool asserted = false;
    double bound = 0.0;
    bool passed = true;
    std::string regime;
};

// Interpolates the same data at every scale and compares interpolants on a
// fixed query grid. Bounds are asserted for radial powers (1e-9) and for
// thin-plate splines with tail degree >= k (1e-7); other cases are report-only.
ScaleCheckReport scale_invariance_check(const PointSet& points, const Eigen::VectorXd& values, const Kernel& kernel,
                                        const std::vector<double>& epsilons,
                                        std::optional<int> degree = std::nullopt,
                                        double tau = kDefaultSingularityThreshold);

// Smooth test function used when data values are not supplied.
double smooth_test_function(const ConstVectorRef& x);
Eigen::VectorXd sample_function(const PointSet& points);

}  // namespace phs
