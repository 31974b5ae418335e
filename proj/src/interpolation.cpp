#include "phs/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "phs/errors.hpp"
#include "phs/format.hpp"

namespace phs {

namespace {

void require_finite(const PointSet& points)
{
    if (!points.coords().allFinite()) throw InputError("point coordinates must be finite");
}

void require_values(const PointSet& points, const Eigen::VectorXd& values)
{
    if (values.size() != points.size())
        throw InputError("expected " + std::to_string(points.size()) + " data values, got " +
                         std::to_string(values.size()));
    if (!values.allFinite()) throw InputError("data values must be finite");
}

void require_epsilon(double epsilon)
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw DomainError("scale parameter must be positive and finite, got " + format_double(epsilon));
}

void append_exponents(int dim, int remaining, int axis, std::vector<int>& current,
                      std::vector<std::vector<int>>& out)
{
    if (axis == dim - 1) {
        current[static_cast<std::size_t>(axis)] = remaining;
        out.push_back(current);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        current[static_cast<std::size_t>(axis)] = e;
        append_exponents(dim, remaining - e, axis + 1, current, out);
    }
}

}  // namespace

InterpMatrix assemble(const PointSet& points, const Kernel& kernel, double epsilon)
{
    require_epsilon(epsilon);
    require_finite(points);
    const int n = points.size();
    if (n < 1) throw InputError("cannot assemble an empty point set");

    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            const double value = kernel.eval_scaled(epsilon, distance(points.point(i), points.point(j)));
            v(i, j) = value;
            v(j, i) = value;
        }
    }
    return {std::move(v), kernel, epsilon, points};
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& queries, const PointSet& nodes, const Kernel& kernel,
                              double epsilon)
{
    require_epsilon(epsilon);
    if (queries.rows() != nodes.dim())
        throw InputError("query dimension " + std::to_string(queries.rows()) + " does not match node dimension " +
                         std::to_string(nodes.dim()));
    if (!queries.allFinite()) throw InputError("query coordinates must be finite");
    Eigen::MatrixXd out(queries.cols(), nodes.size());
    for (int j = 0; j < nodes.size(); ++j)
        for (Eigen::Index q = 0; q < queries.cols(); ++q)
            out(q, j) = kernel.eval_scaled(epsilon, distance(queries.col(q), nodes.point(j)));
    return out;
}

std::vector<std::vector<int>> monomial_exponents(int dim, int degree)
{
    if (dim < 1 || degree < 0) throw InputError("monomial basis needs dim >= 1 and degree >= 0");
    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<std::size_t>(dim), 0);
    for (int total = 0; total <= degree; ++total) append_exponents(dim, total, 0, current, out);
    return out;
}

int polynomial_space_dim(int dim, int degree)
{
    // C(degree + dim, dim)
    long long result = 1;
    for (int i = 1; i <= dim; ++i) result = result * (degree + i) / i;
    return static_cast<int>(result);
}

Eigen::MatrixXd monomial_matrix(const Eigen::MatrixXd& points, int degree)
{
    const auto exponents = monomial_exponents(static_cast<int>(points.rows()), degree);
    Eigen::MatrixXd p(points.cols(), static_cast<Eigen::Index>(exponents.size()));
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
        for (std::size_t l = 0; l < exponents.size(); ++l) {
            double value = 1.0;
            for (Eigen::Index a = 0; a < points.rows(); ++a)
                for (int e = 0; e < exponents[l][static_cast<std::size_t>(a)]; ++e) value *= points(a, i);
            p(i, static_cast<Eigen::Index>(l)) = value;
        }
    }
    return p;
}

// ---------------------------------------------------------------------------

InterpolationModel::InterpolationModel(PointSet points, Kernel kernel, double epsilon, Eigen::VectorXd coefficients,
                                       std::optional<PolynomialTail> tail,
                                       std::optional<MatrixDiagnostics> diagnostics)
    : points_(std::move(points)), kernel_(kernel), epsilon_(epsilon), coefficients_(std::move(coefficients)),
      tail_(std::move(tail)), diagnostics_(diagnostics)
{
    require_epsilon(epsilon_);
    if (coefficients_.size() != points_.size()) throw InputError("coefficient count does not match point count");
    if (tail_ && tail_->coefficients.size() != polynomial_space_dim(points_.dim(), tail_->degree))
        throw InputError("tail coefficient count does not match its degree");
}

Eigen::VectorXd InterpolationModel::evaluate(const Eigen::MatrixXd& queries) const
{
    Eigen::VectorXd out = kernel_matrix(queries, points_, kernel_, epsilon_) * coefficients_;
    if (tail_) out += monomial_matrix(queries, tail_->degree) * tail_->coefficients;
    return out;
}

// ---------------------------------------------------------------------------

InterpolationModel solve_unaugmented(const PointSet& points, const Eigen::VectorXd& values, const Kernel& kernel,
                                     double epsilon, double tau)
{
    require_values(points, values);
    const InterpMatrix v = assemble(points, kernel, epsilon);
    const MatrixDiagnostics diag = diagnostics(v.entries, tau);
    if (diag.singular_verdict)
        throw SingularSystemError("interpolation matrix is numerically singular: " + diag.summary(), diag);
    Eigen::VectorXd c = Eigen::PartialPivLU<Eigen::MatrixXd>(v.entries).solve(values);
    return InterpolationModel(points, kernel, epsilon, std::move(c), std::nullopt, diag);
}

InterpolationModel solve_augmented(const PointSet& points, const Eigen::VectorXd& values, const Kernel& kernel,
                                   double epsilon, std::optional<int> degree, double tau)
{
    require_values(points, values);
    const int q = degree.value_or(kernel.info().cpd_order - 1);
    if (q < 0) throw InputError("polynomial degree must be nonnegative");
    const int n = points.size();
    const int terms = polynomial_space_dim(points.dim(), q);
    if (n < terms)
        throw AugmentationRankError("degree " + std::to_string(q) + " tail needs at least " + std::to_string(terms) +
                                    " points, got " + std::to_string(n));

    // Rank is affine invariant; test it on box-normalized coordinates so that
    // monomial scaling does not masquerade as deficiency.
    {
        const Eigen::VectorXd lo = points.coords().rowwise().minCoeff();
        const Eigen::VectorXd hi = points.coords().rowwise().maxCoeff();
        const Eigen::VectorXd width = (hi - lo).cwiseMax(std::numeric_limits<double>::min());
        Eigen::MatrixXd normalized =
            ((points.coords().colwise() - 0.5 * (lo + hi)).array().colwise() / (0.5 * width).array()).matrix();
        const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(monomial_matrix(normalized, q)).singularValues();
        if (sv.minCoeff() <= tau * sv.maxCoeff())
            throw AugmentationRankError("monomial matrix of degree " + std::to_string(q) +
                                        " is rank deficient: the points lie on an algebraic variety of degree <= " +
                                        std::to_string(q));
    }

    const InterpMatrix v = assemble(points, kernel, epsilon);
    const Eigen::MatrixXd p = monomial_matrix(points.coords(), q);
    Eigen::MatrixXd saddle = Eigen::MatrixXd::Zero(n + terms, n + terms);
    saddle.topLeftCorner(n, n) = v.entries;
    saddle.topRightCorner(n, terms) = p;
    saddle.bottomLeftCorner(terms, n) = p.transpose();

    const MatrixDiagnostics diag = diagnostics(saddle, tau);
    if (diag.singular_verdict)
        throw SingularSystemError("augmented interpolation matrix is numerically singular: " + diag.summary(), diag);

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + terms);
    rhs.head(n) = values;
    const Eigen::VectorXd sol = Eigen::PartialPivLU<Eigen::MatrixXd>(saddle).solve(rhs);
    return InterpolationModel(points, kernel, epsilon, sol.head(n), PolynomialTail{q, sol.tail(terms)}, diag);
}

Eigen::MatrixXd cardinal_values(const PointSet& points, const Kernel& kernel, double epsilon,
                                const Eigen::MatrixXd& queries, double tau)
{
    const InterpMatrix v = assemble(points, kernel, epsilon);
    const MatrixDiagnostics diag = diagnostics(v.entries, tau);
    if (diag.singular_verdict)
        throw SingularSystemError("interpolation matrix is numerically singular: " + diag.summary(), diag);
    const Eigen::MatrixXd phi = kernel_matrix(queries, points, kernel, epsilon);
    // V is symmetric, so Phi V^-1 = (V^-1 Phi^T)^T.
    return Eigen::PartialPivLU<Eigen::MatrixXd>(v.entries).solve(phi.transpose()).transpose();
}

Eigen::MatrixXd bounding_box_grid(const PointSet& points, int budget)
{
    const int d = points.dim();
    const int per_axis = std::max(2, static_cast<int>(std::floor(std::pow(static_cast<double>(budget), 1.0 / d))));
    const Eigen::VectorXd lo = points.coords().rowwise().minCoeff();
    const Eigen::VectorXd hi = points.coords().rowwise().maxCoeff();

    Eigen::Index total = 1;
    for (int a = 0; a < d; ++a) total *= per_axis;
    Eigen::MatrixXd grid(d, total);
    for (Eigen::Index idx = 0; idx < total; ++idx) {
        Eigen::Index rest = idx;
        for (int a = 0; a < d; ++a) {
            const auto step = rest % per_axis;
            rest /= per_axis;
            grid(a, idx) = lo[a] + (hi[a] - lo[a]) * static_cast<double>(step) / (per_axis - 1);
        }
    }
    return grid;
}

ScaleCheckReport scale_invariance_check(const PointSet& points, const Eigen::VectorXd& values, const Kernel& kernel,
                                        const std::vector<double>& epsilons, std::optional<int> degree, double tau)
{
    if (epsilons.size() < 2) throw InputError("scale check needs at least two scales");

    ScaleCheckReport report;
    report.kernel = kernel.to_string();
    report.degree = degree;
    report.epsilons = epsilons;

    if (kernel.is_rp()) {
        report.regime = degree ? "radial-power-augmented" : "radial-power";
        report.asserted = true;
        report.bound = 1e-9;
    } else if (degree && *degree >= kernel.tps_k()) {
        report.regime = "thin-plate-augmented";
        report.asserted = true;
        report.bound = 1e-7;
    } else {
        report.regime = degree ? "thin-plate-low-degree-tail" : "thin-plate-unaugmented";
        report.asserted = false;
    }

    const Eigen::MatrixXd grid = bounding_box_grid(points);
    Eigen::VectorXd reference;
    Eigen::MatrixXd reference_cardinal;
    double reference_condition = 0.0;

    for (std::size_t s = 0; s < epsilons.size(); ++s) {
        const double eps = epsilons[s];
        const InterpolationModel model = degree ? solve_augmented(points, values, kernel, eps, degree, tau)
                                                : solve_unaugmented(points, values, kernel, eps, tau);
        const double condition = diagnostics(assemble(points, kernel, eps).entries, tau).condition;
        report.conditions.push_back(condition);
        const Eigen::VectorXd interp = model.evaluate(grid);
        Eigen::MatrixXd cardinal;
        if (!degree) cardinal = cardinal_values(points, kernel, eps, grid, tau);

        if (s == 0) {
            reference = interp;
            reference_cardinal = cardinal;
            reference_condition = condition;
            continue;
        }
        const double scale = std::max(reference.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
        report.max_interpolant_deviation =
            std::max(report.max_interpolant_deviation, (interp - reference).cwiseAbs().maxCoeff() / scale);
        if (!degree) {
            const double cscale =
                std::max(reference_cardinal.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
            const double dev = (cardinal - reference_cardinal).cwiseAbs().maxCoeff() / cscale;
            report.max_cardinal_deviation = std::max(report.max_cardinal_deviation.value_or(0.0), dev);
        }
        report.max_condition_deviation =
            std::max(report.max_condition_deviation, std::abs(condition - reference_condition) / reference_condition);
    }

    if (report.asserted) {
        report.passed = report.max_interpolant_deviation <= report.bound &&
                        report.max_cardinal_deviation.value_or(0.0) <= report.bound;
    }
    return report;
}

double smooth_test_function(const ConstVectorRef& x)
{
    double r2 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) r2 += (x[i] - 0.3) * (x[i] - 0.3);
    return std::exp(-4.0 * r2) + 0.5 * std::sin(3.0 * x[0]) + 0.25 * std::cos(2.0 * x[x.size() - 1]);
}

Eigen::VectorXd sample_function(const PointSet& points)
{
    Eigen::VectorXd out(points.size());
    for (int i = 0; i < points.size(); ++i) out[i] = smooth_test_function(points.point(i));
    return out;
}

}  // namespace phs
