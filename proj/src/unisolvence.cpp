#include "phs/unisolvence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "phs/errors.hpp"
#include "phs/format.hpp"
#include "phs/rng.hpp"

namespace phs {

double det3_null_diag(const Eigen::Matrix3d& a)
{
    if (a(0, 0) != 0.0 || a(1, 1) != 0.0 || a(2, 2) != 0.0)
        throw DomainError("det3_null_diag requires an exactly zero diagonal");
    return a(0, 1) * a(1, 2) * a(2, 0) + a(0, 2) * a(1, 0) * a(2, 1);
}

std::optional<std::string> exploratory_reason(const Kernel& kernel, int dim)
{
    if (dim < 2) return "univariate sampling (d=1): outside the proven d >= 2 regime";
    if (kernel.is_rp() && kernel.info().is_odd_integer_rp && kernel.rp_nu() > 3.0)
        return "radial power with odd integer exponent > 3: open case";
    return std::nullopt;
}

double relative_difference(const SignedLogDet& a, const SignedLogDet& b)
{
    if (a.sign == 0 && b.sign == 0) return 0.0;
    if (a.sign == 0 || b.sign == 0) return 1.0;
    const double hi = std::max(a.log_abs, b.log_abs);
    const double lo = std::min(a.log_abs, b.log_abs);
    return a.sign == b.sign ? std::abs(std::expm1(lo - hi)) : 1.0 + std::exp(lo - hi);
}

// ---------------------------------------------------------------------------
// BorderedSystem

BorderedSystem::BorderedSystem(InterpMatrix base, double tau)
    : base_(std::move(base)), base_diag_(diagnostics(base_.entries, tau)), lu_(base_.entries),
      base_det_(signed_log_det(lu_))
{
}

BorderedSystem::BorderedSystem(const PointSet& points, const Kernel& kernel, double epsilon, double tau)
    : BorderedSystem(assemble(points, kernel, epsilon), tau)
{
}

void BorderedSystem::check_point(const ConstVectorRef& x) const
{
    if (x.size() != base_.points.dim())
        throw InputError("bordering point has dimension " + std::to_string(x.size()) + ", expected " +
                         std::to_string(base_.points.dim()));
    if (!x.allFinite()) throw InputError("bordering point must be finite");
}

Eigen::VectorXd BorderedSystem::border(const ConstVectorRef& x) const
{
    check_point(x);
    const int n = size();
    Eigen::VectorXd phi(n);
    for (int j = 0; j < n; ++j)
        phi[j] = base_.kernel.eval_scaled(base_.epsilon, distance(x, base_.points.point(j)));
    return phi;
}

Eigen::MatrixXd BorderedSystem::bordered_matrix(const ConstVectorRef& x) const
{
    const int n = size();
    const Eigen::VectorXd phi = border(x);
    Eigen::MatrixXd u(n + 1, n + 1);
    u.topLeftCorner(n, n) = base_.entries;
    u.topRightCorner(n, 1) = phi;
    u.bottomLeftCorner(1, n) = phi.transpose();
    u(n, n) = 0.0;
    return u;
}

SignedLogDet BorderedSystem::f_n_schur(const ConstVectorRef& x) const
{
    if (!schur_applicable())
        throw SingularSystemError("Schur path needs a nonsingular base matrix: " + base_diag_.summary(), base_diag_);
    const Eigen::VectorXd phi = border(x);
    const double schur = -phi.dot(lu_.solve(phi));
    if (schur == 0.0) return {0, -std::numeric_limits<double>::infinity()};
    return {base_det_.sign * (schur > 0.0 ? 1 : -1), base_det_.log_abs + std::log(std::abs(schur))};
}

SignedLogDet BorderedSystem::f_n_direct(const ConstVectorRef& x) const
{
    return signed_log_det(bordered_matrix(x));
}

SignedLogDet BorderedSystem::f_n_signed(const ConstVectorRef& x) const
{
    return schur_applicable() ? f_n_schur(x) : f_n_direct(x);
}

FieldGrid f_n_grid(const BorderedSystem& system, const GridSpec& grid)
{
    if (system.base().points.dim() != 2) throw InputError("f_n grids are defined for planar (d=2) systems only");
    if (grid.nx < 1 || grid.ny < 1) throw InputError("grid needs at least one node per axis");
    FieldGrid field{grid, Eigen::MatrixXd(grid.ny, grid.nx)};
    Eigen::Vector2d x;
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            x << grid.x(i), grid.y(j);
            field.values(j, i) = system.f_n(x);
        }
    }
    return field;
}

// ---------------------------------------------------------------------------
// Monte Carlo

int UnisolvenceReport::total_failures() const
{
    int total = 0;
    for (const auto& a : aggregates) total += a.failures;
    return total;
}

namespace {

TrialRecord run_trial(const MonteCarloConfig& config, int n, int trial)
{
    const std::uint64_t stream = mix_seed(config.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial));
    const PointSet points = sample(config.domain, config.density, n, stream);
    const MatrixDiagnostics diag = diagnostics(assemble(points, config.kernel, config.epsilon).entries, config.tau);

    TrialRecord record;
    record.n = n;
    record.trial = trial;
    record.det_sign = diag.det_sign;
    record.log_abs_det = diag.log_abs_det;
    record.sigma_min = diag.sigma_min;
    record.sigma_max = diag.sigma_max;
    record.condition = diag.condition;
    record.min_pairwise_distance = points.min_pairwise_distance();
    record.singular = diag.singular_verdict;
    return record;
}

}  // namespace

UnisolvenceReport monte_carlo(const MonteCarloConfig& config)
{
    if (config.trials < 1) throw InputError("monte carlo needs at least one trial");
    if (config.n_list.empty()) throw InputError("monte carlo needs a nonempty list of sizes");
    for (int n : config.n_list)
        if (n < 1) throw InputError("matrix sizes must be positive, got " + std::to_string(n));

    const std::size_t trials = static_cast<std::size_t>(config.trials);
    const std::size_t jobs = config.n_list.size() * trials;
    std::vector<TrialRecord> records(jobs);
    std::vector<std::exception_ptr> errors(jobs);

    unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::min<std::size_t>(jobs, 256)));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t job = next++; job < jobs; job = next++) {
            const int n = config.n_list[job / trials];
            const int trial = static_cast<int>(job % trials);
            try {
                records[job] = run_trial(config, n, trial);
            } catch (...) {
                errors[job] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    UnisolvenceReport report{config, exploratory_reason(config.kernel, config.domain.dim()), std::move(records), {}};
    for (std::size_t k = 0; k < config.n_list.size(); ++k) {
        SizeAggregate agg;
        agg.n = config.n_list[k];
        agg.min_sigma_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < trials; ++t) {
            const auto& r = report.records[k * trials + t];
            if (r.singular) ++agg.failures;
            const double ratio = r.sigma_max > 0.0 ? r.sigma_min / r.sigma_max : 0.0;
            agg.min_sigma_ratio = std::min(agg.min_sigma_ratio, ratio);
            agg.max_condition = std::max(agg.max_condition, r.condition);
        }
        agg.failure_rate = static_cast<double>(agg.failures) / static_cast<double>(trials);
        report.aggregates.push_back(agg);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Incremental growth

GrowthReport incremental_growth(const GrowthConfig& config)
{
    if (config.n_max < 2) throw InputError("incremental growth needs n_max >= 2");
    const PointSet all = sample(config.domain, config.density, config.n_max, config.seed);

    GrowthReport report{config, {}, {}};
    for (int n = 1; n < config.n_max; ++n) {
        const PointSet base(all.coords().leftCols(n), all.provenance());
        const PointSet next(all.coords().leftCols(n + 1), all.provenance());
        const BorderedSystem system(base, config.kernel, config.epsilon, config.tau);
        const auto incoming = all.point(n);

        GrowthStep step;
        step.n = n;
        step.base_condition = system.base_diagnostics().condition;
        if (system.schur_applicable()) step.schur = system.f_n_schur(incoming);
        step.direct = system.f_n_direct(incoming);

        const MatrixDiagnostics next_diag = diagnostics(assemble(next, config.kernel, config.epsilon).entries, config.tau);
        step.det_next = {next_diag.det_sign, next_diag.log_abs_det};
        step.singular_next = next_diag.singular_verdict;
        step.rel_disagreement = relative_difference(step.schur.value_or(step.direct), step.det_next);
        step.ill_conditioned = step.rel_disagreement > kGrowthDisagreementFlag;

        report.sign_chain.push_back(step.det_next.sign);
        report.steps.push_back(step);
    }
    return report;
}

}  // namespace phs
