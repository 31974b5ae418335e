#include "phs/domains.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "phs/errors.hpp"
#include "phs/format.hpp"
#include "phs/rng.hpp"

namespace phs {

double distance(const ConstVectorRef& a, const ConstVectorRef& b)
{
    double sum = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

namespace {

std::string join(const Eigen::VectorXd& v)
{
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

std::vector<double> parse_numbers(std::string_view text, std::string_view what)
{
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        auto token = text.substr(pos, comma - pos);
        while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
        while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value))
            throw InputError("invalid number '" + std::string(token) + "' in " + std::string(what));
        values.push_back(value);
        pos = comma + 1;
    }
    return values;
}

Eigen::VectorXd to_vector(const std::vector<double>& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void check_dim(int dim)
{
    if (dim < 1) throw InputError("dimension must be positive, got " + std::to_string(dim));
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain

Domain Domain::box(Eigen::VectorXd lower, Eigen::VectorXd upper)
{
    if (lower.size() != upper.size() || lower.size() < 1)
        throw InputError("box corners must have equal positive dimension");
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i]))
            throw InputError("box requires finite lower < upper on every axis");
    }
    const int dim = static_cast<int>(lower.size());
    return Domain(dim, Box{std::move(lower), std::move(upper)});
}

Domain Domain::ball(Eigen::VectorXd center, double radius)
{
    if (center.size() < 1) throw InputError("ball center must have positive dimension");
    if (!center.allFinite()) throw InputError("ball center must be finite");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("ball radius must be positive and finite");
    const int dim = static_cast<int>(center.size());
    return Domain(dim, Ball{std::move(center), radius});
}

Domain Domain::unit_box(int dim)
{
    check_dim(dim);
    return box(Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim));
}

Domain Domain::unit_ball(int dim)
{
    check_dim(dim);
    return ball(Eigen::VectorXd::Zero(dim), 1.0);
}

Domain Domain::parse(std::string_view spec, int dim)
{
    check_dim(dim);
    const std::string s = lower(spec);
    const auto colon = s.find(':');
    const std::string shape = s.substr(0, colon);
    if (colon == std::string::npos) {
        if (shape == "box") return unit_box(dim);
        if (shape == "ball") return unit_ball(dim);
        throw InputError("unrecognized domain spec '" + std::string(spec) + "'");
    }
    const auto values = parse_numbers(std::string_view(s).substr(colon + 1), "domain spec");
    const auto d = static_cast<std::size_t>(dim);
    if (shape == "box") {
        if (values.size() != 2 * d)
            throw InputError("box spec needs " + std::to_string(2 * d) + " numbers (lower corner, upper corner)");
        std::vector<double> lo(values.begin(), values.begin() + dim);
        std::vector<double> hi(values.begin() + dim, values.end());
        return box(to_vector(lo), to_vector(hi));
    }
    if (shape == "ball") {
        if (values.size() != d + 1)
            throw InputError("ball spec needs " + std::to_string(d + 1) + " numbers (center, radius)");
        std::vector<double> c(values.begin(), values.begin() + dim);
        return ball(to_vector(c), values.back());
    }
    throw InputError("unrecognized domain shape '" + shape + "'");
}

bool Domain::contains(const ConstVectorRef& x) const
{
    if (x.size() != dim_) return false;
    if (const auto* b = std::get_if<Box>(&shape_))
        return (x.array() >= b->lower.array()).all() && (x.array() <= b->upper.array()).all();
    const auto& ball = std::get<Ball>(shape_);
    return distance(x, ball.center) <= ball.radius;
}

std::string Domain::to_string() const
{
    if (const auto* b = std::get_if<Box>(&shape_)) return "box:" + join(b->lower) + "," + join(b->upper);
    const auto& ball = std::get<Ball>(shape_);
    return "ball:" + join(ball.center) + "," + format_double(ball.radius);
}

// ---------------------------------------------------------------------------
// Density

Density Density::truncated_gaussian(Eigen::VectorXd mean, Eigen::VectorXd sd)
{
    if (mean.size() != sd.size() || mean.size() < 1) throw InputError("gaussian mean and sd must have equal dimension");
    if (!mean.allFinite() || !sd.allFinite() || (sd.array() <= 0.0).any())
        throw InputError("gaussian requires finite mean and positive sd");
    return Density(TruncatedGaussianDensity{std::move(mean), std::move(sd)});
}

Density Density::custom(std::function<double(const ConstVectorRef&)> fn, double bound, std::string label)
{
    if (!fn) throw InputError("custom density requires a callable");
    if (!(bound > 0.0) || !std::isfinite(bound)) throw InputError("custom density bound M must be positive and finite");
    return Density(CustomDensity{std::move(fn), bound, std::move(label)});
}

Density Density::parse(std::string_view spec, int dim)
{
    check_dim(dim);
    const std::string s = lower(spec);
    if (s == "uniform") return uniform();
    if (s.rfind("gauss:", 0) != 0) throw InputError("unrecognized density spec '" + std::string(spec) + "'");

    std::vector<double> mu;
    std::vector<double> sd;
    std::vector<double>* current = nullptr;
    std::string_view rest = std::string_view(s).substr(6);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        auto comma = rest.find(',', pos);
        if (comma == std::string_view::npos) comma = rest.size();
        std::string_view token = rest.substr(pos, comma - pos);
        if (token.rfind("mu=", 0) == 0) {
            current = &mu;
            token.remove_prefix(3);
        } else if (token.rfind("sd=", 0) == 0) {
            current = &sd;
            token.remove_prefix(3);
        }
        if (!current) throw InputError("gauss spec must start with mu= or sd=");
        const auto parsed = parse_numbers(token, "gauss spec");
        current->insert(current->end(), parsed.begin(), parsed.end());
        pos = comma + 1;
    }
    auto broadcast = [dim](std::vector<double> v, const char* name) {
        if (v.size() == 1) v.assign(static_cast<std::size_t>(dim), v.front());
        if (v.size() != static_cast<std::size_t>(dim))
            throw InputError(std::string("gauss ") + name + " needs 1 or " + std::to_string(dim) + " values");
        return v;
    };
    return truncated_gaussian(to_vector(broadcast(mu, "mu")), to_vector(broadcast(sd, "sd")));
}

double Density::bound() const
{
    if (const auto* c = std::get_if<CustomDensity>(&variant_)) return c->bound;
    return 1.0;
}

double Density::operator()(const ConstVectorRef& x) const
{
    if (std::holds_alternative<UniformDensity>(variant_)) return 1.0;
    if (const auto* g = std::get_if<TruncatedGaussianDensity>(&variant_)) {
        const double q = ((x - g->mean).array() / g->sd.array()).square().sum();
        return std::exp(-0.5 * q);
    }
    return std::get<CustomDensity>(variant_).fn(x);
}

std::string Density::to_string() const
{
    if (std::holds_alternative<UniformDensity>(variant_)) return "uniform";
    if (const auto* g = std::get_if<TruncatedGaussianDensity>(&variant_))
        return "gauss:mu=" + join(g->mean) + ",sd=" + join(g->sd);
    const auto& c = std::get<CustomDensity>(variant_);
    return c.label + ":M=" + format_double(c.bound);
}

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet(Eigen::MatrixXd coords, Provenance provenance)
    : coords_(std::move(coords)), provenance_(std::move(provenance))
{
}

double PointSet::min_pairwise_distance() const
{
    if (!min_distance_) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 1; j < coords_.cols(); ++j)
            for (Eigen::Index i = 0; i < j; ++i)
                best = std::min(best, distance(coords_.col(i), coords_.col(j)));
        min_distance_ = best;
    }
    return *min_distance_;
}

PointSet PointSet::permuted(const std::vector<int>& order) const
{
    if (order.size() != static_cast<std::size_t>(size())) throw InputError("permutation length mismatch");
    Eigen::MatrixXd out(dim(), size());
    for (int i = 0; i < size(); ++i) out.col(i) = coords_.col(order[static_cast<std::size_t>(i)]);
    return PointSet(std::move(out), provenance_);
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

Eigen::VectorXd propose_uniform(const Domain& domain, RandomStream& rng)
{
    const int d = domain.dim();
    Eigen::VectorXd x(d);
    if (domain.is_box()) {
        const auto& b = domain.as_box();
        for (int i = 0; i < d; ++i) x[i] = b.lower[i] + (b.upper[i] - b.lower[i]) * rng.uniform_open();
        return x;
    }
    const auto& ball = domain.as_ball();
    Eigen::VectorXd dir(d);
    double norm = 0.0;
    do {
        for (int i = 0; i < d; ++i) dir[i] = rng.normal();
        norm = dir.norm();
    } while (norm == 0.0);
    dir /= norm;
    const double radius = ball.radius * std::pow(rng.uniform_open(), 1.0 / d);
    return ball.center + radius * dir;
}

}  // namespace

PointSet sample(const Domain& domain, const Density& density, int n, std::uint64_t seed,
                const SampleOptions& options)
{
    if (n < 1) throw InputError("sample size must be at least 1, got " + std::to_string(n));
    RandomStream rng(seed);
    Eigen::MatrixXd coords(domain.dim(), n);
    const double bound = density.bound();
    const std::uint64_t budget = options.max_proposals_per_point * static_cast<std::uint64_t>(n);
    std::uint64_t proposals = 0;

    for (int i = 0; i < n; ++i) {
        if (density.is_uniform()) {
            coords.col(i) = propose_uniform(domain, rng);
            continue;
        }
        for (;;) {
            if (proposals++ >= budget)
                throw SamplingError("rejection sampling exceeded " + std::to_string(budget) +
                                    " proposals; the density bound M=" + format_double(bound) +
                                    " is suspect (too loose, or density ~0 on the domain)");
            Eigen::VectorXd x = propose_uniform(domain, rng);
            const double value = density(x);
            if (!std::isfinite(value) || value < 0.0)
                throw SamplingError("density returned invalid value " + format_double(value));
            if (value > bound)
                throw SamplingError("density value " + format_double(value) + " exceeds declared bound M=" +
                                    format_double(bound));
            if (rng.uniform_open() * bound < value) {
                coords.col(i) = x;
                break;
            }
        }
    }
    return PointSet(std::move(coords), RandomProvenance{seed, density.to_string(), domain.to_string()});
}

PointSet sphere_counterexample(int dim, int n, const Eigen::VectorXd& center)
{
    if (dim < 2) throw InputError("sphere counterexample needs dimension >= 2");
    if (n < 2) throw InputError("sphere counterexample needs n >= 2 (center plus at least one point)");
    if (center.size() != dim || !center.allFinite()) throw InputError("center must be a finite vector of length dim");

    Eigen::MatrixXd coords(dim, n);
    coords.col(0) = center;
    int placed = 1;

    // Axis offsets are exact: (c + 1) - c == 1 is not guaranteed for every c,
    // so even these are verified below.
    auto accept = [&](const Eigen::VectorXd& p) {
        if (distance(p, center) != 1.0) return false;
        for (int j = 0; j < placed; ++j)
            if (distance(p, coords.col(j)) == 0.0) return false;
        coords.col(placed++) = p;
        return true;
    };

    for (int sign : {1, -1}) {
        for (int axis = 0; axis < dim && placed < n; ++axis) {
            Eigen::VectorXd p = center;
            p[axis] += sign;
            accept(p);
        }
    }

    constexpr int kCandidatesPerPoint = 1000;
    RandomStream rng(mix_seed(0x5be5e0c0u, static_cast<std::uint64_t>(dim)));
    int attempts = 0;
    while (placed < n) {
        if (attempts++ >= kCandidatesPerPoint * n)
            throw ConstructionError("could not place " + std::to_string(n - 1) +
                                    " distinct points at exact unit distance from the center");
        Eigen::VectorXd u(dim);
        for (int i = 0; i < dim; ++i) u[i] = rng.normal();
        const double norm = u.norm();
        if (norm == 0.0) continue;
        u /= norm;
        // One Newton step for 1/sqrt(|u|^2) pulls |u| to within rounding of 1.
        u *= (3.0 - u.squaredNorm()) / 2.0;
        accept(center + u);
    }

    return PointSet(std::move(coords), DeterministicProvenance{"sphere-counterexample"});
}

PointSet duplicate_pair(int dim, std::uint64_t seed)
{
    check_dim(dim);
    RandomStream rng(seed);
    Eigen::MatrixXd coords(dim, 2);
    for (int i = 0; i < dim; ++i) coords(i, 0) = rng.uniform_open();
    coords.col(1) = coords.col(0);
    return PointSet(std::move(coords), DeterministicProvenance{"duplicate-pair"});
}

}  // namespace phs
