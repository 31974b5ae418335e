#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace phs {

using ConstVectorRef = Eigen::Ref<const Eigen::VectorXd>;

// Euclidean distance, summed in coordinate order. Every distance in the
// library goes through here so that exact-distance constructions stay exact.
double distance(const ConstVectorRef& a, const ConstVectorRef& b);

struct Box {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

struct Ball {
    Eigen::VectorXd center;
    double radius = 1.0;
};

// Open connected sampling region: an axis-aligned box or a Euclidean ball.
class Domain {
public:
    static Domain box(Eigen::VectorXd lower, Eigen::VectorXd upper);
    static Domain ball(Eigen::VectorXd center, double radius);
    static Domain unit_box(int dim);
    static Domain unit_ball(int dim);

    // "box:l1,..,ld,u1,..,ud" or "ball:c1,..,cd,r"; `dim` fixes the arity.
    static Domain parse(std::string_view spec, int dim);

    int dim() const { return dim_; }
    bool is_box() const { return std::holds_alternative<Box>(shape_); }
    const Box& as_box() const { return std::get<Box>(shape_); }
    const Ball& as_ball() const { return std::get<Ball>(shape_); }

    // Closure membership test.
    bool contains(const ConstVectorRef& x) const;

    // One-dimensional domains sit outside the proven d >= 2 regime.
    bool exploratory() const { return dim_ < 2; }

    std::string to_string() const;

private:
    Domain(int dim, std::variant<Box, Ball> shape) : dim_(dim), shape_(std::move(shape)) {}

    int dim_;
    std::variant<Box, Ball> shape_;
};

struct UniformDensity {};

// Unnormalized exp(-|(x - mean) / sd|^2 / 2) restricted to the domain; bounded by 1.
struct TruncatedGaussianDensity {
    Eigen::VectorXd mean;
    Eigen::VectorXd sd;
};

// Caller-supplied density with an upper bound M over the domain. The bound is
// a contract; the sampler checks it at every proposal it evaluates.
struct CustomDensity {
    std::function<double(const ConstVectorRef&)> fn;
    double bound = 1.0;
    std::string label = "custom";
};

class Density {
public:
    static Density uniform() { return Density(UniformDensity{}); }
    static Density truncated_gaussian(Eigen::VectorXd mean, Eigen::VectorXd sd);
    static Density custom(std::function<double(const ConstVectorRef&)> fn, double bound,
                          std::string label = "custom");

    // "uniform" or "gauss:mu=a[,b..],sd=s[,t..]". Scalars broadcast to `dim`.
    static Density parse(std::string_view spec, int dim);

    bool is_uniform() const { return std::holds_alternative<UniformDensity>(variant_); }

    // Envelope constant M used by rejection sampling.
    double bound() const;
    double operator()(const ConstVectorRef& x) const;

    std::string to_string() const;

private:
    template <class T>
    explicit Density(T v) : variant_(std::move(v)) {}

    std::variant<UniformDensity, TruncatedGaussianDensity, CustomDensity> variant_;
};

struct RandomProvenance {
    std::uint64_t seed = 0;
    std::string density;
    std::string domain;
};

struct DeterministicProvenance {
    std::string label;
};

struct FileProvenance {
    std::string path;
};

using Provenance = std::variant<RandomProvenance, DeterministicProvenance, FileProvenance>;

// Ordered point list in R^d stored column-wise (column i is point i).
class PointSet {
public:
    PointSet(Eigen::MatrixXd coords, Provenance provenance);

    int size() const { return static_cast<int>(coords_.cols()); }
    int dim() const { return static_cast<int>(coords_.rows()); }

    const Eigen::MatrixXd& coords() const { return coords_; }
    auto point(int i) const { return coords_.col(i); }

    // Exact minimum over all pairs; +inf when fewer than two points. Computed
    // on first use and cached, so concurrent first calls on one object race.
    double min_pairwise_distance() const;

    const Provenance& provenance() const { return provenance_; }

    // Same points, reordered: result point i is this->point(order[i]).
    PointSet permuted(const std::vector<int>& order) const;

private:
    Eigen::MatrixXd coords_;
    mutable std::optional<double> min_distance_;
    Provenance provenance_;
};

struct SampleOptions {
    // Rejection budget per requested point.
    std::uint64_t max_proposals_per_point = 1'000'000;
};

// n i.i.d. points from `density` restricted to `domain`. Deterministic in
// (domain, density, n, seed).
PointSet sample(const Domain& domain, const Density& density, int n, std::uint64_t seed,
                const SampleOptions& options = {});

// `center` followed by n-1 distinct points at floating-point distance exactly
// 1 from it: +e_1..+e_d, then -e_1..-e_d, then normalized pseudo-random directions.
PointSet sphere_counterexample(int dim, int n, const Eigen::VectorXd& center);

// Two copies of one random point in the unit box.
PointSet duplicate_pair(int dim, std::uint64_t seed);

}  // namespace phs
