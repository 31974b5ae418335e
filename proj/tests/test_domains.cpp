#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "phs/domains.hpp"
#include "phs/errors.hpp"
#include "phs/interpolation.hpp"
#include "phs/point_io.hpp"
#include "phs/rng.hpp"

using namespace phs;

TEST_CASE("seeded sample golden values")
{
    const PointSet p = sample(Domain::unit_box(2), Density::uniform(), 4, 42);
    REQUIRE(p.size() == 4);
    REQUIRE(p.dim() == 2);
    // Recorded from std::mt19937_64(42) through uniform_open().
    const double golden[4][2] = {{0.755155532954539, 0.6390313938546974},
                                 {0.7521452007480267, 0.1362726836324371},
                                 {0.9032689664283784, 0.09406831176283709},
                                 {0.5745703041082639, 0.3728876994561849}};
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 2; ++i) CHECK(p.coords()(i, j) == golden[j][i]);
    for (int j = 0; j < 4; ++j) CHECK(Domain::unit_box(2).contains(p.point(j)));
    CHECK(p.min_pairwise_distance() > 0.0);
    CHECK(std::holds_alternative<RandomProvenance>(p.provenance()));
}

TEST_CASE("ball sample is inside the ball")
{
    const PointSet p = sample(Domain::unit_ball(3), Density::uniform(), 1, 7);
    CHECK(p.point(0).norm() < 1.0);

    const Domain ball = Domain::ball(Eigen::Vector2d(3.0, -1.0), 0.5);
    const PointSet many = sample(ball, Density::uniform(), 2000, 3);
    for (int j = 0; j < many.size(); ++j) CHECK(ball.contains(many.point(j)));
    // Uniform in the disk: E|x - c|^2 = r^2 / 2.
    double m2 = 0.0;
    for (int j = 0; j < many.size(); ++j) m2 += (many.point(j) - Eigen::Vector2d(3.0, -1.0)).squaredNorm();
    CHECK(m2 / many.size() == doctest::Approx(0.125).epsilon(0.05));
}

TEST_CASE("custom density first moment")
{
    // sigma(x) = 2 x1 on the unit square: E[x1] = integral of 2x^2 = 2/3.
    const Density linear = Density::custom([](const ConstVectorRef& x) { return 2.0 * x[0]; }, 2.0, "linear");
    const PointSet p = sample(Domain::unit_box(2), linear, 1000, 1);
    const double mean = p.coords().row(0).mean();
    CHECK(std::abs(mean - 2.0 / 3.0) < 0.03);
    CHECK(std::abs(p.coords().row(1).mean() - 0.5) < 0.03);
}

TEST_CASE("truncated gaussian sampling")
{
    const Density g = Density::parse("gauss:mu=0.5,sd=0.1", 2);
    const PointSet p = sample(Domain::unit_box(2), g, 4000, 11);
    CHECK(std::abs(p.coords().row(0).mean() - 0.5) < 0.01);
    const double var = (p.coords().row(0).array() - p.coords().row(0).mean()).square().mean();
    CHECK(std::sqrt(var) == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("uniform box means within three standard errors")
{
    const Domain box = Domain::parse("box:-1,2,3,4,5,3.5", 3);
    const int n = 100000;
    const PointSet p = sample(box, Density::uniform(), n, 2024);
    const auto& b = box.as_box();
    for (int axis = 0; axis < 3; ++axis) {
        const double width = b.upper[axis] - b.lower[axis];
        const double mid = 0.5 * (b.upper[axis] + b.lower[axis]);
        CHECK(std::abs(p.coords().row(axis).mean() - mid) <= 3.0 * width / std::sqrt(12.0 * n));
    }
}

TEST_CASE("sampling is deterministic")
{
    const Density g = Density::parse("gauss:mu=0.2,0.7,sd=0.3,0.2", 2);
    for (std::uint64_t seed : {0ULL, 1ULL, 0xdeadbeefULL}) {
        const PointSet a = sample(Domain::unit_ball(2), g, 50, seed);
        const PointSet b = sample(Domain::unit_ball(2), g, 50, seed);
        CHECK(a.coords() == b.coords());
    }
    CHECK(sample(Domain::unit_box(2), Density::uniform(), 5, 1).coords() !=
          sample(Domain::unit_box(2), Density::uniform(), 5, 2).coords());
}

TEST_CASE("random point sets are distinct and min distance is exact")
{
    for (int n : {2, 10, 100, 1000}) {
        for (int d : {1, 2, 3}) {
            const PointSet p = sample(Domain::unit_box(d), Density::uniform(), n, mix_seed(5, n, d));
            CHECK(p.min_pairwise_distance() > 0.0);
            if (n <= 100) CHECK(p.min_pairwise_distance() == doctest::Approx(oracle::min_distance(p.coords())).epsilon(1e-14));
        }
    }
    CHECK(std::isinf(sample(Domain::unit_box(2), Density::uniform(), 1, 0).min_pairwise_distance()));
}

TEST_CASE("sampling errors")
{
    CHECK_THROWS_AS(sample(Domain::unit_box(2), Density::uniform(), 0, 1), InputError);

    // Zero density: every proposal is rejected and the budget runs out.
    const Density zero = Density::custom([](const ConstVectorRef&) { return 0.0; }, 1.0);
    try {
        sample(Domain::unit_box(2), zero, 2, 1, SampleOptions{10});
        FAIL("expected SamplingError");
    } catch (const SamplingError& e) {
        CHECK(std::string(e.what()).find("bound") != std::string::npos);
    }

    // Density above its declared bound violates the caller contract.
    const Density liar = Density::custom([](const ConstVectorRef&) { return 3.0; }, 1.0);
    CHECK_THROWS_AS(sample(Domain::unit_box(2), liar, 1, 1), SamplingError);
    const Density negative = Density::custom([](const ConstVectorRef&) { return -1.0; }, 1.0);
    CHECK_THROWS_AS(sample(Domain::unit_box(2), negative, 1, 1), SamplingError);
}

TEST_CASE("domain and density specs")
{
    const Domain b = Domain::parse("box:0,0,1,2", 2);
    CHECK(b.as_box().upper[1] == 2.0);
    CHECK(Domain::parse(b.to_string(), 2).to_string() == b.to_string());
    const Domain ball = Domain::parse("ball:1,2,3,0.5", 3);
    CHECK(ball.as_ball().radius == 0.5);
    CHECK(Domain::parse("box", 4).dim() == 4);
    CHECK(Domain::parse("box", 1).exploratory());
    CHECK_FALSE(Domain::parse("box", 2).exploratory());

    CHECK_THROWS_AS(Domain::parse("box:0,0,1", 2), InputError);
    CHECK_THROWS_AS(Domain::parse("box:1,0,0,1", 2), InputError);
    CHECK_THROWS_AS(Domain::parse("ball:0,0,-1", 2), InputError);
    CHECK_THROWS_AS(Domain::parse("torus:1", 2), InputError);

    CHECK(Density::parse("uniform", 2).to_string() == "uniform");
    const Density g = Density::parse("gauss:mu=0.5,sd=0.2", 2);
    CHECK(g.to_string() == "gauss:mu=0.5,0.5,sd=0.2,0.2");
    CHECK(Density::parse(g.to_string(), 2).to_string() == g.to_string());
    CHECK_THROWS_AS(Density::parse("gauss:mu=0.5,sd=0", 2), InputError);
    CHECK_THROWS_AS(Density::parse("gauss:mu=1,2,3,sd=1", 2), InputError);
    CHECK_THROWS_AS(Density::parse("beta", 2), InputError);
}

TEST_CASE("sphere counterexample construction")
{
    SUBCASE("planar, three points")
    {
        const PointSet p = sphere_counterexample(2, 3, Eigen::Vector2d::Zero());
        Eigen::MatrixXd want(2, 3);
        want << 0, 1, 0, 0, 0, 1;
        CHECK(p.coords() == want);
    }
    SUBCASE("planar, five points")
    {
        const PointSet p = sphere_counterexample(2, 5, Eigen::Vector2d::Zero());
        Eigen::MatrixXd want(2, 5);
        want << 0, 1, 0, -1, 0, 0, 0, 1, 0, -1;
        CHECK(p.coords() == want);
    }
    SUBCASE("shifted center in 3D")
    {
        const PointSet p = sphere_counterexample(3, 4, Eigen::Vector3d::Ones());
        Eigen::MatrixXd want(3, 4);
        want << 1, 2, 1, 1, 1, 1, 2, 1, 1, 1, 1, 2;
        CHECK(p.coords() == want);
    }
    SUBCASE("exact unit distances beyond the axis directions")
    {
        for (int d : {2, 3, 5}) {
            for (int n : {2, 9, 2 * d + 1, 2 * d + 2, 40}) {
                for (const Eigen::VectorXd& c :
                     {Eigen::VectorXd(Eigen::VectorXd::Zero(d)), Eigen::VectorXd(Eigen::VectorXd::Constant(d, 0.3))}) {
                    const PointSet p = sphere_counterexample(d, n, c);
                    REQUIRE(p.size() == n);
                    CHECK(p.coords().col(0) == c);
                    for (int j = 1; j < n; ++j) CHECK(distance(p.point(j), c) == 1.0);
                    CHECK(p.min_pairwise_distance() > 0.0);
                }
            }
        }
    }
    CHECK_THROWS_AS(sphere_counterexample(2, 1, Eigen::Vector2d::Zero()), InputError);
    CHECK_THROWS_AS(sphere_counterexample(1, 3, Eigen::VectorXd::Zero(1)), InputError);
    CHECK_THROWS_AS(sphere_counterexample(2, 3, Eigen::Vector3d::Zero()), InputError);
}

TEST_CASE("duplicate pair")
{
    for (auto [d, seed] : {std::pair{2, 0ULL}, std::pair{5, 9ULL}}) {
        const PointSet p = duplicate_pair(d, seed);
        CHECK(p.size() == 2);
        CHECK(p.dim() == d);
        CHECK(p.coords().col(0) == p.coords().col(1));
        CHECK(p.min_pairwise_distance() == 0.0);
        CHECK(assemble(p, Kernel::tps(1)).entries == Eigen::Matrix2d::Zero());
    }
}

TEST_CASE("point CSV")
{
    SUBCASE("round trip preserves every bit")
    {
        const PointSet p = sample(Domain::unit_ball(3), Density::uniform(), 25, 99);
        const Eigen::VectorXd v = sample_function(p);
        std::stringstream ss;
        write_points_csv(ss, p, &v);
        const PointData back = read_points_csv(ss);
        CHECK(back.points.coords() == p.coords());
        REQUIRE(back.values);
        CHECK(*back.values == v);
    }
    SUBCASE("values column is optional")
    {
        std::istringstream in("x1,x2\n0,1\n2.5,-3e-2\n");
        const PointData d = read_points_csv(in);
        CHECK(d.points.size() == 2);
        CHECK_FALSE(d.values);
        CHECK(d.points.coords()(1, 1) == -0.03);
    }
    SUBCASE("rejections")
    {
        auto bad = [](const std::string& text) {
            std::istringstream in(text);
            CHECK_THROWS_AS(read_points_csv(in), InputError);
        };
        bad("");
        bad("a,b\n1,2\n");
        bad("x1,x2\n1,2\n3\n");
        bad("x1,x2\n1,2,3\n");
        bad("x1,x2,value\n1,2,nan\n");
        bad("x1,x2\n1,inf\n");
        bad("x1,x2\n1,abc\n");
        bad("x1,x2\n");
        bad("x2,x1\n1,2\n");
    }
}
