#include "qrc/tasks.hpp"
#include "qrc/error.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace qrc;

TEST_CASE("gen_stm")
{
    const auto a = gen_stm(100, 0, 17);
    const auto b = gen_stm(100, 0, 17);
    CHECK(a.inputs == b.inputs);
    CHECK(a.targets == a.inputs);
    CHECK(((a.inputs.array() == 0.0) || (a.inputs.array() == 1.0)).all());
    CHECK(a.inputs.sum() > 20);
    CHECK(a.inputs.sum() < 80);
    CHECK(gen_stm(100, 0, 18).inputs != a.inputs);

    const auto degenerate = gen_stm(30, 30, 1);
    CHECK(degenerate.targets.isZero());

    const Eigen::Vector4d in(1, 0, 1, 1);
    CHECK(delayed_copy(in, 1) == Eigen::Vector4d(0, 1, 0, 1));
    CHECK_THROWS_AS(delayed_copy(in, -1), ConfigError);
}

TEST_CASE("gen_narma_input")
{
    const auto s = gen_narma_input(440);
    CHECK(s(0) == doctest::Approx(0.1));
    CHECK((s.array() >= 0.0).all());
    CHECK((s.array() <= 0.2).all());
    const NarmaDrive drive;
    CHECK(drive.alpha0 == 2.11);
    CHECK(drive.alpha1 == 3.73);
    CHECK(drive.alpha2 == 4.11);
    CHECK(drive.period == 100.0);
    CHECK(gen_narma_input(440) == s);
    CHECK_THROWS_AS(gen_narma_input(0), ConfigError);

    // No 10-sample window repeats within 440 samples.
    const int w = 10;
    bool repeated = false;
    for (int i = 0; i + w <= s.size() && !repeated; ++i)
        for (int j = i + 1; j + w <= s.size(); ++j)
            if (s.segment(i, w) == s.segment(j, w)) {
                repeated = true;
                break;
            }
    CHECK_FALSE(repeated);
}

TEST_CASE("gen_narma_target matches a direct evaluation of the recurrence")
{
    const auto s = gen_narma_input(440);
    for (int order : {2, 5, 10, 15, 20}) {
        const auto y = gen_narma_target(s, order);
        // Reference: literal recurrence with zero pre-history.
        std::vector<double> ref(440, 0.0);
        auto yy = [&](int k) { return k >= 0 ? ref[k] : 0.0; };
        auto ss = [&](int k) { return k >= 0 ? s(k) : 0.0; };
        for (int k = 0; k + 1 < 440; ++k) {
            double sum = 0.0;
            for (int j = 0; j < order; ++j) sum += yy(k - j);
            ref[k + 1] = 0.3 * yy(k) + 0.05 * yy(k) * sum + 1.5 * ss(k - order + 1) * ss(k) + 0.1;
        }
        for (int k = 0; k < 440; ++k) CHECK(y(k) == doctest::Approx(ref[k]).epsilon(1e-14));
        CHECK(y.cwiseAbs().maxCoeff() < 1.0);
    }
}

TEST_CASE("gen_narma_target first values and zero-input fixed point")
{
    const auto s = gen_narma_input(10);
    const auto y = gen_narma_target(s, 2);
    CHECK(y(0) == 0.0);
    CHECK(y(1) == doctest::Approx(0.1)); // s_{-1} = 0 kills the input term
    CHECK(y(2) != doctest::Approx(0.1));

    // Zero input, n = 2: y* solves 0.1 y^2 - 0.7 y + 0.1 = 0.
    const double fixed_point = (0.7 - std::sqrt(0.49 - 0.04)) / 0.2; // 0.145898...
    const auto y0 = gen_narma_target(Eigen::VectorXd::Zero(500), 2);
    CHECK(std::abs(y0(499) - fixed_point) < 1e-3);
    CHECK(std::abs(y0(499) - 0.1458980337503155) < 1e-12);
}

TEST_CASE("NARMA2 increment depends only on s_{k-1} s_k")
{
    const auto s = gen_narma_input(200);
    const auto y = gen_narma_target(s, 2);
    for (int k = 1; k + 1 < 200; ++k) {
        const double increment = y(k + 1) - 0.3 * y(k) - 0.05 * y(k) * (y(k) + y(k - 1)) - 0.1;
        CHECK(increment == doctest::Approx(1.5 * s(k - 1) * s(k)).epsilon(1e-10));
    }
}

TEST_CASE("gen_narma_target divergence guard and order check")
{
    const Eigen::VectorXd big = Eigen::VectorXd::Constant(100, 5.0);
    CHECK_THROWS_AS(gen_narma_target(big, 5), NumericalError);
    CHECK_THROWS_AS(gen_narma_target(gen_narma_input(10), 1), ConfigError);
}

TEST_CASE("parse_task")
{
    CHECK(parse_task("stm").kind == TaskKind::Stm);
    CHECK(parse_task("narma10") == TaskSpec{TaskKind::Narma, 10});
    CHECK(parse_task("narma20").name() == "narma20");
    CHECK_THROWS_AS(parse_task("narma"), ConfigError);
    CHECK_THROWS_AS(parse_task("narma1"), ConfigError);
    CHECK_THROWS_AS(parse_task("narma2x"), ConfigError);
    CHECK_THROWS_AS(parse_task("parity"), ConfigError);
}
