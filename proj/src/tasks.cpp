#include "qrc/tasks.hpp"

#include "qrc/error.hpp"
#include "qrc/random.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace qrc {

std::string TaskSpec::name() const
{
    return kind == TaskKind::Stm ? "stm" : "narma" + std::to_string(param);
}

TaskSpec parse_task(std::string_view name)
{
    if (name == "stm") return {TaskKind::Stm, 10};
    constexpr std::string_view prefix = "narma";
    if (name.starts_with(prefix)) {
        int order = 0;
        const auto digits = name.substr(prefix.size());
        const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), order);
        if (ec == std::errc{} && end == digits.data() + digits.size() && order >= 2)
            return {TaskKind::Narma, order};
    }
    throw ConfigError("unknown task '" + std::string(name) + "' (expected stm or narma<n>, n >= 2)");
}

Eigen::VectorXd delayed_copy(const Eigen::VectorXd& inputs, int tau_b)
{
    if (tau_b < 0) throw ConfigError("STM delay must be non-negative");
    const Eigen::Index n = inputs.size();
    Eigen::VectorXd targets = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = tau_b; k < n; ++k) targets(k) = inputs(k - tau_b);
    return targets;
}

SequencePair gen_stm(int length, int tau_b, std::uint64_t seed)
{
    if (length < 0) throw ConfigError("STM length must be non-negative");
    auto engine = make_engine(seed, Stream::Inputs);
    Eigen::VectorXd inputs(length);
    for (int k = 0; k < length; ++k) inputs(k) = static_cast<double>(engine() >> 63);
    return {inputs, delayed_copy(inputs, tau_b)};
}

Eigen::VectorXd gen_narma_input(int length, const NarmaDrive& drive)
{
    if (length < 1) throw ConfigError("NARMA input length must be at least 1");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Eigen::VectorXd s(length);
    for (int k = 0; k < length; ++k) {
        const double phase = two_pi * k / drive.period;
        s(k) = drive.amplitude
               * (std::sin(phase * drive.alpha0) * std::sin(phase * drive.alpha1)
                      * std::sin(phase * drive.alpha2)
                  + 1.0);
    }
    return s;
}

Eigen::VectorXd gen_narma_target(const Eigen::VectorXd& inputs, int order,
                                 const NarmaCoefficients& coeffs)
{
    if (order < 2) throw ConfigError("NARMA order must be at least 2");
    const Eigen::Index n = inputs.size();
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    auto s_at = [&](Eigen::Index k) { return k >= 0 ? inputs(k) : 0.0; };
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        double window = 0.0;
        for (Eigen::Index j = 0; j < order && k - j >= 0; ++j) window += y(k - j);
        y(k + 1) = coeffs.a * y(k) + coeffs.b * y(k) * window
                   + coeffs.c * s_at(k - order + 1) * s_at(k) + coeffs.d;
        if (!(std::abs(y(k + 1)) <= kNarmaDivergence))
            throw NumericalError("NARMA" + std::to_string(order) + " target diverged at step "
                                 + std::to_string(k + 1));
    }
    return y;
}

} // namespace qrc
