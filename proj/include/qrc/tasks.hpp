#pragma once

// Benchmark streams: binary short-term-memory inputs with delayed-copy targets,
// and the triple-sine NARMA drive with NARMA-n targets.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>

namespace qrc {

enum class TaskKind { Stm, Narma };

/// A benchmark family: STM (param = delay, or the max delay for a sweep) or NARMA-n.
struct TaskSpec {
    TaskKind kind = TaskKind::Narma;
    int param = 2;

    std::string name() const;
    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

/// "stm" or "narma<n>".
TaskSpec parse_task(std::string_view name);

struct SequencePair {
    Eigen::VectorXd inputs;
    Eigen::VectorXd targets;
};

/// target_k = input_{k - tau_b}, zero before the stream starts.
Eigen::VectorXd delayed_copy(const Eigen::VectorXd& inputs, int tau_b);

/// i.i.d. fair bits from the seed's input stream, plus delayed-copy targets.
SequencePair gen_stm(int length, int tau_b, std::uint64_t seed);

struct NarmaDrive {
    double amplitude = 0.1;
    double alpha0 = 2.11;
    double alpha1 = 3.73;
    double alpha2 = 4.11;
    double period = 100.0;
};

/// s_k = A [sin(2 pi a0 k / T) sin(2 pi a1 k / T) sin(2 pi a2 k / T) + 1], k = 0..length-1.
Eigen::VectorXd gen_narma_input(int length, const NarmaDrive& drive = {});

/// y_{k+1} = a y_k + b y_k sum_{j<n} y_{k-j} + c s_{k-n+1} s_k + d
struct NarmaCoefficients {
    double a = 0.3;
    double b = 0.05;
    double c = 1.5;
    double d = 0.1;
};

/// |y_k| above this aborts target generation with NumericalError.
inline constexpr double kNarmaDivergence = 10.0;

/// targets[k] = y_k with y_0 = 0 and zero pre-history.
Eigen::VectorXd gen_narma_target(const Eigen::VectorXd& inputs, int order,
                                 const NarmaCoefficients& coeffs = {});

} // namespace qrc
