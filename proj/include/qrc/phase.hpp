#pragma once

#include <string>

namespace qrc {

enum class Phase { Prep, Train, Test };

inline std::string to_string(Phase p)
{
    switch (p) {
    case Phase::Prep: return "prep";
    case Phase::Train: return "train";
    case Phase::Test: return "test";
    }
    return "?";
}

/// Washout, training and test windows laid end to end.
struct PhaseSplit {
    int n_pre = 200;
    int n_fb = 200;
    int n_test = 40;

    int total() const { return n_pre + n_fb + n_test; }
    int train_begin() const { return n_pre; }
    int test_begin() const { return n_pre + n_fb; }

    Phase phase_of(int step) const
    {
        if (step < n_pre) return Phase::Prep;
        if (step < n_pre + n_fb) return Phase::Train;
        return Phase::Test;
    }
};

} // namespace qrc
