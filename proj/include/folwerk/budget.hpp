#pragma once

#include <cstddef>

namespace folwerk {

/// Step limits for the two potentially long-running loops: ideal completion
/// (reduction steps) and 2-cell rewriting (rewrite steps).
struct Budget {
    std::size_t reduction_steps = 10000;
    std::size_t rewrite_steps = 10000;

    /// Process-wide defaults. FOLWERK_BUDGET, when set, overrides both limits.
    static Budget defaults();
    static void set_defaults(const Budget& budget);
};

} // namespace folwerk
