#pragma once

#include <functional>

namespace gpwtdg {

/// Worker count: `requested` if positive, else hardware concurrency, both
/// capped by the GPWTDG_THREADS environment variable. A cap of 1 selects the
/// deterministic serial path.
int effective_threads(int requested = 0);

bool deterministic_mode();

/// Static-stride parallel loop over [0, n). Each index is processed by exactly
/// one worker; bodies must write disjoint outputs, which also makes the result
/// independent of the worker count.
void parallel_for(int n, const std::function<void(int)>& body, int threads = 0);

}  // namespace gpwtdg
