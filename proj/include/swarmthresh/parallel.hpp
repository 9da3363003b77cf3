#pragma once

namespace swarmthresh {

/// Worker count for the OpenMP kernels and the experiment runner.
/// SWARMTHRESH_THREADS caps it; 0 or unset means all available.
int worker_count();

} // namespace swarmthresh
