#pragma once

namespace cmc {

/// Number of OpenMP threads to use. Defaults to the runtime maximum, capped
/// by the CMC_THREADS environment variable when set. Results never depend on
/// this value, only throughput does.
int thread_count();

}  // namespace cmc
