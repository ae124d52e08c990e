#pragma once

namespace mmtc {

enum class ExecPolicy { Serial, Parallel };

// Worker count for Parallel regions: the OpenMP limit, capped by the
// MMTC_THREADS environment variable when set to a positive value.
// Always 1 when built without OpenMP.
int max_threads();

}  // namespace mmtc
