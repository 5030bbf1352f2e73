#pragma once

#include <functional>

namespace bi3d {

/// Worker count used by parallel_for. Resolution order: value set through
/// set_thread_override, else the BI3D_THREADS environment variable,
/// else hardware concurrency. 0 means "auto".
int thread_count();

/// Override the worker count for the current process. 0 forces "auto"
/// (hardware concurrency); a negative value removes the override so the
/// environment variable applies again.
void set_thread_override(int n);

/// Runs fn(i) for i in [begin, end). Work items must write disjoint state;
/// results are required to be independent of scheduling.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace bi3d
