#pragma once

namespace uaext {

/// Sets the OpenMP team size used by the parallel kernels. Values < 1 keep
/// the runtime default.
void set_thread_count(int threads);
int thread_count();

}  // namespace uaext
