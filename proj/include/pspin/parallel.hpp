#pragma once

namespace pspin {

// Worker count for the OpenMP kernels; n <= 0 restores the runtime default.
void set_num_threads(int n);
int num_threads();

}  // namespace pspin
