// Batched trig kernels, compiled with -ffast-math in this translation unit
// only, so the compiler can use the glibc vector math routines (~4 ulp, within
// the per-term error budget). Everything accuracy-critical (Kahan sums, exact
// reductions) lives in strictly-compiled units.

#include <cmath>
#include <cstddef>

namespace lacsum {

void vec_cos(const double* x, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = std::cos(x[i]);
}

void vec_sin(const double* x, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = std::sin(x[i]);
}

}  // namespace lacsum
