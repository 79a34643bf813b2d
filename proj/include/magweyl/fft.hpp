#pragma once

#include "magweyl/common.hpp"

namespace magweyl {

/// In-place DFT along one axis of a dense row-major array viewed as
/// [pre][n][post] complex values.  sign = -1 is the forward transform
/// sum_j a_j e^{-2 pi i j k / n}; sign = +1 the unnormalized inverse.
/// No normalization is applied by either direction.
void fft_axis(cplx* data, long pre, long n, long post, int sign);

/// Convenience: forward/backward with 1/n normalization on the inverse.
void fft_axis_fwd(cplx* data, long pre, long n, long post);
void fft_axis_inv(cplx* data, long pre, long n, long post);

}  // namespace magweyl
