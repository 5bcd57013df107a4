#pragma once

#include <span>
#include <vector>

#include "l2w/common.hpp"

namespace l2w::kernels {

// In-place radix-2 FFT, sign -1 is the forward transform. No scaling.
void fft_serial(std::span<Complex> a, int sign);
void fft_parallel(std::span<Complex> a, int sign);
void fft(std::span<Complex> a, int sign, Exec e);

// Full linear convolution, out.size() == a.size() + b.size() - 1.
// The parallel version splits over output index so each entry is summed in
// the same order as the serial one; results are bit-identical.
void convolve_serial(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
void convolve_parallel(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
void convolve(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out, Exec e);

}  // namespace l2w::kernels
