#pragma once

#include <complex>
#include <vector>

namespace burim::fft {

// Unnormalized complex DFTs (FFTW sign convention: forward = exp(-i...)).
// Plans are cached per shape and guarded by a mutex; execution uses the
// new-array interface and is safe to call concurrently. Plans are created
// with FFTW_ESTIMATE so the transform chosen is independent of runtime
// timing, keeping seeded pipelines byte-reproducible.

void dft_2d(int n_slow, int n_fast, const std::complex<double>* in, std::complex<double>* out,
            bool forward);
void dft_3d(int n_slow, int n_mid, int n_fast, const std::complex<double>* in,
            std::complex<double>* out, bool forward);

}  // namespace burim::fft
