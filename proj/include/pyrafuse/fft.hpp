#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pyrafuse {

/**
 * Complex DFT of a fixed length.
 *
 * Power-of-two lengths run an iterative radix-2 transform; any other length
 * goes through Bluestein's chirp-z algorithm on a padded power-of-two
 * convolution. Twiddles are evaluated directly (no recurrences), which keeps
 * round-off near machine precision for the lengths used on seismic traces.
 *
 * A plan is immutable after construction and may be shared between threads.
 */
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const noexcept { return n_; }

    /// X[k] = sum_j x[j] exp(-2 pi i j k / n), in place.
    void forward(std::span<std::complex<double>> data) const;

    /// Inverse transform including the 1/n factor, in place.
    void inverse(std::span<std::complex<double>> data) const;

private:
    void radix2(std::span<std::complex<double>> data) const;
    void bluestein(std::span<std::complex<double>> data) const;

    std::size_t n_;
    std::size_t m_;  // radix-2 working length (n_ itself when n_ is a power of two)
    std::vector<std::complex<double>> twiddles_;
    std::vector<std::size_t> bitrev_;
    std::vector<std::complex<double>> chirp_;            // exp(-i pi j^2 / n)
    std::vector<std::complex<double>> chirp_kernel_fft_;  // FFT of the conjugate chirp, length m_
};

}  // namespace pyrafuse
