#include "pyrafuse/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pyrafuse/error.hpp"

namespace pyrafuse {

namespace {

using cd = std::complex<double>;

std::vector<std::size_t> bit_reversal(std::size_t m) {
    std::vector<std::size_t> rev(m, 0);
    const int bits = std::countr_zero(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < bits; ++b) {
            r |= ((i >> b) & 1U) << (bits - 1 - b);
        }
        rev[i] = r;
    }
    return rev;
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (n_ == 0) {
        throw SizeError("FFT length must be at least 1");
    }
    m_ = std::has_single_bit(n_) ? n_ : std::bit_ceil(2 * n_ - 1);

    twiddles_.resize(m_ / 2);
    for (std::size_t k = 0; k < m_ / 2; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m_);
        twiddles_[k] = {std::cos(angle), std::sin(angle)};
    }
    bitrev_ = bit_reversal(m_);

    if (m_ != n_) {
        // j^2 mod 2n keeps the chirp argument small and exact.
        chirp_.resize(n_);
        const std::uint64_t period = 2 * static_cast<std::uint64_t>(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            const std::uint64_t jj = (static_cast<std::uint64_t>(j) * j) % period;
            const double angle = -std::numbers::pi * static_cast<double>(jj) / static_cast<double>(n_);
            chirp_[j] = {std::cos(angle), std::sin(angle)};
        }
        chirp_kernel_fft_.assign(m_, cd{});
        chirp_kernel_fft_[0] = std::conj(chirp_[0]);
        for (std::size_t j = 1; j < n_; ++j) {
            chirp_kernel_fft_[j] = std::conj(chirp_[j]);
            chirp_kernel_fft_[m_ - j] = std::conj(chirp_[j]);
        }
        radix2(chirp_kernel_fft_);
    }
}

void FftPlan::radix2(std::span<cd> data) const {
    const std::size_t m = data.size();
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= m; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = m / len;
        for (std::size_t start = 0; start < m; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cd t = twiddles_[k * stride] * data[start + k + half];
                const cd u = data[start + k];
                data[start + k] = u + t;
                data[start + k + half] = u - t;
            }
        }
    }
}

void FftPlan::bluestein(std::span<cd> data) const {
    std::vector<cd> work(m_, cd{});
    for (std::size_t j = 0; j < n_; ++j) {
        work[j] = data[j] * chirp_[j];
    }
    radix2(work);
    for (std::size_t k = 0; k < m_; ++k) {
        work[k] = std::conj(work[k] * chirp_kernel_fft_[k]);
    }
    // Inverse via conjugation: ifft(v) = conj(fft(conj(v))) / m.
    radix2(work);
    const double scale = 1.0 / static_cast<double>(m_);
    for (std::size_t k = 0; k < n_; ++k) {
        data[k] = std::conj(work[k]) * scale * chirp_[k];
    }
}

void FftPlan::forward(std::span<cd> data) const {
    if (data.size() != n_) {
        throw ShapeError("FFT input length does not match the plan");
    }
    if (m_ == n_) {
        radix2(data);
    } else {
        bluestein(data);
    }
}

void FftPlan::inverse(std::span<cd> data) const {
    if (data.size() != n_) {
        throw ShapeError("FFT input length does not match the plan");
    }
    for (auto& v : data) v = std::conj(v);
    forward(data);
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : data) v = std::conj(v) * scale;
}

}  // namespace pyrafuse
