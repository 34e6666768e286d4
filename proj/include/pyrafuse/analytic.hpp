#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pyrafuse/fft.hpp"
#include "pyrafuse/grid.hpp"

namespace pyrafuse {

/// Relative envelope guard: cells with f^2 + h^2 below this fraction of the
/// section's peak squared envelope have no defined phase.
inline constexpr double kEnvelopeGuard = 1e-10;

/// Discrete Hilbert transform for traces of one fixed length (>= 4).
/// Multiplies the spectrum by -i sign(frequency) with the DC and Nyquist
/// bins zeroed. Safe to share between threads.
class HilbertTransformer {
public:
    explicit HilbertTransformer(std::size_t length);

    std::size_t length() const noexcept { return plan_.size(); }

    void apply(std::span<const double> trace, std::span<double> out) const;

private:
    FftPlan plan_;
};

std::vector<double> hilbert_trace(std::span<const double> trace);

/// Real part f (the recorded section) and imaginary part h (its per-trace
/// Hilbert transform) of the complex section.
class AnalyticSection {
public:
    AnalyticSection(Grid2 real, Grid2 imag, double dt, double dx);

    const Grid2& real() const noexcept { return real_; }
    const Grid2& imag() const noexcept { return imag_; }
    double dt() const noexcept { return dt_; }
    double dx() const noexcept { return dx_; }
    std::size_t rows() const noexcept { return real_.rows(); }
    std::size_t cols() const noexcept { return real_.cols(); }

    /// f^2 + h^2 at a cell.
    double envelope_squared(std::size_t row, std::size_t col) const noexcept {
        const double f = real_(row, col);
        const double h = imag_(row, col);
        return f * f + h * h;
    }

    /// Absolute threshold kEnvelopeGuard * max(f^2 + h^2).
    double envelope_floor() const noexcept { return envelope_floor_; }

    bool guarded(std::size_t row, std::size_t col) const noexcept {
        const double e2 = envelope_squared(row, col);
        return e2 == 0.0 || e2 < envelope_floor_;
    }

private:
    Grid2 real_;
    Grid2 imag_;
    double dt_;
    double dx_;
    double envelope_floor_;
};

AnalyticSection analytic_section(const SeismicSection& section);

enum class PhaseAxis { Time, Trace };

/**
 * Derivative of the instantaneous phase atan2(h, f) along one axis, in
 * radians per sample (Time) or per trace (Trace), without unwrapping.
 *
 * One step of phase is arg(z[j+1] conj(z[j])), the discrete counterpart of
 * (f dh - h df) / (f^2 + h^2); it is exact for linear phase and unambiguous
 * while the per-step change stays below pi. Interior cells average the
 * backward and forward steps, edge cells take the single one-sided step.
 * Envelope-guarded cells are 0.
 */
Grid2 phase_derivative(const AnalyticSection& a, PhaseAxis axis);

/// 1 where the envelope guard passes, 0 where it fires.
Grid2 envelope_quality(const AnalyticSection& a);

}  // namespace pyrafuse
