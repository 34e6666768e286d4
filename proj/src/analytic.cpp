#include "pyrafuse/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "pyrafuse/error.hpp"
#include "pyrafuse/parallel.hpp"

namespace pyrafuse {

namespace {

constexpr std::size_t kMinHilbertLength = 4;

std::size_t checked_length(std::size_t n) {
    if (n < kMinHilbertLength) {
        std::ostringstream msg;
        msg << "Hilbert transform needs at least " << kMinHilbertLength << " samples, got " << n;
        throw SizeError(msg.str());
    }
    return n;
}

// arg(z_b * conj(z_a)) for z = f + i h.
inline double phase_step(double fa, double ha, double fb, double hb) noexcept {
    return std::atan2(fa * hb - ha * fb, fa * fb + ha * hb);
}

}  // namespace

HilbertTransformer::HilbertTransformer(std::size_t length) : plan_(checked_length(length)) {}

void HilbertTransformer::apply(std::span<const double> trace, std::span<double> out) const {
    const std::size_t n = plan_.size();
    if (trace.size() != n || out.size() != n) {
        throw ShapeError("Hilbert transform length mismatch");
    }
    std::vector<std::complex<double>> spec(trace.begin(), trace.end());
    plan_.forward(spec);
    // Positive frequencies 1 .. ceil(n/2)-1 get -i, negative ones +i.
    const std::size_t positive_end = (n + 1) / 2;
    spec[0] = 0.0;
    for (std::size_t k = 1; k < positive_end; ++k) {
        spec[k] = std::complex<double>(spec[k].imag(), -spec[k].real());
    }
    if (n % 2 == 0) spec[n / 2] = 0.0;
    for (std::size_t k = n / 2 + 1; k < n; ++k) {
        spec[k] = std::complex<double>(-spec[k].imag(), spec[k].real());
    }
    plan_.inverse(spec);
    for (std::size_t i = 0; i < n; ++i) out[i] = spec[i].real();
}

std::vector<double> hilbert_trace(std::span<const double> trace) {
    HilbertTransformer ht(trace.size());
    std::vector<double> out(trace.size());
    ht.apply(trace, out);
    return out;
}

AnalyticSection::AnalyticSection(Grid2 real, Grid2 imag, double dt, double dx)
    : real_(std::move(real)), imag_(std::move(imag)), dt_(dt), dx_(dx), envelope_floor_(0.0) {
    if (!real_.same_shape(imag_)) {
        throw ShapeError("real and imaginary parts of an analytic section differ in dimensions");
    }
    double peak = 0.0;
    for (std::size_t c = 0; c < cols(); ++c) {
        for (std::size_t r = 0; r < rows(); ++r) peak = std::max(peak, envelope_squared(r, c));
    }
    envelope_floor_ = kEnvelopeGuard * peak;
}

AnalyticSection analytic_section(const SeismicSection& section) {
    const Grid2& f = section.grid();
    const HilbertTransformer ht(f.rows());
    std::vector<double> imag(f.size());
    parallel_for(f.cols(), [&](std::size_t c) {
        ht.apply(f.trace(c), std::span<double>(imag.data() + c * f.rows(), f.rows()));
    });
    return AnalyticSection(f, Grid2(f.rows(), f.cols(), std::move(imag)), section.dt(), section.dx());
}

Grid2 phase_derivative(const AnalyticSection& a, PhaseAxis axis) {
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    const std::size_t extent = axis == PhaseAxis::Time ? rows : cols;
    if (extent < 3) {
        std::ostringstream msg;
        msg << "phase derivative along the " << (axis == PhaseAxis::Time ? "time" : "trace")
            << " axis needs at least 3 samples, got " << extent;
        throw SizeError(msg.str());
    }
    const Grid2& f = a.real();
    const Grid2& h = a.imag();

    auto step = [&](std::size_t r0, std::size_t c0, std::size_t r1, std::size_t c1) {
        return phase_step(f(r0, c0), h(r0, c0), f(r1, c1), h(r1, c1));
    };

    std::vector<double> out(rows * cols);
    parallel_for(cols, [&](std::size_t c) {
        double* dst = out.data() + c * rows;
        for (std::size_t r = 0; r < rows; ++r) {
            if (a.guarded(r, c)) {
                dst[r] = 0.0;
                continue;
            }
            const std::size_t pos = axis == PhaseAxis::Time ? r : c;
            auto neighbour = [&](std::size_t p) {
                return axis == PhaseAxis::Time ? std::pair{p, c} : std::pair{r, p};
            };
            if (pos == 0) {
                const auto [r1, c1] = neighbour(1);
                dst[r] = step(r, c, r1, c1);
            } else if (pos == extent - 1) {
                const auto [r0, c0] = neighbour(pos - 1);
                dst[r] = step(r0, c0, r, c);
            } else {
                const auto [r0, c0] = neighbour(pos - 1);
                const auto [r1, c1] = neighbour(pos + 1);
                dst[r] = 0.5 * (step(r0, c0, r, c) + step(r, c, r1, c1));
            }
        }
    });
    return Grid2(rows, cols, std::move(out));
}

Grid2 envelope_quality(const AnalyticSection& a) {
    return Grid2::generate(a.rows(), a.cols(),
                           [&](std::size_t r, std::size_t c) { return a.guarded(r, c) ? 0.0 : 1.0; });
}

}  // namespace pyrafuse
