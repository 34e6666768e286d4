#include "pyrafuse/pyramid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pyrafuse/error.hpp"
#include "pyrafuse/parallel.hpp"

namespace pyrafuse {

double gaussian_density(double m, double n, double sigma) {
    const double s2 = sigma * sigma;
    return std::exp(-(m * m + n * n) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
}

GaussianKernel::GaussianKernel(double sigma, std::size_t radius) : sigma_(sigma), radius_(radius) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        std::ostringstream msg;
        msg << "kernel sigma must be positive, got " << sigma;
        throw ParameterError(msg.str());
    }
    if (radius == 0) {
        throw ParameterError("kernel radius must be at least 1");
    }
    const int r = static_cast<int>(radius_);
    const std::size_t s = support();

    weights_.resize(s * s);
    normalization_ = 0.0;
    for (int k = -r; k <= r; ++k) {
        for (int l = -r; l <= r; ++l) {
            const double w = unnormalized(k, l);
            weights_[static_cast<std::size_t>(k + r) * s + static_cast<std::size_t>(l + r)] = w;
            normalization_ += w;
        }
    }
    for (auto& w : weights_) w /= normalization_;

    taps_.resize(s);
    double tap_sum = 0.0;
    for (int k = -r; k <= r; ++k) {
        const double t = std::exp(-static_cast<double>(k * k) / (2.0 * sigma_ * sigma_));
        taps_[static_cast<std::size_t>(k + r)] = t;
        tap_sum += t;
    }
    for (auto& t : taps_) t /= tap_sum;
}

double GaussianKernel::weight(int k, int l) const {
    const int r = static_cast<int>(radius_);
    if (k < -r || k > r || l < -r || l > r) {
        throw BoundsError("kernel offset outside the support");
    }
    return weights_[static_cast<std::size_t>(k + r) * support() + static_cast<std::size_t>(l + r)];
}

double GaussianKernel::unnormalized(int k, int l) const {
    return gaussian_density(static_cast<double>(k), static_cast<double>(l), sigma_);
}

GaussianKernel make_kernel(double sigma, std::size_t radius) { return GaussianKernel(sigma, radius); }

std::size_t mirror_index(std::ptrdiff_t i, std::size_t n) noexcept {
    const auto period = static_cast<std::ptrdiff_t>(2 * n);
    std::ptrdiff_t j = i % period;
    if (j < 0) j += period;
    if (j >= static_cast<std::ptrdiff_t>(n)) j = period - 1 - j;
    return static_cast<std::size_t>(j);
}

Grid2 reduce(const Grid2& input, const GaussianKernel& kernel) {
    const std::size_t rows = input.rows();
    const std::size_t cols = input.cols();
    const std::size_t support = kernel.support();
    if (rows < support || cols < support) {
        std::ostringstream msg;
        msg << "reduce needs at least " << support << "x" << support << " samples, got " << rows
            << "x" << cols;
        throw SizeError(msg.str());
    }
    const auto taps = kernel.taps();
    const auto r = static_cast<std::ptrdiff_t>(kernel.radius());
    const std::size_t out_rows = reduced_extent(rows);
    const std::size_t out_cols = reduced_extent(cols);

    // Pass 1: filter and decimate every trace along time.
    std::vector<double> half(out_rows * cols);
    parallel_for(cols, [&](std::size_t c) {
        const auto tr = input.trace(c);
        double* dst = half.data() + c * out_rows;
        for (std::size_t m = 0; m < out_rows; ++m) {
            const auto centre = static_cast<std::ptrdiff_t>(2 * m);
            const double x0 = tr[static_cast<std::size_t>(centre)];
            double acc = 0.0;
            for (std::ptrdiff_t k = -r; k <= r; ++k) {
                acc += taps[static_cast<std::size_t>(k + r)] * (tr[mirror_index(centre + k, rows)] - x0);
            }
            dst[m] = x0 + acc;
        }
    });

    // Pass 2: filter and decimate across traces.
    std::vector<double> out(out_rows * out_cols);
    parallel_for(out_cols, [&](std::size_t n) {
        const auto centre = static_cast<std::ptrdiff_t>(2 * n);
        const double* mid = half.data() + static_cast<std::size_t>(centre) * out_rows;
        double* dst = out.data() + n * out_rows;
        for (std::size_t m = 0; m < out_rows; ++m) dst[m] = 0.0;
        for (std::ptrdiff_t l = -r; l <= r; ++l) {
            const double w = taps[static_cast<std::size_t>(l + r)];
            const double* src = half.data() + mirror_index(centre + l, cols) * out_rows;
            for (std::size_t m = 0; m < out_rows; ++m) dst[m] += w * (src[m] - mid[m]);
        }
        for (std::size_t m = 0; m < out_rows; ++m) dst[m] += mid[m];
    });
    return Grid2(out_rows, out_cols, std::move(out));
}

std::size_t max_scales(std::size_t rows, std::size_t cols, const GaussianKernel& kernel) {
    const std::size_t support = kernel.support();
    if (rows < support || cols < support) return 1;
    std::size_t scales = 1;
    while (true) {
        rows = reduced_extent(rows);
        cols = reduced_extent(cols);
        if (rows < support || cols < support) return scales;
        ++scales;
    }
}

Pyramid build_pyramid(const Grid2& base, std::size_t scales, const GaussianKernel& kernel) {
    if (scales == 0) {
        throw ParameterError("pyramid needs at least one scale");
    }
    const std::size_t feasible = max_scales(base.rows(), base.cols(), kernel);
    if (scales > feasible) {
        std::ostringstream msg;
        msg << scales << " scales requested but a " << base.rows() << "x" << base.cols()
            << " input with a " << kernel.support() << "x" << kernel.support()
            << " kernel supports at most K=" << feasible;
        throw SizeError(msg.str());
    }
    Pyramid pyr{{base}, kernel};
    pyr.levels.reserve(scales);
    for (std::size_t i = 1; i < scales; ++i) {
        pyr.levels.push_back(reduce(pyr.levels.back(), kernel));
    }
    return pyr;
}

std::vector<SeismicSection> build_section_pyramid(const SeismicSection& base, std::size_t scales,
                                                  const GaussianKernel& kernel) {
    Pyramid pyr = build_pyramid(base.grid(), scales, kernel);
    std::vector<SeismicSection> out;
    out.reserve(scales);
    double factor = 1.0;
    for (std::size_t i = 0; i < scales; ++i) {
        out.emplace_back(std::move(pyr.levels[i]), base.dt() * factor, base.dx() * factor,
                         base.label());
        factor *= 2.0;
    }
    return out;
}

namespace {

struct Sample {
    std::size_t lo;
    std::size_t hi;
    double frac;
};

std::vector<Sample> edge_aligned_positions(std::size_t in, std::size_t out) {
    std::vector<Sample> pos(out);
    for (std::size_t i = 0; i < out; ++i) {
        if (in == 1 || out == 1) {
            pos[i] = {0, 0, 0.0};
            continue;
        }
        const double x = static_cast<double>(i * (in - 1)) / static_cast<double>(out - 1);
        std::size_t lo = static_cast<std::size_t>(x);
        if (lo >= in - 1) lo = in - 2;
        pos[i] = {lo, lo + 1, x - static_cast<double>(lo)};
    }
    return pos;
}

inline double lerp(double a, double b, double t) noexcept { return a + t * (b - a); }

}  // namespace

Grid2 expand_to(const Grid2& input, std::size_t target_rows, std::size_t target_cols) {
    if (target_rows < input.rows() || target_cols < input.cols()) {
        std::ostringstream msg;
        msg << "expand_to target " << target_rows << "x" << target_cols << " is smaller than input "
            << input.rows() << "x" << input.cols();
        throw SizeError(msg.str());
    }
    if (target_rows == input.rows() && target_cols == input.cols()) {
        return input;
    }
    const auto rpos = edge_aligned_positions(input.rows(), target_rows);
    const auto cpos = edge_aligned_positions(input.cols(), target_cols);
    std::vector<double> out(target_rows * target_cols);
    parallel_for(target_cols, [&](std::size_t j) {
        const auto [c0, c1, fc] = cpos[j];
        const auto left = input.trace(c0);
        const auto right = input.trace(c1);
        double* dst = out.data() + j * target_rows;
        for (std::size_t i = 0; i < target_rows; ++i) {
            const auto [r0, r1, fr] = rpos[i];
            const double top = lerp(left[r0], right[r0], fc);
            const double bottom = lerp(left[r1], right[r1], fc);
            dst[i] = lerp(top, bottom, fr);
        }
    });
    return Grid2(target_rows, target_cols, std::move(out));
}

}  // namespace pyrafuse
