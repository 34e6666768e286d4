#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pyrafuse/grid.hpp"

namespace pyrafuse {

/// Value of the continuous 2D Gaussian (1 / 2 pi sigma^2) exp(-(m^2 + n^2) / 2 sigma^2).
double gaussian_density(double m, double n, double sigma);

/**
 * Sampled 2D Gaussian on the (2r+1) x (2r+1) lattice [-r, r]^2, rescaled to
 * unit sum.
 *
 * The lattice samples are exactly symmetric under sign flips and transposes.
 * Because the sampled Gaussian is separable, the normalized 2D weights are
 * the outer product of the normalized 1D taps, which is what reduce() uses.
 */
class GaussianKernel {
public:
    GaussianKernel(double sigma, std::size_t radius);

    double sigma() const noexcept { return sigma_; }
    std::size_t radius() const noexcept { return radius_; }
    std::size_t support() const noexcept { return 2 * radius_ + 1; }

    /// Normalized weight at lattice offset (k, l), both in [-r, r].
    double weight(int k, int l) const;

    /// Density before normalization at (k, l).
    double unnormalized(int k, int l) const;

    /// Sum of the unnormalized lattice samples (below 1 for any finite support).
    double normalization() const noexcept { return normalization_; }

    /// Normalized 1D taps, index 0 corresponds to offset -r.
    std::span<const double> taps() const noexcept { return taps_; }

private:
    double sigma_;
    std::size_t radius_;
    double normalization_;
    std::vector<double> weights_;  // support x support, offset (k, l) at (k + r) * support + (l + r)
    std::vector<double> taps_;
};

GaussianKernel make_kernel(double sigma, std::size_t radius);

/// Output length of one dyadic reduction: ceil(n / 2).
constexpr std::size_t reduced_extent(std::size_t n) noexcept { return (n + 1) / 2; }

/// Half-sample symmetric reflection of index `i` into [0, n).
std::size_t mirror_index(std::ptrdiff_t i, std::size_t n) noexcept;

/**
 * One pyramid step: out[m, n] = sum_{k,l} g[k, l] in[2m + k, 2n + l] with
 * mirror padding, output ceil(rows/2) x ceil(cols/2).
 *
 * Evaluated as two 1D passes. Each tap accumulates the difference from the
 * centre sample, so constant inputs come back bit-exact.
 */
Grid2 reduce(const Grid2& input, const GaussianKernel& kernel);

struct Pyramid {
    std::vector<Grid2> levels;
    GaussianKernel kernel;

    std::size_t scales() const noexcept { return levels.size(); }
};

/// Largest K for which every level of a K-scale pyramid keeps both
/// dimensions >= the kernel support. Always at least 1.
std::size_t max_scales(std::size_t rows, std::size_t cols, const GaussianKernel& kernel);

/// levels[0] is `base`, levels[i] = reduce(levels[i-1]). Throws SizeError
/// naming the largest feasible K when `scales` exceeds max_scales.
Pyramid build_pyramid(const Grid2& base, std::size_t scales, const GaussianKernel& kernel);

/// Pyramid of sections; level i carries dt * 2^i and dx * 2^i.
std::vector<SeismicSection> build_section_pyramid(const SeismicSection& base, std::size_t scales,
                                                  const GaussianKernel& kernel);

/**
 * Bilinear upsampling to exactly target_rows x target_cols with
 * edge-aligned sample positions (corner samples map onto corner samples).
 * Equal dimensions return a bit-identical copy. Throws SizeError when the
 * target is smaller than the input along either axis.
 */
Grid2 expand_to(const Grid2& input, std::size_t target_rows, std::size_t target_cols);

}  // namespace pyrafuse
