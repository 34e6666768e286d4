#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pyrafuse/grid.hpp"
#include "pyrafuse/pyramid.hpp"
#include "pyrafuse/stack.hpp"

namespace pyrafuse {

inline constexpr double kDefaultVelocity = 2000.0;  // m/s, time-dip conversion

struct DipParams {
    double p_max = 5.0;      // clamp, samples per trace
    double eps_freq = 1e-3;  // minimum |instantaneous frequency|, rad per sample
};

/**
 * Phase dip of a section in samples per trace:
 *   dip = -(dtheta/dx) / (dtheta/dt)
 * so an event at t0 + s * n yields +s. Cells failing the envelope guard or
 * with |dtheta/dt| < eps_freq are 0 with quality 0. Output is clamped to
 * [-p_max, p_max]. Needs at least 4 x 3 samples.
 */
AttributeMap phase_dip(const SeismicSection& section, const DipParams& params = {});

/// Sampling needed to turn samples-per-trace dips into physical slopes.
struct DipGeometry {
    double dt;
    double dx;
    double dy;
    double velocity = kDefaultVelocity;
};

/// Physical slope dz/dx of a time dip: p * (velocity * dt / 2) / lateral.
double time_dip_to_slope(double p, double dt, double lateral, double velocity) noexcept;

/// atan(sqrt(sx^2 + sy^2)) from inline and crossline phase dips.
AttributeMap dip_angle(const AttributeMap& p, const AttributeMap& q, const DipGeometry& geometry);

/// Inline (p, along x) and crossline (q, along y) dips on one time slice.
/// Grids are nx x ny. q is absent for dips derived from a single section.
struct DipField {
    Grid2 p;
    std::optional<Grid2> q;
    DipGeometry geometry;
    std::optional<Grid2> quality;
};

struct CurvaturePair {
    Grid2 k_pos;  // most positive curvature, 1/m
    Grid2 k_neg;  // most negative curvature, 1/m
    std::optional<Grid2> quality;
};

/**
 * Most positive / most negative curvature from the quadratic-surface
 * coefficients a = 1/2 dsx/dx, b = 1/2 dsy/dy, c = 1/2 (dsx/dy + dsy/dx):
 *   k = (a + b) +- sqrt((a - b)^2 + c^2).
 * Derivatives are central differences (one-sided on edges) in meters.
 * Throws ConfigError without q: curvature needs volume input.
 */
CurvaturePair curvature(const DipField& dips);

struct PyramidParams {
    std::size_t scales = 4;
    double sigma = 1.0;
    std::size_t radius = 2;

    GaussianKernel kernel() const { return make_kernel(sigma, radius); }
};

struct AttributeParams {
    DipParams dip;
    double velocity = kDefaultVelocity;
    std::optional<std::size_t> time_index;  // volume attributes; defaults to nt / 2
};

/// Single-scale attribute of a section (only PhaseDip is defined on sections).
AttributeMap compute_attribute(const SeismicSection& section, AttributeKind kind,
                               const AttributeParams& params = {});

/// Single-scale attribute of a volume on the time slice params.time_index.
/// PhaseDip yields the inline dip p.
AttributeMap compute_attribute(const SeismicVolume& volume, AttributeKind kind,
                               const AttributeParams& params = {});

/// Smallest rows x cols on which an attribute can be evaluated.
std::size_t min_attribute_rows() noexcept;
std::size_t min_attribute_cols() noexcept;

/**
 * Attribute at every pyramid level, each expanded back to the base
 * dimensions and tagged with its source scale. Entry 0 is bit-identical to
 * compute_attribute on the input.
 */
AttributeStack attribute_stack(const SeismicSection& section, AttributeKind kind,
                               const PyramidParams& pyramid, const AttributeParams& params = {});

/**
 * Volume version. Inline dips come from 2D pyramids of every crossline
 * section and crossline dips from 2D pyramids of every inline section; the
 * attribute of each scale is evaluated on the requested time slice.
 */
AttributeStack attribute_stack(const SeismicVolume& volume, AttributeKind kind,
                               const PyramidParams& pyramid, const AttributeParams& params = {});

/// Bilinear expansion of a per-scale map to rows x cols, tagged with
/// `scale`. The quality mask stays 1 only where every contributing coarse
/// cell was valid.
AttributeMap expand_attribute(const AttributeMap& map, std::size_t rows, std::size_t cols,
                              std::optional<std::size_t> scale);

/// Largest scale count usable for attributes of a section with these dims.
std::size_t max_attribute_scales(std::size_t rows, std::size_t cols, const GaussianKernel& kernel);

}  // namespace pyrafuse
