#include "pyrafuse/attributes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pyrafuse/analytic.hpp"
#include "pyrafuse/error.hpp"
#include "pyrafuse/parallel.hpp"

namespace pyrafuse {

namespace {

constexpr std::size_t kMinDipRows = 4;
constexpr std::size_t kMinDipCols = 3;

Grid2 binarize_expanded_quality(const Grid2& quality, std::size_t rows, std::size_t cols) {
    // A base cell is valid only if every coarse sample feeding its bilinear
    // weights is valid; an interpolated value of exactly 1 says just that.
    const Grid2 spread = expand_to(quality, rows, cols);
    return Grid2::generate(rows, cols, [&](std::size_t r, std::size_t c) {
        return spread(r, c) == 1.0 ? 1.0 : 0.0;
    });
}

// Central differences along rows (axis 0) or columns (axis 1), one-sided on
// the edges, divided by the physical spacing.
Grid2 gradient(const Grid2& g, int axis, double spacing) {
    const std::size_t rows = g.rows();
    const std::size_t cols = g.cols();
    return Grid2::generate(rows, cols, [&](std::size_t r, std::size_t c) {
        const std::size_t extent = axis == 0 ? rows : cols;
        const std::size_t pos = axis == 0 ? r : c;
        auto at = [&](std::size_t p) { return axis == 0 ? g(p, c) : g(r, p); };
        if (extent == 1) return 0.0;
        if (pos == 0) return (at(1) - at(0)) / spacing;
        if (pos == extent - 1) return (at(pos) - at(pos - 1)) / spacing;
        return (at(pos + 1) - at(pos - 1)) / (2.0 * spacing);
    });
}

Grid2 combine_quality(const std::optional<Grid2>& a, const std::optional<Grid2>& b, std::size_t rows,
                      std::size_t cols) {
    return Grid2::generate(rows, cols, [&](std::size_t r, std::size_t c) {
        const double qa = a ? (*a)(r, c) : 1.0;
        const double qb = b ? (*b)(r, c) : 1.0;
        return qa * qb;
    });
}

void require_kind(const AttributeMap& map, AttributeKind kind, const char* role) {
    if (map.kind() != kind) {
        std::ostringstream msg;
        msg << role << " must be a " << to_string(kind) << " map, got " << to_string(map.kind());
        throw ShapeError(msg.str());
    }
}

std::size_t scales_within(std::size_t rows, std::size_t cols, const GaussianKernel& kernel) {
    std::size_t feasible = 0;
    const std::size_t limit = max_scales(rows, cols, kernel);
    for (std::size_t k = 1; k <= limit; ++k) {
        if (rows < kMinDipRows || cols < kMinDipCols) break;
        feasible = k;
        rows = reduced_extent(rows);
        cols = reduced_extent(cols);
    }
    return feasible;
}

void require_scales(std::size_t requested, std::size_t feasible, const char* what) {
    if (requested == 0) {
        throw ParameterError("attribute stack needs at least one scale");
    }
    if (requested > feasible) {
        std::ostringstream msg;
        msg << requested << " scales requested but the " << what
            << " only supports attributes up to K=" << feasible;
        throw SizeError(msg.str());
    }
}

std::size_t resolve_time_index(const SeismicVolume& volume, const AttributeParams& params) {
    const std::size_t t = params.time_index.value_or(volume.nt() / 2);
    if (t >= volume.nt()) {
        std::ostringstream msg;
        msg << "time index " << t << " out of range [0, " << volume.nt() << ")";
        throw BoundsError(msg.str());
    }
    return t;
}

AttributeMap attribute_from_dips(const DipField& dips, AttributeKind kind, std::size_t scale) {
    switch (kind) {
        case AttributeKind::PhaseDip:
            return AttributeMap(dips.p, kind, scale, dips.quality);
        case AttributeKind::DipAngle: {
            const AttributeMap p(dips.p, AttributeKind::PhaseDip, scale, dips.quality);
            const AttributeMap q(*dips.q, AttributeKind::PhaseDip, scale, dips.quality);
            return dip_angle(p, q, dips.geometry).with_scale(scale);
        }
        case AttributeKind::MostPositiveCurvature:
        case AttributeKind::MostNegativeCurvature: {
            CurvaturePair k = curvature(dips);
            Grid2 grid = kind == AttributeKind::MostPositiveCurvature ? std::move(k.k_pos) : std::move(k.k_neg);
            return AttributeMap(std::move(grid), kind, scale, std::move(k.quality));
        }
        case AttributeKind::Raw: break;
    }
    throw ConfigError("raw amplitude is not an attribute");
}

}  // namespace

AttributeMap expand_attribute(const AttributeMap& map, std::size_t rows, std::size_t cols,
                              std::optional<std::size_t> scale) {
    std::optional<Grid2> quality;
    if (map.quality()) quality = binarize_expanded_quality(*map.quality(), rows, cols);
    return AttributeMap(expand_to(map.grid(), rows, cols), map.kind(), scale, std::move(quality),
                        map.meta());
}

AttributeMap phase_dip(const SeismicSection& section, const DipParams& params) {
    const Grid2& g = section.grid();
    if (g.rows() < kMinDipRows || g.cols() < kMinDipCols) {
        std::ostringstream msg;
        msg << "phase dip needs at least " << kMinDipRows << "x" << kMinDipCols << " samples, got "
            << g.rows() << "x" << g.cols();
        throw SizeError(msg.str());
    }
    if (!(params.p_max > 0.0) || !(params.eps_freq >= 0.0)) {
        throw ParameterError("dip clamp must be positive and the frequency guard non-negative");
    }
    const AnalyticSection a = analytic_section(section);
    const Grid2 dtheta_dt = phase_derivative(a, PhaseAxis::Time);
    const Grid2 dtheta_dx = phase_derivative(a, PhaseAxis::Trace);

    const std::size_t rows = g.rows();
    const std::size_t cols = g.cols();
    std::vector<double> dip(rows * cols);
    std::vector<double> quality(rows * cols);
    parallel_for(cols, [&](std::size_t c) {
        for (std::size_t r = 0; r < rows; ++r) {
            const double w = dtheta_dt(r, c);
            const std::size_t i = c * rows + r;
            if (a.guarded(r, c) || std::abs(w) < params.eps_freq) {
                dip[i] = 0.0;
                quality[i] = 0.0;
                continue;
            }
            dip[i] = std::clamp(-dtheta_dx(r, c) / w, -params.p_max, params.p_max);
            quality[i] = 1.0;
        }
    });
    return AttributeMap(Grid2(rows, cols, std::move(dip)), AttributeKind::PhaseDip, 0,
                        Grid2(rows, cols, std::move(quality)));
}

double time_dip_to_slope(double p, double dt, double lateral, double velocity) noexcept {
    return p * (velocity * dt / 2.0) / lateral;
}

AttributeMap dip_angle(const AttributeMap& p, const AttributeMap& q, const DipGeometry& geometry) {
    require_kind(p, AttributeKind::PhaseDip, "inline dip");
    require_kind(q, AttributeKind::PhaseDip, "crossline dip");
    if (!p.grid().same_shape(q.grid())) {
        throw ShapeError("inline and crossline dip maps differ in dimensions");
    }
    if (!(geometry.dt > 0.0) || !(geometry.dx > 0.0) || !(geometry.dy > 0.0) ||
        !(geometry.velocity > 0.0)) {
        throw ParameterError("dip geometry needs positive dt, dx, dy and velocity");
    }
    const std::size_t rows = p.grid().rows();
    const std::size_t cols = p.grid().cols();
    Grid2 angle = Grid2::generate(rows, cols, [&](std::size_t r, std::size_t c) {
        const double sx = time_dip_to_slope(p.grid()(r, c), geometry.dt, geometry.dx, geometry.velocity);
        const double sy = time_dip_to_slope(q.grid()(r, c), geometry.dt, geometry.dy, geometry.velocity);
        return std::atan(std::sqrt(sx * sx + sy * sy));
    });
    std::optional<Grid2> quality;
    if (p.quality() || q.quality()) quality = combine_quality(p.quality(), q.quality(), rows, cols);
    std::ostringstream v;
    v << geometry.velocity;
    return AttributeMap(std::move(angle), AttributeKind::DipAngle, p.scale(), std::move(quality),
                        {{"dip-convention", "time-dip"}, {"velocity", v.str()}});
}

CurvaturePair curvature(const DipField& dips) {
    if (!dips.q) {
        throw ConfigError(
            "curvature needs both inline and crossline dips; supply a volume, not a single section");
    }
    const Grid2& p = dips.p;
    const Grid2& q = *dips.q;
    if (!p.same_shape(q)) {
        throw ShapeError("inline and crossline dip grids differ in dimensions");
    }
    if (p.rows() < 3 || p.cols() < 3) {
        throw SizeError("curvature needs time slices of at least 3x3 traces");
    }
    const DipGeometry& geo = dips.geometry;
    const std::size_t rows = p.rows();
    const std::size_t cols = p.cols();
    const Grid2 sx = Grid2::generate(rows, cols, [&](std::size_t r, std::size_t c) {
        return time_dip_to_slope(p(r, c), geo.dt, geo.dx, geo.velocity);
    });
    const Grid2 sy = Grid2::generate(rows, cols, [&](std::size_t r, std::size_t c) {
        return time_dip_to_slope(q(r, c), geo.dt, geo.dy, geo.velocity);
    });
    const Grid2 dsx_dx = gradient(sx, 0, geo.dx);
    const Grid2 dsx_dy = gradient(sx, 1, geo.dy);
    const Grid2 dsy_dx = gradient(sy, 0, geo.dx);
    const Grid2 dsy_dy = gradient(sy, 1, geo.dy);

    std::vector<double> kpos(rows * cols);
    std::vector<double> kneg(rows * cols);
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < rows; ++r) {
            const double a = 0.5 * dsx_dx(r, c);
            const double b = 0.5 * dsy_dy(r, c);
            const double e = 0.5 * (dsx_dy(r, c) + dsy_dx(r, c));
            const double radical = std::sqrt((a - b) * (a - b) + e * e);
            kpos[c * rows + r] = (a + b) + radical;
            kneg[c * rows + r] = (a + b) - radical;
        }
    }
    return {Grid2(rows, cols, std::move(kpos)), Grid2(rows, cols, std::move(kneg)), dips.quality};
}

std::size_t min_attribute_rows() noexcept { return kMinDipRows; }
std::size_t min_attribute_cols() noexcept { return kMinDipCols; }

std::size_t max_attribute_scales(std::size_t rows, std::size_t cols, const GaussianKernel& kernel) {
    return scales_within(rows, cols, kernel);
}

AttributeMap compute_attribute(const SeismicSection& section, AttributeKind kind,
                               const AttributeParams& params) {
    if (kind != AttributeKind::PhaseDip) {
        std::ostringstream msg;
        msg << to_string(kind) << " combines inline and crossline dips and needs volume input";
        throw ConfigError(msg.str());
    }
    return phase_dip(section, params.dip);
}

AttributeMap compute_attribute(const SeismicVolume& volume, AttributeKind kind,
                               const AttributeParams& params) {
    return attribute_stack(volume, kind, PyramidParams{1, 1.0, 2}, params)[0];
}

AttributeStack attribute_stack(const SeismicSection& section, AttributeKind kind,
                               const PyramidParams& pyramid, const AttributeParams& params) {
    if (kind != AttributeKind::PhaseDip) {
        compute_attribute(section, kind, params);  // throws the configuration error
    }
    const GaussianKernel kernel = pyramid.kernel();
    const std::size_t rows = section.grid().rows();
    const std::size_t cols = section.grid().cols();
    if (pyramid.scales > 1) {
        require_scales(pyramid.scales, max_attribute_scales(rows, cols, kernel), "section");
    }
    const auto levels = build_section_pyramid(section, pyramid.scales, kernel);
    std::vector<AttributeMap> maps;
    maps.reserve(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        maps.push_back(expand_attribute(compute_attribute(levels[i], kind, params), rows, cols, i));
    }
    return AttributeStack(std::move(maps));
}

AttributeStack attribute_stack(const SeismicVolume& volume, AttributeKind kind,
                               const PyramidParams& pyramid, const AttributeParams& params) {
    if (kind == AttributeKind::Raw) {
        throw ConfigError("raw amplitude is not an attribute");
    }
    const std::size_t t = resolve_time_index(volume, params);
    const GaussianKernel kernel = pyramid.kernel();
    const std::size_t nt = volume.nt();
    const std::size_t nx = volume.nx();
    const std::size_t ny = volume.ny();
    const std::size_t K = pyramid.scales;
    if (K > 1) {
        const std::size_t feasible = std::min(max_attribute_scales(nt, nx, kernel),
                                              max_attribute_scales(nt, ny, kernel));
        require_scales(K, feasible, "volume");
    }
    const bool need_q = kind != AttributeKind::PhaseDip;

    // Per scale, row-major (x fastest) nx x ny slices of dips and quality.
    std::vector<std::vector<double>> p(K, std::vector<double>(nx * ny));
    std::vector<std::vector<double>> q(K, std::vector<double>(nx * ny, 0.0));
    std::vector<std::vector<double>> quality(K, std::vector<double>(nx * ny, 1.0));
    const PyramidParams per_section{K, pyramid.sigma, pyramid.radius};

    for (std::size_t y = 0; y < ny; ++y) {
        const AttributeStack s = attribute_stack(grid_section_crossline(volume, y),
                                                 AttributeKind::PhaseDip, per_section, params);
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t x = 0; x < nx; ++x) {
                p[k][y * nx + x] = s[k].grid()(t, x);
                quality[k][y * nx + x] *= (*s[k].quality())(t, x);
            }
        }
    }
    if (need_q) {
        for (std::size_t x = 0; x < nx; ++x) {
            const AttributeStack s = attribute_stack(grid_section_inline(volume, x),
                                                     AttributeKind::PhaseDip, per_section, params);
            for (std::size_t k = 0; k < K; ++k) {
                for (std::size_t y = 0; y < ny; ++y) {
                    q[k][y * nx + x] = s[k].grid()(t, y);
                    quality[k][y * nx + x] *= (*s[k].quality())(t, y);
                }
            }
        }
    }

    const DipGeometry geometry{volume.dt(), volume.dx(), volume.dy(), params.velocity};
    std::vector<AttributeMap> maps;
    maps.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        DipField dips{Grid2(nx, ny, std::move(p[k])), std::nullopt, geometry,
                      Grid2(nx, ny, std::move(quality[k]))};
        if (need_q) dips.q = Grid2(nx, ny, std::move(q[k]));
        maps.push_back(attribute_from_dips(dips, kind, k));
    }
    return AttributeStack(std::move(maps));
}

AttributeStack::AttributeStack(std::vector<AttributeMap> maps) : maps_(std::move(maps)) {
    if (maps_.empty()) {
        throw SizeError("attribute stack needs at least one map");
    }
    const AttributeMap& first = maps_.front();
    for (const auto& m : maps_) {
        if (!m.grid().same_shape(first.grid())) {
            throw ShapeError("attribute stack maps differ in dimensions");
        }
        if (m.kind() != first.kind()) {
            throw ShapeError("attribute stack mixes attribute kinds");
        }
    }
}

std::vector<std::size_t> AttributeStack::scales() const {
    std::vector<std::size_t> out;
    out.reserve(maps_.size());
    for (std::size_t i = 0; i < maps_.size(); ++i) out.push_back(maps_[i].scale().value_or(i));
    return out;
}

}  // namespace pyrafuse
