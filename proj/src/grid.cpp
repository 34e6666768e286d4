#include "pyrafuse/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pyrafuse/error.hpp"

namespace pyrafuse {

namespace {

void require_finite(std::span<const double> data, const char* what) {
    const auto bad = std::find_if(data.begin(), data.end(), [](double v) { return !std::isfinite(v); });
    if (bad != data.end()) {
        std::ostringstream msg;
        msg << what << ": non-finite value " << *bad << " at element " << (bad - data.begin());
        throw ParameterError(msg.str());
    }
}

void require_interval(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << "sampling interval " << name << " must be positive and finite, got " << value;
        throw ParameterError(msg.str());
    }
}

void require_index(std::size_t index, std::size_t extent, const char* axis) {
    if (index >= extent) {
        std::ostringstream msg;
        msg << axis << " index " << index << " out of range [0, " << extent << ")";
        throw BoundsError(msg.str());
    }
}

}  // namespace

Grid2::Grid2(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows_ == 0 || cols_ == 0) {
        throw SizeError("grid dimensions must be at least 1x1");
    }
    if (data_.size() != rows_ * cols_) {
        std::ostringstream msg;
        msg << "grid data length " << data_.size() << " does not match " << rows_ << "x" << cols_;
        throw ShapeError(msg.str());
    }
    require_finite(data_, "grid");
}

Grid2 Grid2::filled(std::size_t rows, std::size_t cols, double value) {
    return Grid2(rows, cols, std::vector<double>(rows * cols, value));
}

double Grid2::at(std::size_t row, std::size_t col) const {
    require_index(row, rows_, "row");
    require_index(col, cols_, "column");
    return (*this)(row, col);
}

SeismicSection::SeismicSection(Grid2 grid, double dt, double dx, std::string label)
    : grid_(std::move(grid)), dt_(dt), dx_(dx), label_(std::move(label)) {
    require_interval(dt_, "dt");
    require_interval(dx_, "dx");
}

SeismicVolume::SeismicVolume(std::size_t nt, std::size_t nx, std::size_t ny, double dt,
                             double dx, double dy, std::vector<double> data)
    : nt_(nt), nx_(nx), ny_(ny), dt_(dt), dx_(dx), dy_(dy), data_(std::move(data)) {
    if (nt_ == 0 || nx_ == 0 || ny_ == 0) {
        throw SizeError("volume dimensions must all be at least 1");
    }
    require_interval(dt_, "dt");
    require_interval(dx_, "dx");
    require_interval(dy_, "dy");
    if (data_.size() != nt_ * nx_ * ny_) {
        std::ostringstream msg;
        msg << "volume data length " << data_.size() << " does not match " << nt_ << "x" << nx_
            << "x" << ny_;
        throw ShapeError(msg.str());
    }
    require_finite(data_, "volume");
}

Grid2 grid_slice_time(const SeismicVolume& vol, std::size_t t_index) {
    require_index(t_index, vol.nt(), "time");
    return Grid2::generate(vol.nx(), vol.ny(),
                           [&](std::size_t x, std::size_t y) { return vol(t_index, x, y); });
}

SeismicSection grid_section_inline(const SeismicVolume& vol, std::size_t x_index) {
    require_index(x_index, vol.nx(), "inline (x)");
    std::vector<double> data;
    data.reserve(vol.nt() * vol.ny());
    for (std::size_t y = 0; y < vol.ny(); ++y) {
        const auto tr = vol.trace(x_index, y);
        data.insert(data.end(), tr.begin(), tr.end());
    }
    return SeismicSection(Grid2(vol.nt(), vol.ny(), std::move(data)), vol.dt(), vol.dy(),
                          "inline " + std::to_string(x_index));
}

SeismicSection grid_section_crossline(const SeismicVolume& vol, std::size_t y_index) {
    require_index(y_index, vol.ny(), "crossline (y)");
    const auto begin = vol.values().begin() + static_cast<std::ptrdiff_t>(y_index * vol.nx() * vol.nt());
    std::vector<double> data(begin, begin + static_cast<std::ptrdiff_t>(vol.nx() * vol.nt()));
    return SeismicSection(Grid2(vol.nt(), vol.nx(), std::move(data)), vol.dt(), vol.dx(),
                          "crossline " + std::to_string(y_index));
}

SeismicVolume volume_from_inline_sections(std::span<const SeismicSection> sections, double dx) {
    if (sections.empty()) {
        throw SizeError("cannot assemble a volume from zero inline sections");
    }
    const auto& first = sections.front();
    const std::size_t nt = first.grid().rows();
    const std::size_t ny = first.grid().cols();
    const std::size_t nx = sections.size();
    std::vector<double> data(nt * nx * ny);
    for (std::size_t x = 0; x < nx; ++x) {
        const auto& g = sections[x].grid();
        if (!g.same_shape(first.grid())) {
            throw ShapeError("inline sections differ in dimensions");
        }
        for (std::size_t y = 0; y < ny; ++y) {
            const auto tr = g.trace(y);
            std::copy(tr.begin(), tr.end(), data.begin() + static_cast<std::ptrdiff_t>((y * nx + x) * nt));
        }
    }
    return SeismicVolume(nt, nx, ny, first.dt(), dx, first.dx(), std::move(data));
}

SeismicVolume volume_from_crossline_sections(std::span<const SeismicSection> sections, double dy) {
    if (sections.empty()) {
        throw SizeError("cannot assemble a volume from zero crossline sections");
    }
    const auto& first = sections.front();
    const std::size_t nt = first.grid().rows();
    const std::size_t nx = first.grid().cols();
    const std::size_t ny = sections.size();
    std::vector<double> data;
    data.reserve(nt * nx * ny);
    for (const auto& s : sections) {
        if (!s.grid().same_shape(first.grid())) {
            throw ShapeError("crossline sections differ in dimensions");
        }
        const auto v = s.grid().values();
        data.insert(data.end(), v.begin(), v.end());
    }
    return SeismicVolume(nt, nx, ny, first.dt(), first.dx(), dy, std::move(data));
}

Units units_for(AttributeKind kind) noexcept {
    switch (kind) {
        case AttributeKind::PhaseDip: return Units::SamplesPerTrace;
        case AttributeKind::DipAngle: return Units::Radians;
        case AttributeKind::MostPositiveCurvature:
        case AttributeKind::MostNegativeCurvature: return Units::PerMeter;
        case AttributeKind::Raw: break;
    }
    return Units::Dimensionless;
}

std::string_view to_string(AttributeKind kind) noexcept {
    switch (kind) {
        case AttributeKind::Raw: return "raw";
        case AttributeKind::PhaseDip: return "phase-dip";
        case AttributeKind::DipAngle: return "dip-angle";
        case AttributeKind::MostPositiveCurvature: return "most-positive-curvature";
        case AttributeKind::MostNegativeCurvature: return "most-negative-curvature";
    }
    return "raw";
}

std::string_view to_string(Units units) noexcept {
    switch (units) {
        case Units::Dimensionless: return "dimensionless";
        case Units::SamplesPerTrace: return "samples-per-trace";
        case Units::Radians: return "radians";
        case Units::PerMeter: return "per-meter";
    }
    return "dimensionless";
}

AttributeKind parse_attribute_kind(std::string_view name) {
    if (name == "raw") return AttributeKind::Raw;
    if (name == "phase-dip" || name == "dip") return AttributeKind::PhaseDip;
    if (name == "dip-angle") return AttributeKind::DipAngle;
    if (name == "most-positive-curvature" || name == "kpos") return AttributeKind::MostPositiveCurvature;
    if (name == "most-negative-curvature" || name == "kneg") return AttributeKind::MostNegativeCurvature;
    throw ParameterError("unknown attribute kind '" + std::string(name) + "'");
}

Units parse_units(std::string_view name) {
    for (auto u : {Units::Dimensionless, Units::SamplesPerTrace, Units::Radians, Units::PerMeter}) {
        if (to_string(u) == name) return u;
    }
    throw ParameterError("unknown units '" + std::string(name) + "'");
}

AttributeMap::AttributeMap(Grid2 grid, AttributeKind kind, std::optional<std::size_t> scale,
                           std::optional<Grid2> quality, Metadata meta)
    : grid_(std::move(grid)), kind_(kind), scale_(scale), quality_(std::move(quality)),
      meta_(std::move(meta)) {
    if (quality_) {
        if (!quality_->same_shape(grid_)) {
            throw ShapeError("quality mask dimensions differ from the attribute grid");
        }
        for (double q : quality_->values()) {
            if (q < 0.0 || q > 1.0) {
                throw ParameterError("quality mask values must lie in [0, 1]");
            }
        }
    }
}

AttributeMap AttributeMap::with_scale(std::optional<std::size_t> scale) const {
    AttributeMap copy = *this;
    copy.scale_ = scale;
    return copy;
}

AttributeMap AttributeMap::with_meta(Metadata meta) const {
    AttributeMap copy = *this;
    copy.meta_ = std::move(meta);
    return copy;
}

}  // namespace pyrafuse
