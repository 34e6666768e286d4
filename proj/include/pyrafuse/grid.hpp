#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pyrafuse {

/**
 * Dense immutable 2D grid of finite doubles.
 *
 * Rows index time samples and columns index traces. Storage is
 * trace-contiguous: element (row, col) lives at col * rows + row, so every
 * trace is a contiguous span. For horizontal slices of a volume the row axis
 * is the inline position and the column axis the crossline position.
 */
class Grid2 {
public:
    /// Takes ownership of `data` laid out trace-contiguously. Rejects empty
    /// dimensions, a length mismatch, and any NaN or Inf element.
    Grid2(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Grid2 filled(std::size_t rows, std::size_t cols, double value);

    /// Builds a grid from `fn(row, col)`.
    template <class Fn>
    static Grid2 generate(std::size_t rows, std::size_t cols, Fn&& fn) {
        std::vector<double> data(rows * cols);
        for (std::size_t c = 0; c < cols; ++c) {
            for (std::size_t r = 0; r < rows; ++r) {
                data[c * rows + r] = fn(r, c);
            }
        }
        return Grid2(rows, cols, std::move(data));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double operator()(std::size_t row, std::size_t col) const noexcept {
        return data_[col * rows_ + row];
    }

    /// Bounds-checked access.
    double at(std::size_t row, std::size_t col) const;

    std::span<const double> trace(std::size_t col) const noexcept {
        return {data_.data() + col * rows_, rows_};
    }

    std::span<const double> values() const noexcept { return data_; }

    bool same_shape(const Grid2& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    bool operator==(const Grid2&) const = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// A 2D seismic section: time samples x traces with sampling intervals.
class SeismicSection {
public:
    SeismicSection(Grid2 grid, double dt, double dx, std::string label = {});

    const Grid2& grid() const noexcept { return grid_; }
    double dt() const noexcept { return dt_; }
    double dx() const noexcept { return dx_; }
    const std::string& label() const noexcept { return label_; }

private:
    Grid2 grid_;
    double dt_;
    double dx_;
    std::string label_;
};

/// A 3D seismic volume (time x inline position x crossline position),
/// stored t-fastest: element (t, x, y) lives at (y * nx + x) * nt + t.
class SeismicVolume {
public:
    SeismicVolume(std::size_t nt, std::size_t nx, std::size_t ny, double dt, double dx,
                  double dy, std::vector<double> data);

    std::size_t nt() const noexcept { return nt_; }
    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    double dt() const noexcept { return dt_; }
    double dx() const noexcept { return dx_; }
    double dy() const noexcept { return dy_; }

    double operator()(std::size_t t, std::size_t x, std::size_t y) const noexcept {
        return data_[(y * nx_ + x) * nt_ + t];
    }

    std::span<const double> trace(std::size_t x, std::size_t y) const noexcept {
        return {data_.data() + (y * nx_ + x) * nt_, nt_};
    }

    std::span<const double> values() const noexcept { return data_; }

    bool operator==(const SeismicVolume&) const = default;

private:
    std::size_t nt_;
    std::size_t nx_;
    std::size_t ny_;
    double dt_;
    double dx_;
    double dy_;
    std::vector<double> data_;
};

/// Horizontal slice at time index `t_index`: an nx x ny grid.
Grid2 grid_slice_time(const SeismicVolume& vol, std::size_t t_index);

/// Vertical section at inline position `x_index`: nt x ny, traces along the
/// crossline axis, lateral interval dy.
SeismicSection grid_section_inline(const SeismicVolume& vol, std::size_t x_index);

/// Vertical section at crossline position `y_index`: nt x nx, traces along
/// the inline axis, lateral interval dx.
SeismicSection grid_section_crossline(const SeismicVolume& vol, std::size_t y_index);

/// Inverse of grid_section_inline over every x. All sections must share dims.
SeismicVolume volume_from_inline_sections(std::span<const SeismicSection> sections, double dx);

/// Inverse of grid_section_crossline over every y. All sections must share dims.
SeismicVolume volume_from_crossline_sections(std::span<const SeismicSection> sections, double dy);

enum class AttributeKind { Raw, PhaseDip, DipAngle, MostPositiveCurvature, MostNegativeCurvature };

enum class Units { Dimensionless, SamplesPerTrace, Radians, PerMeter };

Units units_for(AttributeKind kind) noexcept;

std::string_view to_string(AttributeKind kind) noexcept;
std::string_view to_string(Units units) noexcept;

/// Parses the names produced by to_string as well as the CLI short forms
/// (dip, dip-angle, kpos, kneg). Throws ParameterError on anything else.
AttributeKind parse_attribute_kind(std::string_view name);
Units parse_units(std::string_view name);

/**
 * A tagged attribute grid.
 *
 * Units follow from the kind. `scale` is the pyramid level the map came
 * from, or empty for a fused map. The optional quality grid holds 1 where
 * the attribute is defined and 0 where a guard fired.
 */
class AttributeMap {
public:
    using Metadata = std::map<std::string, std::string>;

    AttributeMap(Grid2 grid, AttributeKind kind, std::optional<std::size_t> scale,
                 std::optional<Grid2> quality = std::nullopt, Metadata meta = {});

    const Grid2& grid() const noexcept { return grid_; }
    AttributeKind kind() const noexcept { return kind_; }
    Units units() const noexcept { return units_for(kind_); }
    std::optional<std::size_t> scale() const noexcept { return scale_; }
    bool is_fused() const noexcept { return !scale_.has_value(); }
    const std::optional<Grid2>& quality() const noexcept { return quality_; }
    const Metadata& meta() const noexcept { return meta_; }

    AttributeMap with_scale(std::optional<std::size_t> scale) const;
    AttributeMap with_meta(Metadata meta) const;

private:
    Grid2 grid_;
    AttributeKind kind_;
    std::optional<std::size_t> scale_;
    std::optional<Grid2> quality_;
    Metadata meta_;
};

}  // namespace pyrafuse
