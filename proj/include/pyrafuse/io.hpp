#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "pyrafuse/grid.hpp"

namespace pyrafuse {

inline constexpr std::string_view kGridMagic = "PFGRID1";

/**
 * Parsed header of a grid file.
 *
 * The file is the magic line, `key=value` lines, a blank line, then
 * rows * cols * planes little-endian float32 samples in t-fastest order
 * (the quality mask of an attribute map follows when quality=1).
 */
struct GridFileHeader {
    enum class Content { Section, Volume, Attribute };

    Content content = Content::Section;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t planes = 1;
    std::optional<double> dt;
    std::optional<double> dx;
    std::optional<double> dy;
    AttributeKind kind = AttributeKind::Raw;
    Units units = Units::Dimensionless;
    std::optional<std::size_t> scale;  // empty: fused or not a pyramid product
    bool has_quality = false;
    std::string label;
    std::map<std::string, std::string> meta;
    std::uint64_t data_offset = 0;
};

using GridContent = std::variant<SeismicSection, SeismicVolume, AttributeMap>;

struct GridFile {
    GridFileHeader header;
    GridContent content;
};

/// Atomic (temp file + rename) writers. Values are stored as float32.
/// Seismic writers take optional metadata (stored as meta.* header keys).
void write_grid(const std::filesystem::path& path, const SeismicSection& section,
                const std::map<std::string, std::string>& meta = {});
void write_grid(const std::filesystem::path& path, const SeismicVolume& volume,
                const std::map<std::string, std::string>& meta = {});
void write_grid(const std::filesystem::path& path, const AttributeMap& map);

/// Reads and validates magic, dims and payload length. Every inconsistency
/// raises FormatError with the byte offset where it was found.
GridFile read_grid(const std::filesystem::path& path);
GridFileHeader read_grid_header(const std::filesystem::path& path);

/// Header as the `info` command prints it: one key=value per line.
std::string describe(const GridFileHeader& header);

/// Accessors that throw ConfigError naming the actual content.
SeismicSection as_section(const GridFile& file);
SeismicVolume as_volume(const GridFile& file);
/// Sections become Raw maps; volumes are rejected.
AttributeMap as_map(const GridFile& file);

// SEG-Y -----------------------------------------------------------------

enum class SegyFormat { Ibm = 1, Ieee = 5 };
enum class ByteOrder { Big, Little };

/// Throws ParameterError listing the supported codes for anything but 1 or 5.
SegyFormat segy_format_from_code(int code);

struct SegyImportOptions {
    std::optional<SegyFormat> format;  // overrides the binary header code
    ByteOrder byte_order = ByteOrder::Big;
    std::optional<std::size_t> max_traces;
    double dx = 25.0;  // lateral intervals; SEG-Y does not carry them reliably
    double dy = 25.0;
};

using SeismicData = std::variant<SeismicSection, SeismicVolume>;

/**
 * Imports fixed-length SEG-Y. Traces whose inline (bytes 189-192) and
 * crossline (bytes 193-196) numbers tile a full grid become a volume with
 * x = inline and y = crossline; anything else is a section in file order.
 */
SeismicData segy_import(const std::filesystem::path& path, const SegyImportOptions& opts = {});

/// IBM System/360 single-precision hex float. Exact in double.
double ibm_to_double(std::uint32_t word) noexcept;

// Images ----------------------------------------------------------------

/**
 * 8-bit binary PGM. Values map linearly from the [lo, hi] percentiles
 * (linear interpolation between order statistics) to 0..255 and clip
 * outside. A map whose percentile range collapses is written as 128, with
 * anything strictly below or above going to 0 or 255.
 */
void export_pgm(const AttributeMap& map, const std::filesystem::path& path, double clip_lo_pct = 2.0,
                double clip_hi_pct = 98.0);

/// Whole file as bytes; IoError when unreadable.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace pyrafuse
