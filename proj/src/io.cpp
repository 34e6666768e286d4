#include "pyrafuse/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <unistd.h>

#include "pyrafuse/error.hpp"
#include "text.hpp"

namespace pyrafuse {

namespace fs = std::filesystem;

namespace {

void check_header_text(std::string_view what, std::string_view s) {
    if (s.find_first_of("\n\r") != std::string_view::npos) {
        throw ParameterError(std::string(what) + " must not contain line breaks");
    }
}

void put_f32(std::string& out, double v) {
    const auto f = static_cast<float>(v);
    const auto u = std::bit_cast<std::uint32_t>(f);
    const char b[4] = {static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff),
                       static_cast<char>((u >> 16) & 0xff), static_cast<char>((u >> 24) & 0xff)};
    out.append(b, 4);
}

float get_f32_le(const char* p) {
    const auto* b = reinterpret_cast<const unsigned char*>(p);
    const std::uint32_t u = std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) |
                            (std::uint32_t(b[2]) << 16) | (std::uint32_t(b[3]) << 24);
    return std::bit_cast<float>(u);
}

// Header lines (without magic and offset) followed by the payload.
std::string assemble(std::string_view lines, std::string_view payload) {
    // data-offset counts its own digits, so iterate until the length settles.
    const std::string head = std::string(kGridMagic) + "\n" + std::string(lines);
    std::uint64_t offset = head.size();
    std::string tail;
    while (true) {
        tail = "data-offset=" + std::to_string(offset) + "\n\n";
        const std::uint64_t next = head.size() + tail.size();
        if (next == offset) break;
        offset = next;
    }
    std::string out = head + tail;
    out.append(payload);
    return out;
}

std::string meta_lines(const std::map<std::string, std::string>& meta) {
    std::string out;
    for (const auto& [k, v] : meta) {
        check_header_text("metadata", k);
        check_header_text("metadata", v);
        if (k.find('=') != std::string::npos) throw ParameterError("metadata keys must not contain '='");
        out += "meta." + k + "=" + v + "\n";
    }
    return out;
}

std::string section_lines(const SeismicSection& s) {
    std::ostringstream out;
    out << "content=section\nrows=" << s.grid().rows() << "\ncols=" << s.grid().cols()
        << "\ndt=" << detail::format_double(s.dt()) << "\ndx=" << detail::format_double(s.dx()) << "\nkind=raw\nunits=dimensionless\n";
    if (!s.label().empty()) out << "label=" << s.label() << "\n";
    return out.str();
}

struct Cursor {
    std::string_view data;
    std::size_t pos = 0;

    // Next line without its terminator; nullopt when no newline is left.
    std::optional<std::string_view> line() {
        const auto nl = data.find('\n', pos);
        if (nl == std::string_view::npos) return std::nullopt;
        auto l = data.substr(pos, nl - pos);
        pos = nl + 1;
        return l;
    }
};

template <class T>
T parse_number(std::string_view s, std::string_view key, std::uint64_t offset) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw FormatError("bad value '" + std::string(s) + "' for " + std::string(key), offset);
    }
    return v;
}

GridFileHeader parse_header(std::string_view data) {
    Cursor cur{data};
    const auto magic = cur.line();
    if (!magic || *magic != kGridMagic) {
        std::string seen(data.substr(0, std::min<std::size_t>(data.find('\n'), 16)));
        throw FormatError("bad magic '" + seen + "', expected '" + std::string(kGridMagic) + "'", 0);
    }

    GridFileHeader h;
    bool have_rows = false, have_cols = false, have_offset = false, have_content = false;
    bool have_kind = false, have_units = false;
    std::uint64_t units_at = 0;
    std::uint64_t dims_at = 0;
    while (true) {
        const std::uint64_t at = cur.pos;
        const auto line = cur.line();
        if (!line) throw FormatError("header is not terminated by a blank line", at);
        if (line->empty()) break;
        const auto eq = line->find('=');
        if (eq == std::string_view::npos) throw FormatError("header line without '='", at);
        const auto key = line->substr(0, eq);
        const auto value = line->substr(eq + 1);
        if (key == "content") {
            have_content = true;
            if (value == "section") h.content = GridFileHeader::Content::Section;
            else if (value == "volume") h.content = GridFileHeader::Content::Volume;
            else if (value == "attribute") h.content = GridFileHeader::Content::Attribute;
            else throw FormatError("unknown content '" + std::string(value) + "'", at);
        } else if (key == "rows") {
            h.rows = parse_number<std::size_t>(value, key, at);
            have_rows = true;
            dims_at = std::max(dims_at, at);
        } else if (key == "cols") {
            h.cols = parse_number<std::size_t>(value, key, at);
            have_cols = true;
            dims_at = std::max(dims_at, at);
        } else if (key == "planes") {
            h.planes = parse_number<std::size_t>(value, key, at);
            dims_at = std::max(dims_at, at);
        } else if (key == "dt") {
            h.dt = parse_number<double>(value, key, at);
        } else if (key == "dx") {
            h.dx = parse_number<double>(value, key, at);
        } else if (key == "dy") {
            h.dy = parse_number<double>(value, key, at);
        } else if (key == "kind") {
            try {
                h.kind = parse_attribute_kind(value);
            } catch (const ParameterError&) {
                throw FormatError("unknown kind '" + std::string(value) + "'", at);
            }
            have_kind = true;
        } else if (key == "units") {
            try {
                h.units = parse_units(value);
            } catch (const ParameterError&) {
                throw FormatError("unknown units '" + std::string(value) + "'", at);
            }
            have_units = true;
            units_at = at;
        } else if (key == "scale") {
            if (value == "fused") h.scale.reset();
            else h.scale = parse_number<std::size_t>(value, key, at);
        } else if (key == "quality") {
            if (value != "0" && value != "1") throw FormatError("quality must be 0 or 1", at);
            h.has_quality = value == "1";
        } else if (key == "label") {
            h.label = std::string(value);
        } else if (key.substr(0, 5) == "meta.") {
            h.meta[std::string(key.substr(5))] = std::string(value);
        } else if (key == "data-offset") {
            h.data_offset = parse_number<std::uint64_t>(value, key, at);
            have_offset = true;
        } else {
            throw FormatError("unknown header key '" + std::string(key) + "'", at);
        }
    }
    const std::uint64_t header_end = cur.pos;
    if (!have_content || !have_rows || !have_cols || !have_offset) {
        throw FormatError("header lacks one of content, rows, cols, data-offset", header_end);
    }
    if (h.rows == 0 || h.cols == 0 || h.planes == 0) {
        throw FormatError("dimensions must be positive", dims_at);
    }
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / 8;
    if (h.rows > limit / h.cols || h.rows * h.cols > limit / h.planes) {
        throw FormatError("dimensions overflow the addressable payload", dims_at);
    }
    if (h.content != GridFileHeader::Content::Volume && h.planes != 1) {
        throw FormatError("planes given for a 2D grid", dims_at);
    }
    if (have_kind && have_units && units_for(h.kind) != h.units) {
        throw FormatError("units '" + std::string(to_string(h.units)) + "' do not match kind '" +
                              std::string(to_string(h.kind)) + "'",
                          units_at);
    }
    if (h.data_offset != header_end) {
        throw FormatError("data-offset " + std::to_string(h.data_offset) +
                              " does not match the end of the header",
                          header_end);
    }
    if (h.content != GridFileHeader::Content::Attribute && (!h.dt || !h.dx)) {
        throw FormatError("seismic grids need dt and dx", header_end);
    }
    if (h.content == GridFileHeader::Content::Volume && !h.dy) {
        throw FormatError("volumes need dy", header_end);
    }
    return h;
}

std::uint64_t payload_bytes(const GridFileHeader& h) {
    const std::uint64_t n = std::uint64_t(h.rows) * h.cols * h.planes;
    return n * 4 * (h.has_quality ? 2 : 1);
}

std::vector<double> decode_block(std::string_view data, std::uint64_t offset, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const float f = get_f32_le(data.data() + offset + 4 * i);
        if (!std::isfinite(f)) throw FormatError("non-finite sample", offset + 4 * i);
        out[i] = f;
    }
    return out;
}

// SEG-Y helpers.

std::uint32_t read_u32(std::string_view d, std::size_t at, ByteOrder order) {
    const auto* b = reinterpret_cast<const unsigned char*>(d.data() + at);
    if (order == ByteOrder::Big) {
        return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
               std::uint32_t(b[3]);
    }
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
           (std::uint32_t(b[3]) << 24);
}

std::uint16_t read_u16(std::string_view d, std::size_t at, ByteOrder order) {
    const auto* b = reinterpret_cast<const unsigned char*>(d.data() + at);
    if (order == ByteOrder::Big) return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

constexpr std::size_t kTextHeader = 3200;
constexpr std::size_t kBinaryHeader = 400;
constexpr std::size_t kTraceHeader = 240;
constexpr std::size_t kIntervalAt = 3216;
constexpr std::size_t kSamplesAt = 3220;
constexpr std::size_t kFormatAt = 3224;
constexpr std::size_t kTraceSamplesAt = 114;
constexpr std::size_t kInlineAt = 188;
constexpr std::size_t kCrosslineAt = 192;

const char* kSupportedCodes = "supported codes: 1 (IBM float), 5 (IEEE float)";

double percentile(const std::vector<double>& sorted, double pct) {
    const double pos = pct / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path.string() + "'");
    return buf.str();
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw IoError("error writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

void write_grid(const fs::path& path, const SeismicSection& section,
                const std::map<std::string, std::string>& meta) {
    check_header_text("label", section.label());
    std::string payload;
    payload.reserve(section.grid().size() * 4);
    for (double v : section.grid().values()) put_f32(payload, v);
    write_file_atomic(path, assemble(section_lines(section) + meta_lines(meta), payload));
}

void write_grid(const fs::path& path, const SeismicVolume& volume,
                const std::map<std::string, std::string>& meta) {
    std::ostringstream lines;
    lines << "content=volume\nrows=" << volume.nt() << "\ncols=" << volume.nx()
          << "\nplanes=" << volume.ny() << "\ndt=" << detail::format_double(volume.dt()) << "\ndx=" << detail::format_double(volume.dx())
          << "\ndy=" << detail::format_double(volume.dy()) << "\nkind=raw\nunits=dimensionless\n" << meta_lines(meta);
    std::string payload;
    payload.reserve(volume.values().size() * 4);
    for (double v : volume.values()) put_f32(payload, v);
    write_file_atomic(path, assemble(lines.str(), payload));
}

void write_grid(const fs::path& path, const AttributeMap& map) {
    std::ostringstream lines;
    lines << "content=attribute\nrows=" << map.grid().rows() << "\ncols=" << map.grid().cols()
          << "\nkind=" << to_string(map.kind()) << "\nunits=" << to_string(map.units())
          << "\nscale=" << (map.scale() ? std::to_string(*map.scale()) : std::string("fused"))
          << "\nquality=" << (map.quality() ? 1 : 0) << "\n";
    lines << meta_lines(map.meta());
    std::string payload;
    payload.reserve(map.grid().size() * 4 * (map.quality() ? 2 : 1));
    for (double v : map.grid().values()) put_f32(payload, v);
    if (map.quality()) {
        for (double v : map.quality()->values()) put_f32(payload, v);
    }
    write_file_atomic(path, assemble(lines.str(), payload));
}

GridFileHeader read_grid_header(const fs::path& path) {
    return parse_header(read_file(path));
}

GridFile read_grid(const fs::path& path) {
    const std::string data = read_file(path);
    GridFileHeader h = parse_header(data);
    const std::uint64_t expected = payload_bytes(h);
    const std::uint64_t actual = data.size() - h.data_offset;
    if (actual < expected) {
        throw FormatError("truncated payload: expected " + std::to_string(expected) + " bytes, got " +
                              std::to_string(actual),
                          data.size());
    }
    if (actual > expected) {
        throw FormatError("payload has " + std::to_string(actual - expected) + " trailing bytes",
                          h.data_offset + expected);
    }
    const std::size_t n = h.rows * h.cols * h.planes;
    std::vector<double> values = decode_block(data, h.data_offset, n);
    try {
        switch (h.content) {
            case GridFileHeader::Content::Section: {
                SeismicSection s(Grid2(h.rows, h.cols, std::move(values)), *h.dt, *h.dx, h.label);
                return {std::move(h), std::move(s)};
            }
            case GridFileHeader::Content::Volume: {
                SeismicVolume v(h.rows, h.cols, h.planes, *h.dt, *h.dx, *h.dy, std::move(values));
                return {std::move(h), std::move(v)};
            }
            case GridFileHeader::Content::Attribute: {
                std::optional<Grid2> quality;
                if (h.has_quality) {
                    quality = Grid2(h.rows, h.cols, decode_block(data, h.data_offset + 4 * n, n));
                }
                AttributeMap m(Grid2(h.rows, h.cols, std::move(values)), h.kind, h.scale,
                               std::move(quality), h.meta);
                return {std::move(h), std::move(m)};
            }
        }
    } catch (const FormatError&) {
        throw;
    } catch (const Error& e) {
        throw FormatError(std::string("inconsistent grid file: ") + e.what(), h.data_offset);
    }
    throw FormatError("unknown content", 0);
}

std::string describe(const GridFileHeader& h) {
    std::ostringstream out;
    const char* content = h.content == GridFileHeader::Content::Section  ? "section"
                          : h.content == GridFileHeader::Content::Volume ? "volume"
                                                                         : "attribute";
    out << "content=" << content << "\nrows=" << h.rows << "\ncols=" << h.cols << "\n";
    if (h.content == GridFileHeader::Content::Volume) out << "planes=" << h.planes << "\n";
    if (h.dt) out << "dt=" << detail::format_double(*h.dt) << "\n";
    if (h.dx) out << "dx=" << detail::format_double(*h.dx) << "\n";
    if (h.dy) out << "dy=" << detail::format_double(*h.dy) << "\n";
    out << "kind=" << to_string(h.kind) << "\nunits=" << to_string(h.units) << "\n";
    if (h.content == GridFileHeader::Content::Attribute) {
        out << "scale=" << (h.scale ? std::to_string(*h.scale) : std::string("fused")) << "\n";
        out << "quality=" << (h.has_quality ? 1 : 0) << "\n";
    }
    if (!h.label.empty()) out << "label=" << h.label << "\n";
    for (const auto& [k, v] : h.meta) out << "meta." << k << "=" << v << "\n";
    out << "data-offset=" << h.data_offset << "\n";
    return out.str();
}

SeismicSection as_section(const GridFile& file) {
    if (const auto* s = std::get_if<SeismicSection>(&file.content)) return *s;
    throw ConfigError(std::holds_alternative<SeismicVolume>(file.content)
                          ? "expected a section, got a volume"
                          : "expected a section, got an attribute map");
}

SeismicVolume as_volume(const GridFile& file) {
    if (const auto* v = std::get_if<SeismicVolume>(&file.content)) return *v;
    throw ConfigError(std::holds_alternative<SeismicSection>(file.content)
                          ? "expected a volume, got a section"
                          : "expected a volume, got an attribute map");
}

AttributeMap as_map(const GridFile& file) {
    if (const auto* m = std::get_if<AttributeMap>(&file.content)) return *m;
    if (const auto* s = std::get_if<SeismicSection>(&file.content)) {
        return AttributeMap(s->grid(), AttributeKind::Raw, 0);
    }
    throw ConfigError("expected a 2D grid, got a volume");
}

SegyFormat segy_format_from_code(int code) {
    if (code == 1) return SegyFormat::Ibm;
    if (code == 5) return SegyFormat::Ieee;
    throw ParameterError("unsupported SEG-Y format code " + std::to_string(code) + "; " + kSupportedCodes);
}

double ibm_to_double(std::uint32_t word) noexcept {
    const std::uint32_t fraction = word & 0x00ffffffu;
    if (fraction == 0) return (word & 0x80000000u) ? -0.0 : 0.0;
    const int exponent = static_cast<int>((word >> 24) & 0x7f) - 64;
    const double v = std::ldexp(static_cast<double>(fraction), 4 * exponent - 24);
    return (word & 0x80000000u) ? -v : v;
}

SeismicData segy_import(const fs::path& path, const SegyImportOptions& opts) {
    const std::string data = read_file(path);
    const std::string_view d = data;
    const ByteOrder order = opts.byte_order;
    if (d.size() < kTextHeader + kBinaryHeader) {
        throw FormatError("file is shorter than the 3600-byte SEG-Y headers (" +
                              std::to_string(d.size()) + " bytes)",
                          d.size());
    }
    const std::uint16_t interval_us = read_u16(d, kIntervalAt, order);
    if (interval_us == 0) throw FormatError("sample interval is zero", kIntervalAt);
    std::size_t ns = read_u16(d, kSamplesAt, order);
    const int code = static_cast<std::int16_t>(read_u16(d, kFormatAt, order));
    SegyFormat format;
    if (opts.format) {
        format = *opts.format;
    } else if (code == 1 || code == 5) {
        format = static_cast<SegyFormat>(code);
    } else {
        throw UnsupportedFormatError(
            "unsupported SEG-Y sample format code " + std::to_string(code) + "; " + kSupportedCodes,
            kFormatAt);
    }

    std::size_t pos = kTextHeader + kBinaryHeader;
    if (pos == d.size()) throw FormatError("file contains no traces", pos);
    if (ns == 0) {
        if (d.size() < pos + kTraceHeader) throw FormatError("truncated trace header", d.size());
        ns = read_u16(d, pos + kTraceSamplesAt, order);
        if (ns == 0) throw FormatError("samples per trace is zero", pos + kTraceSamplesAt);
    }
    const std::size_t record = kTraceHeader + 4 * ns;

    std::vector<double> samples;
    std::vector<std::pair<std::int32_t, std::int32_t>> keys;
    std::size_t traces = 0;
    while (pos < d.size() && (!opts.max_traces || traces < *opts.max_traces)) {
        if (d.size() - pos < record) {
            throw FormatError("truncated trace " + std::to_string(traces) + ": expected " +
                                  std::to_string(record) + " bytes, got " + std::to_string(d.size() - pos),
                              pos);
        }
        const std::size_t trace_ns = read_u16(d, pos + kTraceSamplesAt, order);
        if (trace_ns != 0 && trace_ns != ns) {
            throw FormatError("trace " + std::to_string(traces) + " has " + std::to_string(trace_ns) +
                                  " samples, expected " + std::to_string(ns),
                              pos + kTraceSamplesAt);
        }
        keys.emplace_back(static_cast<std::int32_t>(read_u32(d, pos + kInlineAt, order)),
                          static_cast<std::int32_t>(read_u32(d, pos + kCrosslineAt, order)));
        for (std::size_t i = 0; i < ns; ++i) {
            const std::size_t at = pos + kTraceHeader + 4 * i;
            const std::uint32_t w = read_u32(d, at, order);
            const double v = format == SegyFormat::Ibm ? ibm_to_double(w)
                                                       : static_cast<double>(std::bit_cast<float>(w));
            if (!std::isfinite(v)) throw FormatError("non-finite sample", at);
            samples.push_back(v);
        }
        pos += record;
        ++traces;
    }
    if (traces == 0) throw FormatError("file contains no traces", pos);
    const double dt = interval_us * 1e-6;

    // Full inline x crossline tiling -> volume.
    std::vector<std::int32_t> il, xl;
    for (const auto& [i, x] : keys) {
        il.push_back(i);
        xl.push_back(x);
    }
    std::sort(il.begin(), il.end());
    il.erase(std::unique(il.begin(), il.end()), il.end());
    std::sort(xl.begin(), xl.end());
    xl.erase(std::unique(xl.begin(), xl.end()), xl.end());
    if (il.size() > 1 && xl.size() > 1 && il.size() * xl.size() == traces) {
        const std::size_t nx = il.size();
        const std::size_t ny = xl.size();
        std::vector<double> vol(traces * ns);
        std::vector<bool> seen(traces, false);
        bool complete = true;
        for (std::size_t k = 0; k < traces && complete; ++k) {
            const auto x = static_cast<std::size_t>(
                std::lower_bound(il.begin(), il.end(), keys[k].first) - il.begin());
            const auto y = static_cast<std::size_t>(
                std::lower_bound(xl.begin(), xl.end(), keys[k].second) - xl.begin());
            const std::size_t slot = y * nx + x;
            if (seen[slot]) {
                complete = false;
                break;
            }
            seen[slot] = true;
            std::copy_n(samples.begin() + static_cast<std::ptrdiff_t>(k * ns), ns,
                        vol.begin() + static_cast<std::ptrdiff_t>(slot * ns));
        }
        if (complete) return SeismicVolume(ns, nx, ny, dt, opts.dx, opts.dy, std::move(vol));
    }
    return SeismicSection(Grid2(ns, traces, std::move(samples)), dt, opts.dx, path.filename().string());
}

void export_pgm(const AttributeMap& map, const fs::path& path, double clip_lo_pct, double clip_hi_pct) {
    if (!(clip_lo_pct >= 0.0) || !(clip_hi_pct <= 100.0) || !(clip_lo_pct < clip_hi_pct)) {
        std::ostringstream msg;
        msg << "percentiles must satisfy 0 <= lo < hi <= 100, got " << clip_lo_pct << "/" << clip_hi_pct;
        throw ParameterError(msg.str());
    }
    const Grid2& g = map.grid();
    std::vector<double> sorted(g.values().begin(), g.values().end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = percentile(sorted, clip_lo_pct);
    const double hi = percentile(sorted, clip_hi_pct);

    std::string out = "P5 " + std::to_string(g.cols()) + " " + std::to_string(g.rows()) + " 255\n";
    out.reserve(out.size() + g.size());
    for (std::size_t r = 0; r < g.rows(); ++r) {
        for (std::size_t c = 0; c < g.cols(); ++c) {
            const double v = g(r, c);
            int px;
            if (hi > lo) {
                const double t = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
                px = static_cast<int>(std::lround(t * 255.0));
            } else {
                px = v < lo ? 0 : v > hi ? 255 : 128;
            }
            out.push_back(static_cast<char>(static_cast<unsigned char>(px)));
        }
    }
    write_file_atomic(path, out);
}

}  // namespace pyrafuse
