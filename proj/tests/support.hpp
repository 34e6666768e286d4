#pragma once

// Helpers shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pyrafuse/grid.hpp"
#include "pyrafuse/io.hpp"
#include "pyrafuse/synth.hpp"

namespace pftest {

using namespace pyrafuse;

// Edge exclusion for every RMS comparison.
inline constexpr std::size_t kMarginSamples = 8;
inline constexpr std::size_t kMarginTraces = 4;

struct PlaneCase {
    std::size_t nt = 256;
    std::size_t nx = 128;
    double dt = 0.004;
    double dx = 25.0;
    double f_peak = 25.0;
    double slope = 0.5;  // samples per trace
    double t0 = 0.16;    // seconds at trace 0
};

inline SynthSpec plane_spec(const PlaneCase& c, std::optional<double> snr_db = std::nullopt,
                            std::uint64_t seed = 0) {
    SynthSpec s;
    s.nt = c.nt;
    s.nx = c.nx;
    s.dt = c.dt;
    s.dx = c.dx;
    s.f_peak = c.f_peak;
    s.snr_db = snr_db;
    s.seed = seed;
    SynthEvent e;
    e.t0 = c.t0;
    e.dip_x = c.slope;
    s.events.push_back(e);
    return s;
}

inline SeismicSection plane_section(const PlaneCase& c, std::optional<double> snr_db = std::nullopt,
                                    std::uint64_t seed = 0) {
    return std::get<SeismicSection>(make_synthetic(plane_spec(c, snr_db, seed)).data);
}

// Half-width of the Ricker main lobe (first zero crossing), in samples.
inline double main_lobe_samples(double f_peak, double dt) {
    return 1.0 / (std::numbers::pi * f_peak * std::sqrt(2.0)) / dt;
}

/// Interior cells on the main lobe of the plane event: the only place where
/// the phase of a single reflector is defined.
inline std::vector<std::pair<std::size_t, std::size_t>> plane_support(const PlaneCase& c) {
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    const double half = main_lobe_samples(c.f_peak, c.dt);
    for (std::size_t n = kMarginTraces; n + kMarginTraces < c.nx; ++n) {
        const double tau = c.t0 / c.dt + c.slope * static_cast<double>(n);
        for (std::size_t t = kMarginSamples; t + kMarginSamples < c.nt; ++t) {
            if (std::abs(static_cast<double>(t) - tau) <= half) cells.emplace_back(t, n);
        }
    }
    return cells;
}

/// RMS of (estimate - truth) / |truth| over `cells`.
inline double rms_relative(const Grid2& estimate, double truth,
                           const std::vector<std::pair<std::size_t, std::size_t>>& cells) {
    double acc = 0.0;
    for (const auto& [r, c] : cells) {
        const double e = (estimate(r, c) - truth) / std::abs(truth);
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(cells.size()));
}

inline double rms_error(const Grid2& estimate, double truth,
                        const std::vector<std::pair<std::size_t, std::size_t>>& cells) {
    double acc = 0.0;
    for (const auto& [r, c] : cells) {
        const double e = estimate(r, c) - truth;
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(cells.size()));
}

inline Grid2 random_grid(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double lo = -1.0,
                         double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    return Grid2::generate(rows, cols, [&](std::size_t, std::size_t) { return u(rng); });
}

// SEG-Y fixtures ---------------------------------------------------------

/// IBM hex float nearest to v (round half away from zero on the 24-bit fraction).
inline std::uint32_t double_to_ibm(double v) {
    if (v == 0.0) return 0;
    const std::uint32_t sign = v < 0 ? 0x80000000u : 0u;
    double m = std::abs(v);
    int e = 0;
    while (m >= 1.0) {
        m /= 16.0;
        ++e;
    }
    while (m < 1.0 / 16.0) {
        m *= 16.0;
        --e;
    }
    auto frac = static_cast<std::uint32_t>(std::llround(std::ldexp(m, 24)));
    if (frac == (1u << 24)) {
        frac >>= 4;
        ++e;
    }
    return sign | (static_cast<std::uint32_t>(e + 64) << 24) | frac;
}

struct SegyTrace {
    std::vector<float> samples;
    std::int32_t inline_no = 0;
    std::int32_t crossline_no = 0;
};

inline void put_be(std::string& buf, std::size_t at, std::uint32_t v, int bytes, bool little) {
    for (int i = 0; i < bytes; ++i) {
        const int shift = little ? 8 * i : 8 * (bytes - 1 - i);
        buf[at + static_cast<std::size_t>(i)] = static_cast<char>((v >> shift) & 0xff);
    }
}

/// Writes a minimal fixed-length SEG-Y file with the given format code.
inline void write_segy(const std::filesystem::path& path, const std::vector<SegyTrace>& traces,
                       std::uint16_t interval_us, int format_code, bool little = false,
                       std::optional<std::uint16_t> binary_ns = std::nullopt) {
    const std::size_t ns = traces.empty() ? 0 : traces.front().samples.size();
    std::string buf(3600, '\0');
    std::fill(buf.begin(), buf.begin() + 3200, '\x40');  // EBCDIC spaces
    put_be(buf, 3216, interval_us, 2, little);
    put_be(buf, 3220, binary_ns.value_or(static_cast<std::uint16_t>(ns)), 2, little);
    put_be(buf, 3224, static_cast<std::uint32_t>(format_code), 2, little);
    for (const auto& t : traces) {
        const std::size_t base = buf.size();
        buf.resize(base + 240 + 4 * t.samples.size(), '\0');
        put_be(buf, base + 114, static_cast<std::uint32_t>(t.samples.size()), 2, little);
        put_be(buf, base + 188, static_cast<std::uint32_t>(t.inline_no), 4, little);
        put_be(buf, base + 192, static_cast<std::uint32_t>(t.crossline_no), 4, little);
        for (std::size_t i = 0; i < t.samples.size(); ++i) {
            const std::uint32_t w = format_code == 1 ? double_to_ibm(t.samples[i])
                                                     : std::bit_cast<std::uint32_t>(t.samples[i]);
            put_be(buf, base + 240 + 4 * i, w, 4, little);
        }
    }
    std::ofstream(path, std::ios::binary).write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("pyrafuse-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) { return read_file(p); }

}  // namespace pftest
