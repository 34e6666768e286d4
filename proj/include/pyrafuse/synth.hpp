#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pyrafuse/grid.hpp"

namespace pyrafuse {

/// Name of the noise generator recorded in synthetic metadata.
inline constexpr std::string_view kNoiseAlgorithm = "mt19937_64/std::normal_distribution";

/// Ricker wavelet (1 - 2 pi^2 f^2 t^2) exp(-pi^2 f^2 t^2) at time t (seconds).
double ricker_value(double f_peak, double t) noexcept;

/// Ricker sampled at t = -L dt .. L dt (2L + 1 samples). Throws
/// ParameterError when f_peak is not below the Nyquist frequency 1/(2 dt).
std::vector<double> ricker(double f_peak, double dt, std::size_t half_length);

enum class EventType { Plane, Quadratic };

/**
 * One reflector. Its arrival, in samples, at trace (x, y) is
 *   t0/dt + dip_x x + dip_y y + curvature ((x - apex_x) dx)^2 / (velocity dt)
 * plus the throw of every fault at or left of x. The quadratic term is the
 * two-way time of the depth surface z = curvature/2 (x - apex_x)^2 under
 * the time-dip velocity convention, so curvature is in 1/m.
 */
struct SynthEvent {
    EventType type = EventType::Plane;
    double t0 = 0.0;       // seconds, at trace 0 (or at the apex for quadratics)
    double dip_x = 0.0;    // samples per trace
    double dip_y = 0.0;    // samples per trace
    double curvature = 0.0;
    std::optional<double> apex_x;  // trace index, defaults to the centre trace
    double amplitude = 1.0;
};

/// Vertical fault: every trace with inline index >= `trace` is shifted down.
struct SynthFault {
    std::size_t trace = 0;
    long throw_samples = 0;
};

struct SynthSpec {
    std::size_t nt = 256;
    std::size_t nx = 128;
    std::optional<std::size_t> ny;  // present => volume
    double dt = 0.004;
    double dx = 25.0;
    double dy = 25.0;
    double f_peak = 25.0;
    double velocity = 2000.0;
    std::vector<SynthEvent> events;
    std::vector<SynthFault> faults;
    std::optional<double> snr_db;
    std::uint64_t seed = 0;
};

/**
 * Analytic truth for the shallowest event of each trace.
 *
 * Sections: grids are nt x nx (constant down each trace).
 * Volumes: grids are nx x ny maps, constant along time.
 */
struct GroundTruth {
    Grid2 dip_p;                       // samples per trace, along x
    std::optional<Grid2> dip_q;        // samples per trace, along y (volumes)
    std::optional<Grid2> k_pos_true;   // 1/m (volumes)
    std::optional<Grid2> k_neg_true;   // 1/m (volumes)
};

struct Synthetic {
    std::variant<SeismicSection, SeismicVolume> data;
    GroundTruth truth;
    std::optional<double> measured_snr_db;  // signal power over realized noise power
    std::string noise_algorithm;            // empty when no noise was added
};

/// Throws ParameterError for invalid dims, sampling, Nyquist violations, or
/// events that never enter the time window.
void validate(const SynthSpec& spec);

/// Renders the events, applies faults, adds noise scaled to exactly snr_db
/// when requested. Identical specs give byte-identical output.
Synthetic make_synthetic(const SynthSpec& spec);

/// key=value text, one key per line, `#` comments. Events and faults repeat:
///   event=plane,t0=0.2,dip_x=0.5,amplitude=1
///   event=quadratic,t0=0.3,curvature=1e-4,apex_x=64
///   fault=64,5
SynthSpec parse_synth_spec(std::string_view text);
std::string format_synth_spec(const SynthSpec& spec);

/// (x[n+1] - x[n-1]) / 2 inside, one-sided differences at the ends.
std::vector<double> central_difference(std::span<const double> x);

struct DerivativeNoiseReport {
    std::vector<double> clean;
    std::vector<double> noisy;
    std::vector<double> clean_derivative;
    std::vector<double> noisy_derivative;
    // Empty when no noise was added (reported as "clean").
    std::optional<double> snr_trace_db;
    std::optional<double> snr_derivative_db;
};

/**
 * Ricker reflectivity trace, optionally with white Gaussian noise at
 * snr_db, and the SNR before and after a central-difference derivative.
 * Needs trace_len >= 64.
 */
DerivativeNoiseReport derivative_noise_demo(std::size_t trace_len, std::optional<double> snr_db,
                                            std::uint64_t seed, double f_peak = 25.0,
                                            double dt = 0.004);

}  // namespace pyrafuse
