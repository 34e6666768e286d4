#include "pyrafuse/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "pyrafuse/error.hpp"
#include "text.hpp"

namespace pyrafuse {

namespace {

// Beyond |pi f t| = 6 the Ricker envelope is below 1e-15 of its peak.
constexpr double kRickerSupport = 6.0;

void check_nyquist(double f_peak, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        std::ostringstream msg;
        msg << "sample interval must be positive, got " << dt;
        throw ParameterError(msg.str());
    }
    if (!(f_peak > 0.0) || !std::isfinite(f_peak)) {
        std::ostringstream msg;
        msg << "peak frequency must be positive, got " << f_peak;
        throw ParameterError(msg.str());
    }
    const double nyquist = 0.5 / dt;
    if (f_peak >= nyquist) {
        std::ostringstream msg;
        msg << "peak frequency " << f_peak << " Hz is not below the Nyquist frequency " << nyquist
            << " Hz";
        throw ParameterError(msg.str());
    }
}

void check_positive(const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << name << " must be positive, got " << v;
        throw ParameterError(msg.str());
    }
}

void check_finite(const char* name, double v) {
    if (!std::isfinite(v)) {
        throw ParameterError(std::string(name) + " must be finite");
    }
}

double apex_of(const SynthEvent& e, const SynthSpec& spec) {
    return e.apex_x.value_or(0.5 * static_cast<double>(spec.nx - 1));
}

long fault_shift(const SynthSpec& spec, std::size_t x) {
    long shift = 0;
    for (const auto& f : spec.faults) {
        if (x >= f.trace) shift += f.throw_samples;
    }
    return shift;
}

// Arrival time in samples, fault shifts excluded.
double smooth_arrival(const SynthEvent& e, const SynthSpec& spec, double x, double y) {
    double tau = e.t0 / spec.dt + e.dip_x * x + e.dip_y * y;
    if (e.type == EventType::Quadratic) {
        const double off = (x - apex_of(e, spec)) * spec.dx;
        tau += e.curvature * off * off / (spec.velocity * spec.dt);
    }
    return tau;
}

// d(arrival)/dx in samples per trace.
double arrival_slope_x(const SynthEvent& e, const SynthSpec& spec, double x) {
    double p = e.dip_x;
    if (e.type == EventType::Quadratic) {
        p += 2.0 * e.curvature * (x - apex_of(e, spec)) * spec.dx * spec.dx /
             (spec.velocity * spec.dt);
    }
    return p;
}

void render_trace(const SynthSpec& spec, std::size_t x, std::size_t y, double* out) {
    const double half = kRickerSupport / (std::numbers::pi * spec.f_peak * spec.dt);
    const auto shift = static_cast<double>(fault_shift(spec, x));
    const auto last = static_cast<double>(spec.nt - 1);
    for (const auto& e : spec.events) {
        const double tau =
            smooth_arrival(e, spec, static_cast<double>(x), static_cast<double>(y)) + shift;
        const double lo = std::max(0.0, std::ceil(tau - half));
        const double hi = std::min(last, std::floor(tau + half));
        if (lo > hi) continue;
        for (auto t = static_cast<std::size_t>(lo); t <= static_cast<std::size_t>(hi); ++t) {
            out[t] += e.amplitude * ricker_value(spec.f_peak, (static_cast<double>(t) - tau) * spec.dt);
        }
    }
}

std::size_t shallowest(const SynthSpec& spec, std::size_t x, std::size_t y) {
    std::size_t best = 0;
    double best_tau = 0.0;
    for (std::size_t i = 0; i < spec.events.size(); ++i) {
        const double tau = smooth_arrival(spec.events[i], spec, static_cast<double>(x),
                                          static_cast<double>(y));
        if (i == 0 || tau < best_tau) {
            best = i;
            best_tau = tau;
        }
    }
    return best;
}

double power(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc / static_cast<double>(v.size());
}

// Adds white Gaussian noise scaled so signal power / noise power = 10^(snr/10)
// exactly. Returns the realized SNR in dB.
double add_noise(std::vector<double>& data, double snr_db, std::mt19937_64& rng) {
    const double ps = power(data);
    if (!(ps > 0.0)) {
        throw ParameterError("cannot scale noise to an SNR: the signal is identically zero");
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> noise(data.size());
    for (auto& n : noise) n = gauss(rng);
    const double target = ps / std::pow(10.0, snr_db / 10.0);
    const double gain = std::sqrt(target / power(noise));
    for (auto& n : noise) n *= gain;
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += noise[i];
    return 10.0 * std::log10(ps / power(noise));
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void bad_line(std::size_t line, const std::string& why) {
    throw ParameterError("synth spec line " + std::to_string(line) + ": " + why);
}

double parse_double(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        bad_line(line, "expected a number, got '" + std::string(s) + "'");
    }
    return v;
}

template <class Int>
Int parse_int(std::string_view s, std::size_t line) {
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        bad_line(line, "expected an integer, got '" + std::string(s) + "'");
    }
    return v;
}

SynthEvent parse_event(std::string_view value, std::size_t line) {
    const auto items = split(value, ',');
    SynthEvent e;
    if (items[0] == "plane") {
        e.type = EventType::Plane;
    } else if (items[0] == "quadratic") {
        e.type = EventType::Quadratic;
    } else {
        bad_line(line, "event type must be plane or quadratic, got '" + std::string(items[0]) + "'");
    }
    for (std::size_t i = 1; i < items.size(); ++i) {
        const auto eq = items[i].find('=');
        if (eq == std::string_view::npos) bad_line(line, "event field without '='");
        const auto key = trim(items[i].substr(0, eq));
        const double v = parse_double(trim(items[i].substr(eq + 1)), line);
        if (key == "t0") e.t0 = v;
        else if (key == "dip_x") e.dip_x = v;
        else if (key == "dip_y") e.dip_y = v;
        else if (key == "curvature") e.curvature = v;
        else if (key == "apex_x") e.apex_x = v;
        else if (key == "amplitude") e.amplitude = v;
        else bad_line(line, "unknown event field '" + std::string(key) + "'");
    }
    return e;
}

}  // namespace

double ricker_value(double f_peak, double t) noexcept {
    const double a = std::numbers::pi * f_peak * t;
    const double a2 = a * a;
    return (1.0 - 2.0 * a2) * std::exp(-a2);
}

std::vector<double> ricker(double f_peak, double dt, std::size_t half_length) {
    check_nyquist(f_peak, dt);
    std::vector<double> w(2 * half_length + 1);
    const auto L = static_cast<long>(half_length);
    for (long i = -L; i <= L; ++i) {
        // |i| keeps w(t) == w(-t) bit for bit.
        w[static_cast<std::size_t>(i + L)] = ricker_value(f_peak, static_cast<double>(std::labs(i)) * dt);
    }
    return w;
}

void validate(const SynthSpec& spec) {
    if (spec.nt == 0 || spec.nx == 0 || (spec.ny && *spec.ny == 0)) {
        throw ParameterError("synthetic dimensions must be at least 1");
    }
    check_nyquist(spec.f_peak, spec.dt);
    check_positive("dx", spec.dx);
    check_positive("dy", spec.dy);
    check_positive("velocity", spec.velocity);
    if (spec.snr_db) check_finite("snr_db", *spec.snr_db);
    if (spec.events.empty()) {
        throw ParameterError("a synthetic needs at least one event");
    }
    for (const auto& f : spec.faults) {
        if (f.trace >= spec.nx) {
            std::ostringstream msg;
            msg << "fault trace " << f.trace << " outside 0.." << spec.nx - 1;
            throw ParameterError(msg.str());
        }
    }
    const std::size_t ny = spec.ny.value_or(1);
    const auto last = static_cast<double>(spec.nt - 1);
    for (std::size_t i = 0; i < spec.events.size(); ++i) {
        const auto& e = spec.events[i];
        check_finite("event t0", e.t0);
        check_finite("event dip_x", e.dip_x);
        check_finite("event dip_y", e.dip_y);
        check_finite("event curvature", e.curvature);
        check_finite("event amplitude", e.amplitude);
        if (e.apex_x) check_finite("event apex_x", *e.apex_x);
        bool inside = false;
        for (std::size_t y = 0; y < ny && !inside; ++y) {
            for (std::size_t x = 0; x < spec.nx && !inside; ++x) {
                const double tau =
                    smooth_arrival(e, spec, static_cast<double>(x), static_cast<double>(y)) +
                    static_cast<double>(fault_shift(spec, x));
                inside = tau >= 0.0 && tau <= last;
            }
        }
        if (!inside) {
            std::ostringstream msg;
            msg << "event " << i << " never enters the time window [0, " << last * spec.dt
                << "] s";
            throw ParameterError(msg.str());
        }
    }
}

Synthetic make_synthetic(const SynthSpec& spec) {
    validate(spec);
    const std::size_t nt = spec.nt;
    const std::size_t nx = spec.nx;
    const std::size_t ny = spec.ny.value_or(1);

    std::vector<double> data(nt * nx * ny, 0.0);
    for (std::size_t y = 0; y < ny; ++y) {
        for (std::size_t x = 0; x < nx; ++x) render_trace(spec, x, y, data.data() + (y * nx + x) * nt);
    }

    std::optional<double> measured;
    std::string algorithm;
    if (spec.snr_db) {
        std::mt19937_64 rng(spec.seed);
        measured = add_noise(data, *spec.snr_db, rng);
        algorithm = std::string(kNoiseAlgorithm);
    }

    if (!spec.ny) {
        Grid2 p = Grid2::generate(nt, nx, [&](std::size_t, std::size_t x) {
            return arrival_slope_x(spec.events[shallowest(spec, x, 0)], spec, static_cast<double>(x));
        });
        return Synthetic{SeismicSection(Grid2(nt, nx, std::move(data)), spec.dt, spec.dx, "synthetic"),
                         GroundTruth{std::move(p), std::nullopt, std::nullopt, std::nullopt},
                         measured, algorithm};
    }

    // Surface curvature of the shallowest event: a = kappa / 2, b = c = 0,
    // so k_pos = max(kappa, 0) and k_neg = min(kappa, 0).
    auto kappa = [&](std::size_t x, std::size_t y) {
        const auto& e = spec.events[shallowest(spec, x, y)];
        return e.type == EventType::Quadratic ? e.curvature : 0.0;
    };
    GroundTruth truth{
        Grid2::generate(nx, ny, [&](std::size_t x, std::size_t y) {
            return arrival_slope_x(spec.events[shallowest(spec, x, y)], spec, static_cast<double>(x));
        }),
        Grid2::generate(nx, ny, [&](std::size_t x, std::size_t y) {
            return spec.events[shallowest(spec, x, y)].dip_y;
        }),
        Grid2::generate(nx, ny, [&](std::size_t x, std::size_t y) { return std::max(kappa(x, y), 0.0); }),
        Grid2::generate(nx, ny, [&](std::size_t x, std::size_t y) { return std::min(kappa(x, y), 0.0); }),
    };
    return Synthetic{SeismicVolume(nt, nx, ny, spec.dt, spec.dx, spec.dy, std::move(data)),
                     std::move(truth), measured, algorithm};
}

SynthSpec parse_synth_spec(std::string_view text) {
    SynthSpec spec;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) bad_line(line_no, "expected key=value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "nt") spec.nt = parse_int<std::size_t>(value, line_no);
        else if (key == "nx") spec.nx = parse_int<std::size_t>(value, line_no);
        else if (key == "ny") spec.ny = parse_int<std::size_t>(value, line_no);
        else if (key == "dims") {
            const auto d = split(value, ',');
            if (d.size() < 2 || d.size() > 3) bad_line(line_no, "dims takes nt,nx[,ny]");
            spec.nt = parse_int<std::size_t>(d[0], line_no);
            spec.nx = parse_int<std::size_t>(d[1], line_no);
            if (d.size() == 3) spec.ny = parse_int<std::size_t>(d[2], line_no);
        }
        else if (key == "dt") spec.dt = parse_double(value, line_no);
        else if (key == "dx") spec.dx = parse_double(value, line_no);
        else if (key == "dy") spec.dy = parse_double(value, line_no);
        else if (key == "f_peak") spec.f_peak = parse_double(value, line_no);
        else if (key == "velocity") spec.velocity = parse_double(value, line_no);
        else if (key == "snr_db") spec.snr_db = parse_double(value, line_no);
        else if (key == "seed") spec.seed = parse_int<std::uint64_t>(value, line_no);
        else if (key == "event") spec.events.push_back(parse_event(value, line_no));
        else if (key == "fault") {
            const auto f = split(value, ',');
            if (f.size() != 2) bad_line(line_no, "fault takes trace,throw");
            spec.faults.push_back({parse_int<std::size_t>(f[0], line_no), parse_int<long>(f[1], line_no)});
        }
        else bad_line(line_no, "unknown key '" + std::string(key) + "'");
    }
    return spec;
}

std::string format_synth_spec(const SynthSpec& spec) {
    std::ostringstream out;
    out << "nt=" << spec.nt << "\nnx=" << spec.nx << "\n";
    if (spec.ny) out << "ny=" << *spec.ny << "\n";
    out << "dt=" << detail::format_double(spec.dt) << "\ndx=" << detail::format_double(spec.dx) << "\ndy=" << detail::format_double(spec.dy)
        << "\nf_peak=" << detail::format_double(spec.f_peak) << "\nvelocity=" << detail::format_double(spec.velocity)
        << "\nseed=" << spec.seed << "\n";
    if (spec.snr_db) out << "snr_db=" << detail::format_double(*spec.snr_db) << "\n";
    for (const auto& e : spec.events) {
        out << "event=" << (e.type == EventType::Plane ? "plane" : "quadratic") << ",t0=" << detail::format_double(e.t0)
            << ",dip_x=" << detail::format_double(e.dip_x) << ",dip_y=" << detail::format_double(e.dip_y);
        if (e.type == EventType::Quadratic) out << ",curvature=" << detail::format_double(e.curvature);
        if (e.apex_x) out << ",apex_x=" << detail::format_double(*e.apex_x);
        out << ",amplitude=" << detail::format_double(e.amplitude) << "\n";
    }
    for (const auto& f : spec.faults) out << "fault=" << f.trace << "," << f.throw_samples << "\n";
    return out.str();
}

std::vector<double> central_difference(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    d[0] = x[1] - x[0];
    d[n - 1] = x[n - 1] - x[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (x[i + 1] - x[i - 1]) * 0.5;
    return d;
}

DerivativeNoiseReport derivative_noise_demo(std::size_t trace_len, std::optional<double> snr_db,
                                            std::uint64_t seed, double f_peak, double dt) {
    if (trace_len < 64) {
        throw SizeError("derivative demo needs at least 64 samples, got " + std::to_string(trace_len));
    }
    check_nyquist(f_peak, dt);
    if (snr_db) check_finite("snr_db", *snr_db);

    // Sparse random reflectivity convolved with the wavelet.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> refl(trace_len, 0.0);
    for (auto& r : refl) {
        if (unit(rng) < 0.08) r = 2.0 * unit(rng) - 1.0;
    }
    refl[trace_len / 2] = 1.0;
    const auto half = static_cast<std::size_t>(std::ceil(kRickerSupport / (std::numbers::pi * f_peak * dt)));
    const auto w = ricker(f_peak, dt, half);
    std::vector<double> clean(trace_len, 0.0);
    for (std::size_t i = 0; i < trace_len; ++i) {
        if (refl[i] == 0.0) continue;
        for (std::size_t k = 0; k < w.size(); ++k) {
            const auto t = static_cast<long>(i + k) - static_cast<long>(half);
            if (t >= 0 && t < static_cast<long>(trace_len)) clean[static_cast<std::size_t>(t)] += refl[i] * w[k];
        }
    }

    DerivativeNoiseReport report;
    report.clean = clean;
    report.noisy = clean;
    report.clean_derivative = central_difference(clean);
    if (snr_db) {
        report.snr_trace_db = add_noise(report.noisy, *snr_db, rng);
    }
    report.noisy_derivative = central_difference(report.noisy);
    if (snr_db) {
        std::vector<double> noise_d(trace_len);
        for (std::size_t i = 0; i < trace_len; ++i) {
            noise_d[i] = report.noisy_derivative[i] - report.clean_derivative[i];
        }
        report.snr_derivative_db = 10.0 * std::log10(power(report.clean_derivative) / power(noise_d));
    }
    return report;
}

}  // namespace pyrafuse
