#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "pyrafuse/error.hpp"
#include "pyrafuse/synth.hpp"
#include "support.hpp"

using namespace pyrafuse;
using namespace pftest;

namespace {

double power(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc / double(v.size());
}

double snr_db(std::span<const double> signal, std::span<const double> noisy) {
    double s = 0.0, n = 0.0;
    for (std::size_t i = 0; i < signal.size(); ++i) {
        s += signal[i] * signal[i];
        n += (noisy[i] - signal[i]) * (noisy[i] - signal[i]);
    }
    return 10.0 * std::log10(s / n);
}

}  // namespace

TEST(Ricker, PeakAndSymmetry) {
    EXPECT_EQ(ricker_value(25.0, 0.0), 1.0);
    for (double t : {0.001, 0.01, 0.03}) EXPECT_EQ(ricker_value(25.0, t), ricker_value(25.0, -t));
    const auto w = ricker(25.0, 0.004, 20);
    ASSERT_EQ(w.size(), 41u);
    EXPECT_EQ(w[20], 1.0);
    for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(w[i], w[40 - i]);
}

TEST(Ricker, ZeroCrossingAtLobeEdge) {
    const double f = 30.0;
    const double tz = 1.0 / (std::numbers::pi * f * std::sqrt(2.0));
    for (double s : {-1.0, 1.0}) {
        EXPECT_GT(ricker_value(f, s * tz * 0.99), 0.0);
        EXPECT_LT(ricker_value(f, s * tz * 1.01), 0.0);
        EXPECT_NEAR(ricker_value(f, s * tz), 0.0, 1e-15);
    }
}

TEST(Ricker, AboveNyquistThrows) { EXPECT_THROW(ricker(130.0, 0.004, 10), ParameterError); }

TEST(Synthetic, FlatPlaneHasIdenticalTracesAndZeroTruth) {
    PlaneCase c;
    c.slope = 0.0;
    const Synthetic syn = make_synthetic(plane_spec(c));
    const auto& s = std::get<SeismicSection>(syn.data);
    for (std::size_t n = 1; n < c.nx; ++n) {
        const auto a = s.grid().trace(0), b = s.grid().trace(n);
        ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
    }
    for (double v : syn.truth.dip_p.values()) EXPECT_EQ(v, 0.0);
    EXPECT_FALSE(syn.measured_snr_db.has_value());
    EXPECT_TRUE(syn.noise_algorithm.empty());
}

TEST(Synthetic, PlaneLagMatchesSlope) {
    const PlaneCase c;
    const Synthetic syn = make_synthetic(plane_spec(c));
    const auto& g = std::get<SeismicSection>(syn.data).grid();
    for (double v : syn.truth.dip_p.values()) EXPECT_EQ(v, c.slope);
    // Cross-correlate adjacent traces and refine the peak with a parabola.
    for (std::size_t n = 10; n < 20; ++n) {
        auto xc = [&](int lag) {
            double acc = 0.0;
            for (std::size_t t = 20; t + 20 < c.nt; ++t) acc += g(t, n) * g(std::size_t(int(t) + lag), n + 1);
            return acc;
        };
        int best = 0;
        for (int lag = -3; lag <= 3; ++lag)
            if (xc(lag) > xc(best)) best = lag;
        const double ym = xc(best - 1), y0 = xc(best), yp = xc(best + 1);
        const double lag = best + 0.5 * (ym - yp) / (ym - 2 * y0 + yp);
        EXPECT_NEAR(lag, c.slope, 0.05);
    }
}

TEST(Synthetic, EventPeaksAtArrival) {
    PlaneCase c;
    c.slope = 1.0;
    const SeismicSection s = plane_section(c);
    const Grid2& g = s.grid();
    for (std::size_t n = 0; n < 50; n += 7) {
        const std::size_t tau = std::size_t(c.t0 / c.dt) + n;
        EXPECT_NEAR(g(tau, n), 1.0, 1e-12);
    }
}

TEST(Synthetic, NoiseHitsRequestedSnr) {
    const PlaneCase c;
    const auto clean = plane_section(c);
    for (double snr : {0.0, 5.0, 10.0, 20.0, 30.0}) {
        const Synthetic syn = make_synthetic(plane_spec(c, snr, 7));
        const auto& noisy = std::get<SeismicSection>(syn.data);
        ASSERT_TRUE(syn.measured_snr_db.has_value());
        EXPECT_NEAR(*syn.measured_snr_db, snr, 0.2);
        EXPECT_NEAR(snr_db(clean.grid().values(), noisy.grid().values()), snr, 0.2);
        EXPECT_EQ(syn.noise_algorithm, kNoiseAlgorithm);
    }
}

TEST(Synthetic, DeterministicForSeed) {
    const PlaneCase c;
    EXPECT_EQ(plane_section(c, 5.0, 11).grid(), plane_section(c, 5.0, 11).grid());
    EXPECT_NE(plane_section(c, 5.0, 11).grid(), plane_section(c, 5.0, 12).grid());
}

TEST(Synthetic, FaultShiftsTracesBeyondIt) {
    PlaneCase c;
    c.slope = 0.0;
    SynthSpec spec = plane_spec(c);
    spec.faults.push_back({64, 6});
    const Synthetic syn = make_synthetic(spec);
    const Grid2& g = std::get<SeismicSection>(syn.data).grid();
    const std::size_t tau = std::size_t(c.t0 / c.dt);
    EXPECT_NEAR(g(tau, 63), 1.0, 1e-12);
    EXPECT_NEAR(g(tau + 6, 64), 1.0, 1e-12);
    EXPECT_NEAR(g(tau + 6, 127), 1.0, 1e-12);
}

TEST(Synthetic, VolumeTruth) {
    SynthSpec spec;
    spec.nt = 64;
    spec.nx = 9;
    spec.ny = 7;
    SynthEvent e;
    e.type = EventType::Quadratic;
    e.t0 = 0.08;
    e.curvature = -2e-4;
    e.dip_y = 0.25;
    spec.events.push_back(e);
    const Synthetic syn = make_synthetic(spec);
    const auto& v = std::get<SeismicVolume>(syn.data);
    EXPECT_EQ(v.nt(), 64u);
    EXPECT_EQ(v.nx(), 9u);
    EXPECT_EQ(v.ny(), 7u);
    ASSERT_TRUE(syn.truth.dip_q && syn.truth.k_pos_true && syn.truth.k_neg_true);
    EXPECT_EQ(syn.truth.dip_p.rows(), 9u);
    EXPECT_EQ(syn.truth.dip_p.cols(), 7u);
    for (double k : syn.truth.k_pos_true->values()) EXPECT_EQ(k, 0.0);
    for (double k : syn.truth.k_neg_true->values()) EXPECT_EQ(k, -2e-4);
    for (double q : syn.truth.dip_q->values()) EXPECT_EQ(q, 0.25);
    // Symmetric about the centre trace.
    EXPECT_NEAR(syn.truth.dip_p(4, 0), 0.0, 1e-15);
    EXPECT_NEAR(syn.truth.dip_p(2, 0), -syn.truth.dip_p(6, 0), 1e-15);
}

TEST(Synthetic, InvalidSpecsThrow) {
    SynthSpec spec = plane_spec(PlaneCase{});
    SynthSpec s = spec;
    s.nt = 0;
    EXPECT_THROW(make_synthetic(s), ParameterError);
    s = spec;
    s.f_peak = 200.0;
    EXPECT_THROW(make_synthetic(s), ParameterError);
    s = spec;
    s.events.clear();
    EXPECT_THROW(make_synthetic(s), ParameterError);
    s = spec;
    s.events[0].t0 = 10.0;
    s.events[0].dip_x = 0.0;
    EXPECT_THROW(make_synthetic(s), ParameterError);
    s = spec;
    s.faults.push_back({500, 3});
    EXPECT_THROW(make_synthetic(s), ParameterError);
    s = spec;
    s.dt = -0.004;
    EXPECT_THROW(make_synthetic(s), ParameterError);
}

TEST(SynthSpecText, ParseFormatRoundTrip) {
    const std::string text =
        "# two events\n"
        "dims=200,64,16\n"
        "dt=0.002\n"
        "dx=12.5\n"
        "f_peak=30\n"
        "snr_db=12.5\n"
        "seed=99\n"
        "event=plane,t0=0.1,dip_x=0.5,dip_y=-0.25,amplitude=2\n"
        "event=quadratic,t0=0.3,curvature=1e-4,apex_x=20\n"
        "fault=40,-3\n";
    const SynthSpec s = parse_synth_spec(text);
    EXPECT_EQ(s.nt, 200u);
    EXPECT_EQ(s.nx, 64u);
    EXPECT_EQ(s.ny, std::optional<std::size_t>(16));
    EXPECT_EQ(s.dt, 0.002);
    EXPECT_EQ(s.snr_db, std::optional<double>(12.5));
    EXPECT_EQ(s.seed, 99u);
    ASSERT_EQ(s.events.size(), 2u);
    EXPECT_EQ(s.events[0].amplitude, 2.0);
    EXPECT_EQ(s.events[0].dip_y, -0.25);
    EXPECT_EQ(s.events[1].type, EventType::Quadratic);
    EXPECT_EQ(s.events[1].apex_x, std::optional<double>(20.0));
    ASSERT_EQ(s.faults.size(), 1u);
    EXPECT_EQ(s.faults[0].throw_samples, -3);

    const SynthSpec again = parse_synth_spec(format_synth_spec(s));
    EXPECT_EQ(format_synth_spec(again), format_synth_spec(s));
    EXPECT_EQ(std::get<SeismicVolume>(make_synthetic(again).data), std::get<SeismicVolume>(make_synthetic(s).data));
}

TEST(SynthSpecText, ErrorsNameTheLine) {
    try {
        parse_synth_spec("nt=10\nbogus=3\n");
        FAIL() << "expected ParameterError";
    } catch (const ParameterError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_synth_spec("event=sphere,t0=1\n"), ParameterError);
    EXPECT_THROW(parse_synth_spec("fault=3\n"), ParameterError);
    EXPECT_THROW(parse_synth_spec("dt=fast\n"), ParameterError);
}

TEST(CentralDifference, Oracle) {
    const std::vector<double> x{0, 1, 4, 9, 16};
    EXPECT_EQ(central_difference(x), (std::vector<double>{1, 2, 4, 6, 7}));
}

TEST(DerivativeDemo, CleanReportsNoSnr) {
    const auto r = derivative_noise_demo(256, std::nullopt, 1);
    EXPECT_EQ(r.clean, r.noisy);
    EXPECT_FALSE(r.snr_trace_db.has_value());
    EXPECT_FALSE(r.snr_derivative_db.has_value());
    EXPECT_EQ(r.clean_derivative, central_difference(r.clean));
    EXPECT_THROW(derivative_noise_demo(63, 10.0, 1), SizeError);
}

TEST(DerivativeDemo, DifferencingHalvesWhiteNoiseVariance) {
    const auto r = derivative_noise_demo(20000, 10.0, 3);
    ASSERT_TRUE(r.snr_trace_db && r.snr_derivative_db);
    EXPECT_NEAR(*r.snr_trace_db, 10.0, 0.2);
    EXPECT_LT(*r.snr_derivative_db, *r.snr_trace_db);
    std::vector<double> noise(r.noisy.size()), dnoise(r.noisy.size() - 2);
    for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = r.noisy[i] - r.clean[i];
    for (std::size_t i = 1; i + 1 < noise.size(); ++i) dnoise[i - 1] = r.noisy_derivative[i] - r.clean_derivative[i];
    EXPECT_NEAR(power(dnoise) / power(noise), 0.5, 0.03);
}
