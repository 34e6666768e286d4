#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pyrafuse/error.hpp"
#include "pyrafuse/parallel.hpp"
#include "pyrafuse/pyramid.hpp"
#include "support.hpp"

using namespace pyrafuse;
using pftest::random_grid;

namespace {

// Independent Eq. 1 oracle: explicit 2D weights, explicit reflection.
std::size_t reflect(long i, long n) {
    while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
    return static_cast<std::size_t>(i);
}

Grid2 direct_reduce(const Grid2& in, double sigma, int r) {
    double total = 0.0;
    for (int k = -r; k <= r; ++k)
        for (int l = -r; l <= r; ++l) total += std::exp(-(k * k + l * l) / (2 * sigma * sigma));
    return Grid2::generate((in.rows() + 1) / 2, (in.cols() + 1) / 2, [&](std::size_t m, std::size_t n) {
        double acc = 0.0;
        for (int k = -r; k <= r; ++k) {
            for (int l = -r; l <= r; ++l) {
                const double g = std::exp(-(k * k + l * l) / (2 * sigma * sigma)) / total;
                acc += g * in(reflect(2 * long(m) + k, long(in.rows())), reflect(2 * long(n) + l, long(in.cols())));
            }
        }
        return acc;
    });
}

double max_abs_diff(const Grid2& a, const Grid2& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    return worst;
}

}  // namespace

TEST(Kernel, UnnormalizedCenterIsEq2AtOrigin) {
    const GaussianKernel k = make_kernel(1.0, 2);
    EXPECT_NEAR(k.unnormalized(0, 0), 1.0 / (2.0 * std::numbers::pi), 1e-15);
    EXPECT_NEAR(k.unnormalized(0, 0), 0.159155, 1e-6);
    EXPECT_NEAR(gaussian_density(1, 2, 1.5), std::exp(-5.0 / 4.5) / (2 * std::numbers::pi * 2.25), 1e-15);
}

TEST(Kernel, UnitSumAndRatio) {
    for (double sigma : {0.5, 1.0, 2.0}) {
        for (std::size_t r : {1u, 2u, 3u}) {
            const GaussianKernel k = make_kernel(sigma, r);
            double sum = 0.0;
            for (int a = -int(r); a <= int(r); ++a)
                for (int b = -int(r); b <= int(r); ++b) {
                    EXPECT_GT(k.weight(a, b), 0.0);
                    sum += k.weight(a, b);
                }
            EXPECT_NEAR(sum, 1.0, 1e-12);
        }
    }
    const GaussianKernel k = make_kernel(1.0, 2);
    EXPECT_NEAR(k.weight(0, 0) / k.weight(1, 1), std::numbers::e, 1e-12);
    EXPECT_NEAR(k.normalization(), 0.9818, 1e-4);
}

TEST(Kernel, FourFoldSymmetry) {
    const GaussianKernel k = make_kernel(1.3, 3);
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b) {
            EXPECT_EQ(k.weight(a, b), k.weight(-a, b));
            EXPECT_EQ(k.weight(a, b), k.weight(a, -b));
            EXPECT_EQ(k.weight(a, b), k.weight(b, a));
        }
}

TEST(Kernel, RejectsBadParameters) {
    EXPECT_THROW(make_kernel(0.0, 2), ParameterError);
    EXPECT_THROW(make_kernel(-1.0, 2), ParameterError);
    EXPECT_THROW(make_kernel(1.0, 0), ParameterError);
    EXPECT_THROW(make_kernel(std::nan(""), 2), ParameterError);
}

TEST(MirrorIndex, HalfSampleSymmetric) {
    EXPECT_EQ(mirror_index(-1, 5), 0u);
    EXPECT_EQ(mirror_index(-2, 5), 1u);
    EXPECT_EQ(mirror_index(5, 5), 4u);
    EXPECT_EQ(mirror_index(6, 5), 3u);
    EXPECT_EQ(mirror_index(2, 5), 2u);
}

TEST(Reduce, SixBySixMatchesDirectEvaluation) {
    const Grid2 in = Grid2::generate(6, 6, [](std::size_t r, std::size_t c) { return double(r + c); });
    const Grid2 out = reduce(in, make_kernel(1.0, 2));
    ASSERT_EQ(out.rows(), 3u);
    ASSERT_EQ(out.cols(), 3u);
    EXPECT_LT(max_abs_diff(out, direct_reduce(in, 1.0, 2)), 1e-12);
}

TEST(Reduce, RandomGridsMatchDirectEvaluation) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> dim(5, 40);
    for (int i = 0; i < 20; ++i) {
        const Grid2 in = random_grid(dim(rng), dim(rng), rng);
        EXPECT_LT(max_abs_diff(reduce(in, make_kernel(1.0, 2)), direct_reduce(in, 1.0, 2)), 1e-12);
    }
    const Grid2 in = random_grid(17, 23, rng);
    EXPECT_LT(max_abs_diff(reduce(in, make_kernel(1.7, 3)), direct_reduce(in, 1.7, 3)), 1e-12);
}

TEST(Reduce, ConstantIsPreservedExactly) {
    const Grid2 in = Grid2::filled(13, 9, 3.7);
    const Grid2 out = reduce(in, make_kernel(1.0, 2));
    for (double v : out.values()) EXPECT_EQ(v, 3.7);
}

TEST(Reduce, HalvesWithCeil) {
    const GaussianKernel k = make_kernel(1.0, 2);
    for (std::size_t r = 5; r < 20; ++r) {
        for (std::size_t c = 5; c < 20; c += 3) {
            const Grid2 out = reduce(Grid2::filled(r, c, 0.0), k);
            EXPECT_EQ(out.rows(), (r + 1) / 2);
            EXPECT_EQ(out.cols(), (c + 1) / 2);
        }
    }
    EXPECT_EQ(reduce(Grid2::filled(128, 128, 0.0), k).rows(), 64u);
}

TEST(Reduce, TooSmallIsSizeError) {
    EXPECT_THROW(reduce(Grid2::filled(4, 10, 0.0), make_kernel(1.0, 2)), SizeError);
    EXPECT_THROW(reduce(Grid2::filled(10, 4, 0.0), make_kernel(1.0, 2)), SizeError);
}

TEST(Reduce, IsLinear) {
    std::mt19937_64 rng(12);
    const GaussianKernel k = make_kernel(1.0, 2);
    for (int i = 0; i < 10; ++i) {
        const Grid2 a = random_grid(21, 18, rng);
        const Grid2 b = random_grid(21, 18, rng);
        const double alpha = 2.5, beta = -0.75;
        std::vector<double> mix(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) mix[j] = alpha * a.values()[j] + beta * b.values()[j];
        const Grid2 lhs = reduce(Grid2(21, 18, mix), k);
        const Grid2 ra = reduce(a, k), rb = reduce(b, k);
        for (std::size_t j = 0; j < lhs.size(); ++j) {
            EXPECT_NEAR(lhs.values()[j], alpha * ra.values()[j] + beta * rb.values()[j], 1e-9);
        }
    }
}

TEST(Reduce, NeverExceedsInputMaximum) {
    std::mt19937_64 rng(13);
    const GaussianKernel k = make_kernel(1.0, 2);
    for (int i = 0; i < 20; ++i) {
        const Grid2 a = random_grid(16, 19, rng, -5, 5);
        double in_max = 0.0, out_max = 0.0;
        for (double v : a.values()) in_max = std::max(in_max, std::abs(v));
        const Grid2 r = reduce(a, k);
        for (double v : r.values()) out_max = std::max(out_max, std::abs(v));
        EXPECT_LE(out_max, in_max);
    }
}

TEST(Reduce, IndependentOfWorkerCount) {
    std::mt19937_64 rng(14);
    const Grid2 a = random_grid(97, 61, rng);
    set_worker_count(1);
    const Grid2 serial = reduce(a, make_kernel(1.0, 2));
    set_worker_count(4);
    const Grid2 parallel = reduce(a, make_kernel(1.0, 2));
    set_worker_count(0);
    EXPECT_EQ(serial, parallel);
}

TEST(BuildPyramid, PaperGeometry) {
    const Pyramid p = build_pyramid(Grid2::filled(128, 128, 1.0), 4, make_kernel(1.0, 2));
    ASSERT_EQ(p.scales(), 4u);
    const std::size_t want[] = {128, 64, 32, 16};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(p.levels[i].rows(), want[i]);
        EXPECT_EQ(p.levels[i].cols(), want[i]);
        for (double v : p.levels[i].values()) EXPECT_EQ(v, 1.0);
    }
}

TEST(BuildPyramid, SingleScaleIsInput) {
    std::mt19937_64 rng(15);
    const Grid2 a = random_grid(9, 7, rng);
    const Pyramid p = build_pyramid(a, 1, make_kernel(1.0, 2));
    ASSERT_EQ(p.scales(), 1u);
    EXPECT_EQ(p.levels[0], a);
}

TEST(BuildPyramid, OddSizesFollowCeilRule) {
    const Pyramid p = build_pyramid(Grid2::filled(101, 77, 0.0), 4, make_kernel(1.0, 2));
    EXPECT_EQ(p.levels[1].rows(), 51u);
    EXPECT_EQ(p.levels[2].rows(), 26u);
    EXPECT_EQ(p.levels[3].rows(), 13u);
    EXPECT_EQ(p.levels[3].cols(), 10u);
}

TEST(BuildPyramid, TooManyScalesNamesMaximum) {
    EXPECT_EQ(max_scales(40, 40, make_kernel(1.0, 2)), 4u);
    try {
        build_pyramid(Grid2::filled(40, 40, 0.0), 5, make_kernel(1.0, 2));
        FAIL() << "expected SizeError";
    } catch (const SizeError& e) {
        EXPECT_NE(std::string(e.what()).find("K=4"), std::string::npos) << e.what();
    }
    EXPECT_THROW(build_pyramid(Grid2::filled(40, 40, 0.0), 0, make_kernel(1.0, 2)), ParameterError);
}

TEST(BuildSectionPyramid, ScalesSampling) {
    const SeismicSection s(Grid2::filled(64, 32, 0.0), 0.004, 25.0);
    const auto levels = build_section_pyramid(s, 3, make_kernel(1.0, 2));
    EXPECT_DOUBLE_EQ(levels[2].dt(), 0.016);
    EXPECT_DOUBLE_EQ(levels[2].dx(), 100.0);
}

TEST(ExpandTo, HandEvaluatedTwoByTwo) {
    const Grid2 in(2, 2, {0, 2, 1, 3});  // rows [0 1], [2 3]
    const Grid2 out = expand_to(in, 3, 3);
    const double want[3][3] = {{0, 0.5, 1}, {1, 1.5, 2}, {2, 2.5, 3}};
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(out(r, c), want[r][c]);
}

TEST(ExpandTo, IdentityAndConstant) {
    std::mt19937_64 rng(16);
    const Grid2 a = random_grid(7, 5, rng);
    EXPECT_EQ(expand_to(a, 7, 5), a);
    const Grid2 c = expand_to(Grid2::filled(3, 4, -2.25), 17, 31);
    for (double v : c.values()) EXPECT_EQ(v, -2.25);
}

TEST(ExpandTo, CornersAlign) {
    std::mt19937_64 rng(17);
    const Grid2 a = random_grid(5, 4, rng);
    const Grid2 e = expand_to(a, 19, 13);
    EXPECT_EQ(e(0, 0), a(0, 0));
    EXPECT_EQ(e(18, 12), a(4, 3));
    EXPECT_EQ(e(0, 12), a(0, 3));
    EXPECT_EQ(e(18, 0), a(4, 0));
}

TEST(ExpandTo, ShrinkingIsSizeError) {
    EXPECT_THROW(expand_to(Grid2::filled(4, 4, 0.0), 3, 8), SizeError);
}

TEST(ExpandTo, ExpandOfReducedConstantIsExact) {
    const GaussianKernel k = make_kernel(1.0, 2);
    const Grid2 base = Grid2::filled(45, 38, 0.3);
    const Pyramid p = build_pyramid(base, 3, k);
    for (const auto& level : p.levels) EXPECT_EQ(expand_to(level, 45, 38), base);
}
