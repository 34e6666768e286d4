#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "pyrafuse/attributes.hpp"
#include "pyrafuse/grid.hpp"
#include "pyrafuse/stack.hpp"

namespace pyrafuse {

enum class FusionMethod { Mean, WeightedMean, Median, Rank };

std::string_view to_string(FusionMethod method) noexcept;

/// Accepts mean, wmean (or weighted-mean), median, rank.
FusionMethod parse_fusion_method(std::string_view name);

/// How the K per-scale values of a cell collapse into one.
struct FusionSpec {
    FusionMethod method = FusionMethod::Median;
    std::vector<double> weights;  // WeightedMean: K non-negative values, normalized internally
    std::size_t rank = 0;         // Rank: 0-based order statistic

    static FusionSpec mean() { return {FusionMethod::Mean, {}, 0}; }
    static FusionSpec weighted(std::vector<double> w) { return {FusionMethod::WeightedMean, std::move(w), 0}; }
    static FusionSpec median() { return {FusionMethod::Median, {}, 0}; }
    static FusionSpec rank_filter(std::size_t r) { return {FusionMethod::Rank, {}, r}; }
};

/// Throws ParameterError unless `spec` is usable with a K-map stack.
void validate(const FusionSpec& spec, std::size_t scales);

/// w_i proportional to bias^-i, summing to 1. Decreasing in i for bias > 1.
std::vector<double> default_weights(std::size_t scales, double bias);

/**
 * Fuses the values of one cell. `weights` is only read for WeightedMean and
 * must match `values` in length. Mean and WeightedMean accumulate
 * differences from values[0], so K equal values come back bit-exact; an
 * even-length median is the mean of the two middle values.
 */
double fuse_values(std::span<const double> values, const FusionSpec& spec,
                   std::span<const double> weights = {});

/**
 * Element-wise fusion of a stack into a map tagged as fused.
 *
 * Mean, WeightedMean and Median skip the scales whose quality mask is 0 at
 * a cell (weights are renormalized over what is left). A cell with no valid
 * scale becomes 0 with quality 0. Rank always uses all K values.
 */
AttributeMap fuse(const AttributeStack& stack, const FusionSpec& spec);

/// Pyramid, per-scale attribute, resize and fusion in one call. The result
/// records scales, sigma, radius and method in its metadata.
AttributeMap multiscale_attribute(const SeismicSection& section, AttributeKind kind,
                                  const PyramidParams& pyramid, const FusionSpec& spec,
                                  const AttributeParams& params = {});

AttributeMap multiscale_attribute(const SeismicVolume& volume, AttributeKind kind,
                                  const PyramidParams& pyramid, const FusionSpec& spec,
                                  const AttributeParams& params = {});

}  // namespace pyrafuse
