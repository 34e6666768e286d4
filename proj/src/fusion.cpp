#include "pyrafuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pyrafuse/error.hpp"
#include "text.hpp"
#include "pyrafuse/parallel.hpp"

namespace pyrafuse {

namespace {

double weighted_mean(std::span<const double> values, std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double ref = values[0];
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += (weights[i] / total) * (values[i] - ref);
    return ref + acc;
}

double mean(std::span<const double> values) {
    const double ref = values[0];
    double acc = 0.0;
    for (double v : values) acc += v - ref;
    return ref + acc / static_cast<double>(values.size());
}

double median(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return (sorted[n / 2 - 1] + sorted[n / 2]) * 0.5;
}

double order_statistic(std::span<const double> values, std::size_t rank) {
    std::vector<double> v(values.begin(), values.end());
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(rank), v.end());
    return v[rank];
}

AttributeMap::Metadata fusion_meta(const FusionSpec& spec, std::size_t scales) {
    AttributeMap::Metadata meta{{"method", std::string(to_string(spec.method))},
                                {"scales", std::to_string(scales)}};
    if (spec.method == FusionMethod::WeightedMean) {
        std::string w;
        for (std::size_t i = 0; i < spec.weights.size(); ++i) {
            if (i) w += ",";
            w += detail::format_double(spec.weights[i]);
        }
        meta["weights"] = w;
    }
    if (spec.method == FusionMethod::Rank) meta["rank"] = std::to_string(spec.rank);
    return meta;
}

// Re-raises a library error with the pipeline stage prepended, keeping its type.
template <class Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    auto tag = [stage](const std::exception& e) { return std::string(stage) + ": " + e.what(); };
    try {
        return fn();
    } catch (const BoundsError& e) {
        throw BoundsError(tag(e));
    } catch (const SizeError& e) {
        throw SizeError(tag(e));
    } catch (const ShapeError& e) {
        throw ShapeError(tag(e));
    } catch (const ParameterError& e) {
        throw ParameterError(tag(e));
    } catch (const ConfigError& e) {
        throw ConfigError(tag(e));
    }
}

AttributeMap with_pipeline_meta(const AttributeMap& fused, const PyramidParams& pyramid) {
    AttributeMap::Metadata meta = fused.meta();
    meta["scales"] = std::to_string(pyramid.scales);
    meta["sigma"] = detail::format_double(pyramid.sigma);
    meta["radius"] = std::to_string(pyramid.radius);
    return fused.with_meta(std::move(meta));
}

}  // namespace

std::string_view to_string(FusionMethod method) noexcept {
    switch (method) {
        case FusionMethod::Mean: return "mean";
        case FusionMethod::WeightedMean: return "wmean";
        case FusionMethod::Median: return "median";
        case FusionMethod::Rank: return "rank";
    }
    return "median";
}

FusionMethod parse_fusion_method(std::string_view name) {
    if (name == "mean") return FusionMethod::Mean;
    if (name == "wmean" || name == "weighted-mean") return FusionMethod::WeightedMean;
    if (name == "median") return FusionMethod::Median;
    if (name == "rank") return FusionMethod::Rank;
    throw ParameterError("unknown fusion method '" + std::string(name) + "'");
}

void validate(const FusionSpec& spec, std::size_t scales) {
    if (spec.method == FusionMethod::WeightedMean) {
        if (spec.weights.size() != scales) {
            std::ostringstream msg;
            msg << "weighted mean needs " << scales << " weights, got " << spec.weights.size();
            throw ParameterError(msg.str());
        }
        double total = 0.0;
        for (double w : spec.weights) {
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw ParameterError("fusion weights must be finite and non-negative");
            }
            total += w;
        }
        if (!(total > 0.0)) {
            throw ParameterError("fusion weights must not all be zero");
        }
    }
    if (spec.method == FusionMethod::Rank && spec.rank >= scales) {
        std::ostringstream msg;
        msg << "rank " << spec.rank << " out of range for " << scales << " scales";
        throw ParameterError(msg.str());
    }
}

std::vector<double> default_weights(std::size_t scales, double bias) {
    if (scales == 0) {
        throw ParameterError("default weights need at least one scale");
    }
    if (!(bias > 0.0) || !std::isfinite(bias)) {
        std::ostringstream msg;
        msg << "weight bias must be positive, got " << bias;
        throw ParameterError(msg.str());
    }
    std::vector<double> w(scales);
    for (std::size_t i = 0; i < scales; ++i) w[i] = std::pow(bias, -static_cast<double>(i));
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& v : w) v /= total;
    return w;
}

double fuse_values(std::span<const double> values, const FusionSpec& spec,
                   std::span<const double> weights) {
    if (values.empty()) {
        throw SizeError("cannot fuse an empty set of values");
    }
    switch (spec.method) {
        case FusionMethod::Mean: return mean(values);
        case FusionMethod::WeightedMean:
            if (weights.size() != values.size()) {
                throw ParameterError("weight count does not match the value count");
            }
            return weighted_mean(values, weights);
        case FusionMethod::Median: return median(values);
        case FusionMethod::Rank:
            if (spec.rank >= values.size()) {
                throw ParameterError("rank exceeds the number of values");
            }
            return order_statistic(values, spec.rank);
    }
    return 0.0;
}

AttributeMap fuse(const AttributeStack& stack, const FusionSpec& spec) {
    const std::size_t K = stack.size();
    validate(spec, K);
    const std::size_t rows = stack.rows();
    const std::size_t cols = stack.cols();
    const bool masked = spec.method != FusionMethod::Rank;

    std::vector<double> out(rows * cols);
    std::vector<double> quality(rows * cols);
    parallel_for(cols, [&](std::size_t c) {
        std::vector<double> values;
        std::vector<double> weights;
        values.reserve(K);
        weights.reserve(K);
        for (std::size_t r = 0; r < rows; ++r) {
            values.clear();
            weights.clear();
            double weight_total = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const AttributeMap& m = stack[k];
                if (masked && m.quality() && (*m.quality())(r, c) == 0.0) continue;
                values.push_back(m.grid()(r, c));
                if (spec.method == FusionMethod::WeightedMean) {
                    weights.push_back(spec.weights[k]);
                    weight_total += spec.weights[k];
                }
            }
            const std::size_t i = c * rows + r;
            const bool usable = !values.empty() &&
                                (spec.method != FusionMethod::WeightedMean || weight_total > 0.0);
            out[i] = usable ? fuse_values(values, spec, weights) : 0.0;
            quality[i] = usable ? 1.0 : 0.0;
        }
    });
    return AttributeMap(Grid2(rows, cols, std::move(out)), stack.kind(), std::nullopt,
                        Grid2(rows, cols, std::move(quality)), fusion_meta(spec, K));
}

AttributeMap multiscale_attribute(const SeismicSection& section, AttributeKind kind,
                                  const PyramidParams& pyramid, const FusionSpec& spec,
                                  const AttributeParams& params) {
    in_stage("fusion", [&] { validate(spec, pyramid.scales); });
    const AttributeStack stack =
        in_stage("attribute stack", [&] { return attribute_stack(section, kind, pyramid, params); });
    return with_pipeline_meta(in_stage("fusion", [&] { return fuse(stack, spec); }), pyramid);
}

AttributeMap multiscale_attribute(const SeismicVolume& volume, AttributeKind kind,
                                  const PyramidParams& pyramid, const FusionSpec& spec,
                                  const AttributeParams& params) {
    in_stage("fusion", [&] { validate(spec, pyramid.scales); });
    const AttributeStack stack =
        in_stage("attribute stack", [&] { return attribute_stack(volume, kind, pyramid, params); });
    return with_pipeline_meta(in_stage("fusion", [&] { return fuse(stack, spec); }), pyramid);
}

}  // namespace pyrafuse
