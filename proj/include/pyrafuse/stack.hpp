#pragma once

#include <cstddef>
#include <vector>

#include "pyrafuse/grid.hpp"

namespace pyrafuse {

/// K scale-aligned attribute maps at base resolution, ready for fusion.
/// All maps share dimensions and kind; K >= 1.
class AttributeStack {
public:
    explicit AttributeStack(std::vector<AttributeMap> maps);

    std::size_t size() const noexcept { return maps_.size(); }
    const AttributeMap& operator[](std::size_t i) const noexcept { return maps_[i]; }
    const std::vector<AttributeMap>& maps() const noexcept { return maps_; }

    AttributeKind kind() const noexcept { return maps_.front().kind(); }
    std::size_t rows() const noexcept { return maps_.front().grid().rows(); }
    std::size_t cols() const noexcept { return maps_.front().grid().cols(); }

    /// Source scale of every map (maps without a scale tag report their position).
    std::vector<std::size_t> scales() const;

private:
    std::vector<AttributeMap> maps_;
};

}  // namespace pyrafuse
