#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dpwm/error.hpp"

namespace dpwm {

/// Row-major 2-D grid. The typed planes below add value-range invariants.
template <typename T>
class Grid {
public:
    using value_type = T;

    Grid() = default;
    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height), values_(checked_area(width, height), fill) {}
    Grid(int width, int height, std::vector<T> values)
        : width_(width), height_(height), values_(std::move(values))
    {
        if (values_.size() != checked_area(width, height))
            throw DimensionError("grid payload does not match width x height");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    const T& at(int x, int y) const { return values_[index(x, y)]; }
    T& at(int x, int y) { return values_[index(x, y)]; }

    std::span<const T> values() const noexcept { return values_; }
    std::span<T> values() noexcept { return values_; }

    bool same_shape(const auto& other) const noexcept
    {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

protected:
    static std::size_t checked_area(int width, int height)
    {
        if (width < 0 || height < 0)
            throw DimensionError("negative grid dimension");
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }

    std::size_t index(int x, int y) const noexcept
    {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> values_;
};

/// 8-bit luminance image: cover, watermarked and attacked signals.
class GrayImage : public Grid<std::uint8_t> {
public:
    using Grid::Grid;
    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Plane over {0,1}.
class BitPlane : public Grid<std::uint8_t> {
public:
    BitPlane() = default;
    BitPlane(int width, int height, std::uint8_t fill = 0);
    BitPlane(int width, int height, std::vector<std::uint8_t> bits);

    /// Every bit inverted.
    BitPlane complement() const;

    friend bool operator==(const BitPlane&, const BitPlane&) = default;
};

/// Plane over {-1,0,+1}.
class TernaryPlane : public Grid<std::int8_t> {
public:
    TernaryPlane() = default;
    TernaryPlane(int width, int height, std::int8_t fill = 0);
    TernaryPlane(int width, int height, std::vector<std::int8_t> symbols);

    friend bool operator==(const TernaryPlane&, const TernaryPlane&) = default;
};

/// Plane of finite reals (truncated-SVD parts are not range limited).
class RealPlane : public Grid<double> {
public:
    RealPlane() = default;
    RealPlane(int width, int height, double fill = 0.0);
    RealPlane(int width, int height, std::vector<double> values);

    friend bool operator==(const RealPlane&, const RealPlane&) = default;
};

/// bit = 1 iff sample >= threshold.
BitPlane binarize(const GrayImage& img, std::uint8_t threshold);

/// 0 -> 0, 1 -> 255.
GrayImage to_image(const BitPlane& plane);

} // namespace dpwm
