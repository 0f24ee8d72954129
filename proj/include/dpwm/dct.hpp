#pragma once

#include <span>
#include <vector>

#include "dpwm/image.hpp"

namespace dpwm {

/// Square block of reals, n in {8,16}, stored row-major.
class SquareBlock {
public:
    explicit SquareBlock(int n);
    SquareBlock(int n, std::vector<double> values);

    int size() const noexcept { return n_; }
    std::span<const double> data() const noexcept { return values_; }
    std::span<double> data() noexcept { return values_; }

    friend bool operator==(const SquareBlock&, const SquareBlock&) = default;

protected:
    int n_;
    std::vector<double> values_;
};

/// Spatial samples, 0-based (row, col).
class SampleBlock : public SquareBlock {
public:
    using SquareBlock::SquareBlock;

    double at(int row, int col) const { return values_[static_cast<std::size_t>(row * n_ + col)]; }
    double& at(int row, int col) { return values_[static_cast<std::size_t>(row * n_ + col)]; }
};

/// DCT coefficients addressed 1-based: (1,1) is DC, (1,3) is row 1 column 3.
class CoeffBlock : public SquareBlock {
public:
    using SquareBlock::SquareBlock;

    double operator()(int row, int col) const { return values_[offset(row, col)]; }
    double& operator()(int row, int col) { return values_[offset(row, col)]; }

private:
    std::size_t offset(int row, int col) const
    {
        return static_cast<std::size_t>((row - 1) * n_ + (col - 1));
    }
};

struct BlockGrid {
    int rows = 0;
    int cols = 0;
    std::vector<CoeffBlock> blocks; ///< raster order

    const CoeffBlock& at(int row, int col) const { return blocks[static_cast<std::size_t>(row * cols + col)]; }
    CoeffBlock& at(int row, int col) { return blocks[static_cast<std::size_t>(row * cols + col)]; }
};

/// Orthonormal n-point DCT-II basis, row k = frequency k.
std::span<const double> dct_basis(int n);

/// Orthonormal 2-D DCT-II.
CoeffBlock dct2(const SampleBlock& block);
SampleBlock idct2(const CoeffBlock& coeffs);

/// Copies the n x n block whose top-left pixel is (x0, y0).
SampleBlock read_block(const GrayImage& img, int x0, int y0, int n);

/// Rounds to nearest and clamps to [0,255] while writing back.
void write_block(GrayImage& img, int x0, int y0, const SampleBlock& block);

/// Raster-order tiling into DCT blocks; dimensions must be multiples of n.
BlockGrid tile(const GrayImage& img, int n);
GrayImage untile(const BlockGrid& grid, int width, int height);

} // namespace dpwm
