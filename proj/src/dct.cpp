#include "dpwm/dct.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dpwm/kernels.hpp"

namespace dpwm {

namespace {

void check_size(int n)
{
    if (n != 8 && n != 16)
        throw DimensionError("unsupported DCT block size " + std::to_string(n) + " (8 or 16)");
}

struct Basis {
    std::vector<double> forward;   // D
    std::vector<double> transpose; // D^T

    explicit Basis(int n) : forward(static_cast<std::size_t>(n * n)), transpose(forward.size())
    {
        for (int k = 0; k < n; ++k) {
            const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
            for (int i = 0; i < n; ++i) {
                const double v = scale * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
                forward[static_cast<std::size_t>(k * n + i)] = v;
                transpose[static_cast<std::size_t>(i * n + k)] = v;
            }
        }
    }
};

const Basis& basis(int n)
{
    check_size(n);
    static const Basis b8(8);
    static const Basis b16(16);
    return n == 8 ? b8 : b16;
}

// out = left * in * right
void sandwich(std::span<const double> left, std::span<const double> in, std::span<const double> right,
              std::span<double> out, int n)
{
    std::array<double, 256> tmp{};
    const auto nn = static_cast<std::size_t>(n * n);
    kernels::matmul(left, in, std::span(tmp).first(nn), static_cast<std::size_t>(n));
    kernels::matmul(std::span<const double>(tmp).first(nn), right, out, static_cast<std::size_t>(n));
}

} // namespace

SquareBlock::SquareBlock(int n) : n_(n)
{
    check_size(n);
    values_.assign(static_cast<std::size_t>(n * n), 0.0);
}

SquareBlock::SquareBlock(int n, std::vector<double> values) : n_(n), values_(std::move(values))
{
    check_size(n);
    if (values_.size() != static_cast<std::size_t>(n * n))
        throw DimensionError("block payload does not match n x n");
}

std::span<const double> dct_basis(int n) { return basis(n).forward; }

CoeffBlock dct2(const SampleBlock& block)
{
    const int n = block.size();
    const Basis& b = basis(n);
    CoeffBlock out(n);
    sandwich(b.forward, block.data(), b.transpose, out.data(), n);
    return out;
}

SampleBlock idct2(const CoeffBlock& coeffs)
{
    const int n = coeffs.size();
    const Basis& b = basis(n);
    SampleBlock out(n);
    sandwich(b.transpose, coeffs.data(), b.forward, out.data(), n);
    return out;
}

SampleBlock read_block(const GrayImage& img, int x0, int y0, int n)
{
    if (x0 < 0 || y0 < 0 || x0 + n > img.width() || y0 + n > img.height())
        throw DimensionError("block lies outside the image");
    SampleBlock block(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            block.at(r, c) = img.at(x0 + c, y0 + r);
    return block;
}

void write_block(GrayImage& img, int x0, int y0, const SampleBlock& block)
{
    const int n = block.size();
    if (x0 < 0 || y0 < 0 || x0 + n > img.width() || y0 + n > img.height())
        throw DimensionError("block lies outside the image");
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            img.at(x0 + c, y0 + r) = static_cast<std::uint8_t>(std::clamp(std::round(block.at(r, c)), 0.0, 255.0));
}

BlockGrid tile(const GrayImage& img, int n)
{
    check_size(n);
    if (img.width() % n != 0 || img.height() % n != 0)
        throw DimensionError("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                             " is not a multiple of block size " + std::to_string(n));
    BlockGrid grid;
    grid.rows = img.height() / n;
    grid.cols = img.width() / n;
    grid.blocks.reserve(static_cast<std::size_t>(grid.rows * grid.cols));
    for (int by = 0; by < grid.rows; ++by)
        for (int bx = 0; bx < grid.cols; ++bx)
            grid.blocks.push_back(dct2(read_block(img, bx * n, by * n, n)));
    return grid;
}

GrayImage untile(const BlockGrid& grid, int width, int height)
{
    if (grid.blocks.size() != static_cast<std::size_t>(grid.rows * grid.cols) || grid.blocks.empty())
        throw DimensionError("block grid is incomplete");
    const int n = grid.blocks.front().size();
    if (grid.cols * n != width || grid.rows * n != height)
        throw DimensionError("block grid does not cover the requested image size");
    GrayImage img(width, height);
    for (int by = 0; by < grid.rows; ++by) {
        for (int bx = 0; bx < grid.cols; ++bx) {
            const CoeffBlock& block = grid.at(by, bx);
            if (block.size() != n)
                throw DimensionError("block grid mixes block sizes");
            write_block(img, bx * n, by * n, idct2(block));
        }
    }
    return img;
}

} // namespace dpwm
