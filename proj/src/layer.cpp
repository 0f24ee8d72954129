#include "dpwm/layer.hpp"

#include <cmath>

#include "dpwm/kernels.hpp"

namespace dpwm {

namespace {

void require8(const CoeffBlock& x)
{
    if (x.size() != 8)
        throw DimensionError("layer conversion expects 8x8 sub-blocks");
}

// Places the four 8x8 quadrants into one 16x16 row-major buffer.
template <typename Block>
std::vector<double> assemble(const Block& a, const Block& b, const Block& c, const Block& d)
{
    std::vector<double> out(256);
    const Block* quad[4] = {&a, &b, &c, &d};
    for (int q = 0; q < 4; ++q) {
        const int r0 = (q / 2) * 8;
        const int c0 = (q % 2) * 8;
        const auto src = quad[q]->data();
        for (int r = 0; r < 8; ++r)
            for (int col = 0; col < 8; ++col)
                out[static_cast<std::size_t>((r0 + r) * 16 + c0 + col)] = src[static_cast<std::size_t>(r * 8 + col)];
    }
    return out;
}

SampleBlock quadrant(const SampleBlock& whole, int q)
{
    const int r0 = (q / 2) * 8;
    const int c0 = (q % 2) * 8;
    SampleBlock out(8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            out.at(r, c) = whole.at(r0 + r, c0 + c);
    return out;
}

} // namespace

CoeffBlock subblocks_to_layer16(const CoeffBlock& a, const CoeffBlock& b, const CoeffBlock& c, const CoeffBlock& d)
{
    require8(a);
    require8(b);
    require8(c);
    require8(d);
    return dct2(SampleBlock(16, assemble(idct2(a), idct2(b), idct2(c), idct2(d))));
}

SubBlocks layer16_to_subblocks(const CoeffBlock& layer16)
{
    if (layer16.size() != 16)
        throw DimensionError("layer conversion expects a 16x16 block");
    const SampleBlock spatial = idct2(layer16);
    SubBlocks out;
    auto parts = out.all();
    for (int q = 0; q < 4; ++q)
        *parts[static_cast<std::size_t>(q)] = dct2(quadrant(spatial, q));
    return out;
}

ConversionMatrix build_conversion_matrix()
{
    const auto d16 = dct_basis(16);
    const auto d8 = dct_basis(8);
    std::vector<double> blockdiag(256, 0.0); // blockdiag(D8^T, D8^T)
    for (int half = 0; half < 2; ++half)
        for (int i = 0; i < 8; ++i)
            for (int k = 0; k < 8; ++k)
                blockdiag[static_cast<std::size_t>((half * 8 + i) * 16 + half * 8 + k)] =
                    d8[static_cast<std::size_t>(k * 8 + i)];

    ConversionMatrix m;
    m.p.assign(256, 0.0);
    kernels::matmul(d16, blockdiag, m.p, 16);
    for (double& v : m.p)
        v *= std::sqrt(2.0);
    return m;
}

CoeffBlock ConversionMatrix::apply(const CoeffBlock& a, const CoeffBlock& b, const CoeffBlock& c,
                                   const CoeffBlock& d) const
{
    require8(a);
    require8(b);
    require8(c);
    require8(d);
    const std::vector<double> stacked = assemble(a, b, c, d);
    std::vector<double> pt(256);
    for (int r = 0; r < 16; ++r)
        for (int col = 0; col < 16; ++col)
            pt[static_cast<std::size_t>(col * 16 + r)] = at(r, col);
    std::vector<double> tmp(256);
    std::vector<double> out(256);
    kernels::matmul(p, stacked, tmp, 16);
    kernels::matmul(tmp, pt, out, 16);
    for (double& v : out)
        v *= 0.5;
    return CoeffBlock(16, std::move(out));
}

} // namespace dpwm
