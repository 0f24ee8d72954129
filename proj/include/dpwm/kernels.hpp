#pragma once

// Data-parallel inner loops used by the transforms, filters and metrics.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, a vector variant. The active table is chosen once at first use
// from the CPU features and the DPWM_KERNELS environment variable
// ("scalar" or "avx2"). Vector variants accumulate in the same order as the
// scalar reference and never fuse multiply-add, so results are bit-identical
// across variants.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace dpwm::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
    Isa isa;
    /// c = a * b for row-major n x n matrices; c must not alias a or b.
    void (*matmul)(const double* a, const double* b, double* c, std::size_t n);
    /// y += w * x
    void (*axpy)(double w, const double* x, double* y, std::size_t n);
    std::uint64_t (*sum_sq_diff_u8)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
    std::size_t (*count_mismatch_u8)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
};

bool isa_supported(Isa isa) noexcept;

/// Table for a specific variant; throws ParameterError if the CPU lacks it.
const KernelTable& table(Isa isa);

const KernelTable& active() noexcept;

/// Overrides the runtime selection (tests, benchmarking).
void select(Isa isa);

// Span front-ends over the active table.
void matmul(std::span<const double> a, std::span<const double> b, std::span<double> c, std::size_t n);
void axpy(double w, std::span<const double> x, std::span<double> y);
std::uint64_t sum_sq_diff(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
std::size_t count_mismatch(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

namespace detail {
extern const KernelTable scalar_table;
#if defined(DPWM_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
} // namespace detail

} // namespace dpwm::kernels
