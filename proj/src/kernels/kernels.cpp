#include "dpwm/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "dpwm/error.hpp"

namespace dpwm::kernels {

namespace {

const KernelTable* pick_default() noexcept
{
    const char* forced = std::getenv("DPWM_KERNELS");
    if (forced != nullptr && std::string_view(forced) == "scalar")
        return &detail::scalar_table;
#if defined(DPWM_HAVE_AVX2)
    if (isa_supported(Isa::avx2))
        return &detail::avx2_table;
#endif
    return &detail::scalar_table;
}

std::atomic<const KernelTable*>& slot() noexcept
{
    static std::atomic<const KernelTable*> current{pick_default()};
    return current;
}

void require(bool ok, const char* what)
{
    if (!ok)
        throw DimensionError(what);
}

} // namespace

std::string_view isa_name(Isa isa) noexcept
{
    switch (isa) {
    case Isa::scalar:
        return "scalar";
    case Isa::avx2:
        return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept
{
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(DPWM_HAVE_AVX2)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa)
{
    if (!isa_supported(isa))
        throw ParameterError("kernel variant " + std::string(isa_name(isa)) + " not supported on this CPU");
#if defined(DPWM_HAVE_AVX2)
    if (isa == Isa::avx2)
        return detail::avx2_table;
#endif
    return detail::scalar_table;
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

void select(Isa isa) { slot().store(&table(isa), std::memory_order_release); }

void matmul(std::span<const double> a, std::span<const double> b, std::span<double> c, std::size_t n)
{
    require(a.size() == n * n && b.size() == n * n && c.size() == n * n, "matmul operand size mismatch");
    active().matmul(a.data(), b.data(), c.data(), n);
}

void axpy(double w, std::span<const double> x, std::span<double> y)
{
    require(x.size() == y.size(), "axpy length mismatch");
    active().axpy(w, x.data(), y.data(), x.size());
}

std::uint64_t sum_sq_diff(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b)
{
    require(a.size() == b.size(), "sum_sq_diff length mismatch");
    return active().sum_sq_diff_u8(a.data(), b.data(), a.size());
}

std::size_t count_mismatch(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b)
{
    require(a.size() == b.size(), "count_mismatch length mismatch");
    return active().count_mismatch_u8(a.data(), b.data(), a.size());
}

} // namespace dpwm::kernels
