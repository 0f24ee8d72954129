#include "dpwm/kernels.hpp"

namespace dpwm::kernels::detail {

namespace {

void matmul_scalar(const double* a, const double* b, double* c, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc = acc + a[i * n + k] * b[k * n + j];
            c[i * n + j] = acc;
        }
    }
}

void axpy_scalar(double w, const double* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        y[i] = y[i] + w * x[i];
}

std::uint64_t sum_sq_diff_scalar(const std::uint8_t* a, const std::uint8_t* b, std::size_t n)
{
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int d = int(a[i]) - int(b[i]);
        acc += static_cast<std::uint64_t>(d * d);
    }
    return acc;
}

std::size_t count_mismatch_scalar(const std::uint8_t* a, const std::uint8_t* b, std::size_t n)
{
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
        count += a[i] != b[i];
    return count;
}

} // namespace

const KernelTable scalar_table{
    Isa::scalar, matmul_scalar, axpy_scalar, sum_sq_diff_scalar, count_mismatch_scalar,
};

} // namespace dpwm::kernels::detail
