// Compiled with -mavx2 only; dispatch guarantees these run on AVX2 hardware.
#include "dpwm/kernels.hpp"

#if defined(DPWM_HAVE_AVX2)

#include <immintrin.h>

namespace dpwm::kernels::detail {

namespace {

void matmul_avx2(const double* a, const double* b, double* c, std::size_t n)
{
    const std::size_t vec_end = n - n % 4;
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = a + i * n;
        double* crow = c + i * n;
        std::size_t j = 0;
        for (; j < vec_end; j += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (std::size_t k = 0; k < n; ++k) {
                const __m256d prod = _mm256_mul_pd(_mm256_set1_pd(arow[k]), _mm256_loadu_pd(b + k * n + j));
                acc = _mm256_add_pd(acc, prod);
            }
            _mm256_storeu_pd(crow + j, acc);
        }
        for (; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc = acc + arow[k] * b[k * n + j];
            crow[j] = acc;
        }
    }
}

void axpy_avx2(double w, const double* x, double* y, std::size_t n)
{
    const __m256d wv = _mm256_set1_pd(w);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(wv, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i)
        y[i] = y[i] + w * x[i];
}

std::uint64_t sum_sq_diff_avx2(const std::uint8_t* a, const std::uint8_t* b, std::size_t n)
{
    // 16 samples per step: widen to int16, square-and-pair-add to int32, then
    // widen to int64 before the 32-bit lanes can overflow.
    __m256i acc64 = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const __m256i va = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i)));
        const __m256i vb = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i)));
        const __m256i d = _mm256_sub_epi16(va, vb);
        const __m256i sq = _mm256_madd_epi16(d, d);
        acc64 = _mm256_add_epi64(acc64, _mm256_cvtepu32_epi64(_mm256_castsi256_si128(sq)));
        acc64 = _mm256_add_epi64(acc64, _mm256_cvtepu32_epi64(_mm256_extracti128_si256(sq, 1)));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc64);
    std::uint64_t acc = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) {
        const int d = int(a[i]) - int(b[i]);
        acc += static_cast<std::uint64_t>(d * d);
    }
    return acc;
}

std::size_t count_mismatch_avx2(const std::uint8_t* a, const std::uint8_t* b, std::size_t n)
{
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const auto equal = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
        count += 32 - static_cast<std::size_t>(__builtin_popcount(equal));
    }
    for (; i < n; ++i)
        count += a[i] != b[i];
    return count;
}

} // namespace

const KernelTable avx2_table{
    Isa::avx2, matmul_avx2, axpy_avx2, sum_sq_diff_avx2, count_mismatch_avx2,
};

} // namespace dpwm::kernels::detail

#endif
