// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "flee/simd/kernels.hpp"
#include "kernels_impl.hpp"

namespace flee::simd {
namespace {

inline double hsum(__m256d v) {
  // Fixed lane order: (l0 + l1) + (l2 + l3).
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void gemv(std::span<const double> w, std::span<const double> b, std::span<const double> x, std::span<double> y) {
  const std::size_t cols = x.size();
  const std::size_t vec_end = cols & ~std::size_t{3};
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double* row = w.data() + r * cols;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t c = 0; c < vec_end; c += 4) {
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x.data() + c), acc);
    }
    double sum = hsum(acc);
    for (std::size_t c = vec_end; c < cols; ++c) sum += row[c] * x[c];
    y[r] = sum + (b.empty() ? 0.0 : b[r]);
  }
}

void gemv_t_acc(std::span<const double> w, std::span<const double> g, std::span<double> out) {
  const std::size_t cols = out.size();
  const std::size_t vec_end = cols & ~std::size_t{3};
  for (std::size_t r = 0; r < g.size(); ++r) {
    const double* row = w.data() + r * cols;
    const __m256d gr = _mm256_set1_pd(g[r]);
    for (std::size_t c = 0; c < vec_end; c += 4) {
      __m256d o = _mm256_loadu_pd(out.data() + c);
      o = _mm256_add_pd(o, _mm256_mul_pd(_mm256_loadu_pd(row + c), gr));
      _mm256_storeu_pd(out.data() + c, o);
    }
    for (std::size_t c = vec_end; c < cols; ++c) out[c] += row[c] * g[r];
  }
}

void ger_acc(std::span<const double> g, std::span<const double> x, std::span<double> grad_w) {
  const std::size_t cols = x.size();
  const std::size_t vec_end = cols & ~std::size_t{3};
  for (std::size_t r = 0; r < g.size(); ++r) {
    double* row = grad_w.data() + r * cols;
    const __m256d gr = _mm256_set1_pd(g[r]);
    for (std::size_t c = 0; c < vec_end; c += 4) {
      __m256d o = _mm256_loadu_pd(row + c);
      o = _mm256_add_pd(o, _mm256_mul_pd(gr, _mm256_loadu_pd(x.data() + c)));
      _mm256_storeu_pd(row + c, o);
    }
    for (std::size_t c = vec_end; c < cols; ++c) row[c] += g[r] * x[c];
  }
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = y.size();
  const std::size_t vec_end = n & ~std::size_t{3};
  const __m256d av = _mm256_set1_pd(a);
  for (std::size_t i = 0; i < vec_end; i += 4) {
    __m256d o = _mm256_loadu_pd(y.data() + i);
    o = _mm256_add_pd(o, _mm256_mul_pd(av, _mm256_loadu_pd(x.data() + i)));
    _mm256_storeu_pd(y.data() + i, o);
  }
  for (std::size_t i = vec_end; i < n; ++i) y[i] += a * x[i];
}

void adam(std::span<double> p, std::span<const double> g, std::span<double> m, std::span<double> v,
          const AdamCoeffs& k) {
  const double one_m_b1 = 1.0 - k.beta1;
  const double one_m_b2 = 1.0 - k.beta2;
  const std::size_t n = p.size();
  const std::size_t vec_end = n & ~std::size_t{3};
  const __m256d b1 = _mm256_set1_pd(k.beta1), b2 = _mm256_set1_pd(k.beta2);
  const __m256d c1 = _mm256_set1_pd(one_m_b1), c2 = _mm256_set1_pd(one_m_b2);
  const __m256d bias1 = _mm256_set1_pd(k.bias1), bias2 = _mm256_set1_pd(k.bias2);
  const __m256d lr = _mm256_set1_pd(k.lr), eps = _mm256_set1_pd(k.eps);
  for (std::size_t i = 0; i < vec_end; i += 4) {
    const __m256d gi = _mm256_loadu_pd(g.data() + i);
    __m256d mi = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m.data() + i)), _mm256_mul_pd(c1, gi));
    __m256d vi = _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(v.data() + i)),
                               _mm256_mul_pd(_mm256_mul_pd(c2, gi), gi));
    _mm256_storeu_pd(m.data() + i, mi);
    _mm256_storeu_pd(v.data() + i, vi);
    const __m256d mhat = _mm256_div_pd(mi, bias1);
    const __m256d vhat = _mm256_div_pd(vi, bias2);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(lr, mhat), _mm256_add_pd(_mm256_sqrt_pd(vhat), eps));
    _mm256_storeu_pd(p.data() + i, _mm256_sub_pd(_mm256_loadu_pd(p.data() + i), step));
  }
  for (std::size_t i = vec_end; i < n; ++i) {
    m[i] = k.beta1 * m[i] + one_m_b1 * g[i];
    v[i] = k.beta2 * v[i] + (one_m_b2 * g[i]) * g[i];
    const double mhat = m[i] / k.bias1;
    const double vhat = v[i] / k.bias2;
    p[i] -= (k.lr * mhat) / (std::sqrt(vhat) + k.eps);
  }
}

}  // namespace

namespace detail {
const KernelTable& avx2_table() {
  static const KernelTable table{Isa::Avx2, gemv, gemv_t_acc, ger_acc, axpy, adam};
  return table;
}
}  // namespace detail

}  // namespace flee::simd
