#include <cmath>

#include "flee/simd/kernels.hpp"
#include "kernels_impl.hpp"

namespace flee::simd {
namespace {

void gemv(std::span<const double> w, std::span<const double> b, std::span<const double> x, std::span<double> y) {
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double* row = w.data() + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc + (b.empty() ? 0.0 : b[r]);
  }
}

void gemv_t_acc(std::span<const double> w, std::span<const double> g, std::span<double> out) {
  const std::size_t cols = out.size();
  for (std::size_t r = 0; r < g.size(); ++r) {
    const double* row = w.data() + r * cols;
    const double gr = g[r];
    for (std::size_t c = 0; c < cols; ++c) out[c] += row[c] * gr;
  }
}

void ger_acc(std::span<const double> g, std::span<const double> x, std::span<double> grad_w) {
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < g.size(); ++r) {
    double* row = grad_w.data() + r * cols;
    const double gr = g[r];
    for (std::size_t c = 0; c < cols; ++c) row[c] += gr * x[c];
  }
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void adam(std::span<double> p, std::span<const double> g, std::span<double> m, std::span<double> v,
          const AdamCoeffs& k) {
  const double one_m_b1 = 1.0 - k.beta1;
  const double one_m_b2 = 1.0 - k.beta2;
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = k.beta1 * m[i] + one_m_b1 * g[i];
    v[i] = k.beta2 * v[i] + (one_m_b2 * g[i]) * g[i];
    const double mhat = m[i] / k.bias1;
    const double vhat = v[i] / k.bias2;
    p[i] -= (k.lr * mhat) / (std::sqrt(vhat) + k.eps);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar, gemv, gemv_t_acc, ger_acc, axpy, adam};
  return table;
}

}  // namespace flee::simd
