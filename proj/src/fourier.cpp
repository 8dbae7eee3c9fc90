#include "gedanken/fourier.hpp"

#include <cassert>
#include <cmath>
#include <vector>

#include "gedanken/grid.hpp"

namespace gedanken::detail {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey with per-stage twiddles from std::polar
// (no accumulated twiddle products, keeps round-trips at the 1e-14 level).
void fft_pow2(std::vector<Complex>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<Complex> tw(n / 2);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t j = 0; j < half; ++j)
      tw[j] = std::polar(1.0, sign * 2.0 * kPi * double(j) / double(len));
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const Complex u = a[i + j];
        const Complex v = a[i + j + half] * tw[j];
        a[i + j] = u + v;
        a[i + j + half] = u - v;
      }
    }
  }
}

void dft_direct(std::span<const Complex> in, std::span<Complex> out,
                int sign) {
  const std::size_t n = in.size();
  std::vector<Complex> roots(n);
  for (std::size_t r = 0; r < n; ++r)
    roots[r] = std::polar(1.0, sign * 2.0 * kPi * double(r) / double(n));
  for (std::size_t r = 0; r < n; ++r) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) acc += in[j] * roots[(j * r) % n];
    out[r] = acc;
  }
}

}  // namespace

void dft(std::span<const Complex> in, std::span<Complex> out, int sign) {
  assert(in.size() == out.size());
  const std::size_t n = in.size();
  if (is_pow2(n)) {
    std::vector<Complex> buf(in.begin(), in.end());
    fft_pow2(buf, sign);
    std::copy(buf.begin(), buf.end(), out.begin());
  } else {
    dft_direct(in, out, sign);
  }
}

// With x_j = -L/2 + j dx and k_m = 2 pi m / L one has
// e^{-i k_m x_j} = (-1)^m e^{-2 pi i m j / N}, so the lattice transform is a
// plain DFT up to an alternating sign and an index rotation by N/2.

void position_to_momentum(double spacing, std::span<const Complex> in,
                          std::span<Complex> out) {
  const int n = static_cast<int>(in.size());
  std::vector<Complex> f(n);
  dft(in, f, -1);
  const double scale = spacing / std::sqrt(2.0 * kPi);
  for (int t = 0; t < n; ++t) {
    const int m = t - n / 2;
    const int r = ((m % n) + n) % n;
    const double sgn = (m & 1) ? -1.0 : 1.0;
    out[t] = scale * sgn * f[r];
  }
}

void momentum_to_position(double dk, std::span<const Complex> in,
                          std::span<Complex> out) {
  const int n = static_cast<int>(in.size());
  std::vector<Complex> h(n);
  for (int t = 0; t < n; ++t) {
    const int m = t - n / 2;
    const int r = ((m % n) + n) % n;
    const double sgn = (m & 1) ? -1.0 : 1.0;
    h[r] = sgn * in[t];
  }
  std::vector<Complex> g(n);
  dft(h, g, +1);
  const double scale = dk / std::sqrt(2.0 * kPi);
  for (int j = 0; j < n; ++j) out[j] = scale * g[j];
}

}  // namespace gedanken::detail
