#pragma once

#include <complex>
#include <span>

namespace gedanken::detail {

using Complex = std::complex<double>;

// Plain discrete Fourier sum, out[r] = sum_j in[j] exp(sign * 2 pi i j r / n).
// Radix-2 when n is a power of two, direct evaluation otherwise.
// in and out must not alias.
void dft(std::span<const Complex> in, std::span<Complex> out, int sign);

// Lattice-convention unitary maps between the centered position samples
// x_j = -L/2 + j dx and the momentum comb k_m = 2 pi m / L stored from
// m = -N/2 upward (see grid.hpp).  in and out must not alias.
void position_to_momentum(double spacing, std::span<const Complex> in,
                          std::span<Complex> out);
void momentum_to_position(double dk, std::span<const Complex> in,
                          std::span<Complex> out);

}  // namespace gedanken::detail
