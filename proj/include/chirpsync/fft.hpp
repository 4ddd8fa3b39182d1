#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace chirpsync::fft {

// Forward DFT of `in`, zero-padded to length n (n >= in.size()).
std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& in,
                                          std::size_t n);

// Unnormalized inverse DFT (caller divides by n where needed).
std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& in);

// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

}  // namespace chirpsync::fft
