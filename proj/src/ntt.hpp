#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace galois_lab::detail {

// 29 * 2^57 + 1, primitive root 3
inline constexpr std::uint64_t ntt_prime = 4179340454199820289ULL;
inline constexpr unsigned ntt_max_log2 = 57;

// Cyclic convolution of length n (a power of two, inputs zero-padded) modulo
// ntt_prime. Exact over the integers whenever every true coefficient is
// smaller than ntt_prime.
std::vector<std::uint64_t> cyclic_convolution(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b,
                                              std::size_t n);

} // namespace galois_lab::detail
