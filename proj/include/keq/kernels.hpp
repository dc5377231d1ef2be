#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops with a scalar reference implementation and an
// AVX2 variant selected at runtime. Both variants are bit-for-bit equivalent:
// the integer kernels trivially so, and pow_inplace because both sides run
// the same multiply-only repeated-squaring schedule.
namespace keq::kernels {

enum class Isa { scalar, avx2 };

Isa active();
bool supports(Isa isa);
// Test/override hook (also reachable via the KEQ_ISA environment variable,
// values "scalar" or "avx2"). Throws if the requested ISA is unavailable.
void force(Isa isa);
const char* isa_name(Isa isa);

// dst[i] = table[idx[i]]. dst must not alias table or idx. Backs permutation
// composition and word application.
void gather_u32(std::uint32_t* dst, const std::uint32_t* table,
                const std::uint32_t* idx, std::size_t n);

// Fixed-point bitmask of an image array (n <= 64): bit i set iff images[i] == i.
std::uint64_t fixed_mask64(const std::uint32_t* images, std::size_t n);

// Writes the indices i with (masks[i] & support) == support to out (ascending)
// and returns how many there are. This is the pointwise-stabilizer scan over
// per-element fixed-point masks.
std::size_t filter_supersets64(const std::uint64_t* masks, std::size_t n,
                               std::uint64_t support, std::uint32_t* out);

// xs[i] <- xs[i]^e elementwise by repeated squaring.
void pow_inplace(double* xs, std::size_t n, unsigned e);

}  // namespace keq::kernels
