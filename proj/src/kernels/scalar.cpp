#include <cstddef>
#include <cstdint>

namespace keq::kernels::detail {

void gather_u32_scalar(std::uint32_t* dst, const std::uint32_t* table,
                       const std::uint32_t* idx, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = table[idx[i]];
}

std::uint64_t fixed_mask64_scalar(const std::uint32_t* images, std::size_t n) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (images[i] == i) mask |= std::uint64_t{1} << i;
  return mask;
}

std::size_t filter_supersets64_scalar(const std::uint64_t* masks, std::size_t n,
                                      std::uint64_t support, std::uint32_t* out) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    if ((masks[i] & support) == support) out[k++] = static_cast<std::uint32_t>(i);
  return k;
}

void pow_inplace_scalar(double* xs, std::size_t n, unsigned e) {
  for (std::size_t i = 0; i < n; ++i) {
    double r = 1.0;
    double b = xs[i];
    unsigned k = e;
    while (k) {
      if (k & 1u) r *= b;
      k >>= 1u;
      if (k) b *= b;
    }
    xs[i] = r;
  }
}

}  // namespace keq::kernels::detail
