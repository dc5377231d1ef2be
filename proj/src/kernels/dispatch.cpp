#include "keq/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include "keq/error.hpp"

namespace keq::kernels {

namespace detail {
void gather_u32_scalar(std::uint32_t*, const std::uint32_t*, const std::uint32_t*, std::size_t);
std::uint64_t fixed_mask64_scalar(const std::uint32_t*, std::size_t);
std::size_t filter_supersets64_scalar(const std::uint64_t*, std::size_t, std::uint64_t,
                                      std::uint32_t*);
void pow_inplace_scalar(double*, std::size_t, unsigned);
#if KEQ_HAVE_AVX2
void gather_u32_avx2(std::uint32_t*, const std::uint32_t*, const std::uint32_t*, std::size_t);
std::uint64_t fixed_mask64_avx2(const std::uint32_t*, std::size_t);
std::size_t filter_supersets64_avx2(const std::uint64_t*, std::size_t, std::uint64_t,
                                    std::uint32_t*);
void pow_inplace_avx2(double*, std::size_t, unsigned);
#endif
}  // namespace detail

namespace {

struct Table {
  void (*gather)(std::uint32_t*, const std::uint32_t*, const std::uint32_t*, std::size_t);
  std::uint64_t (*fixed_mask)(const std::uint32_t*, std::size_t);
  std::size_t (*filter)(const std::uint64_t*, std::size_t, std::uint64_t, std::uint32_t*);
  void (*pow)(double*, std::size_t, unsigned);
  Isa isa;
};

constexpr Table kScalarTable{detail::gather_u32_scalar, detail::fixed_mask64_scalar,
                             detail::filter_supersets64_scalar, detail::pow_inplace_scalar,
                             Isa::scalar};
#if KEQ_HAVE_AVX2
constexpr Table kAvx2Table{detail::gather_u32_avx2, detail::fixed_mask64_avx2,
                           detail::filter_supersets64_avx2, detail::pow_inplace_avx2, Isa::avx2};
#endif

std::atomic<const Table*> g_table{nullptr};
std::once_flag g_init_once;

bool cpu_has_avx2() {
#if KEQ_HAVE_AVX2
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const Table* table_for(Isa isa) {
#if KEQ_HAVE_AVX2
  if (isa == Isa::avx2) return &kAvx2Table;
#endif
  (void)isa;
  return &kScalarTable;
}

void init_default() {
  Isa isa = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  if (const char* env = std::getenv("KEQ_ISA")) {
    if (std::strcmp(env, "scalar") == 0) isa = Isa::scalar;
    else if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) isa = Isa::avx2;
  }
  g_table.store(table_for(isa), std::memory_order_release);
}

const Table& table() {
  const Table* t = g_table.load(std::memory_order_acquire);
  if (!t) {
    std::call_once(g_init_once, init_default);
    t = g_table.load(std::memory_order_acquire);
  }
  return *t;
}

}  // namespace

Isa active() { return table().isa; }

bool supports(Isa isa) {
  if (isa == Isa::scalar) return true;
  return cpu_has_avx2();
}

void force(Isa isa) {
  if (!supports(isa)) throw Error("kernel ISA not supported on this build/CPU");
  std::call_once(g_init_once, init_default);  // keep later loads from re-initializing
  g_table.store(table_for(isa), std::memory_order_release);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void gather_u32(std::uint32_t* dst, const std::uint32_t* table_, const std::uint32_t* idx,
                std::size_t n) {
  table().gather(dst, table_, idx, n);
}

std::uint64_t fixed_mask64(const std::uint32_t* images, std::size_t n) {
  return table().fixed_mask(images, n);
}

std::size_t filter_supersets64(const std::uint64_t* masks, std::size_t n, std::uint64_t support,
                               std::uint32_t* out) {
  return table().filter(masks, n, support, out);
}

void pow_inplace(double* xs, std::size_t n, unsigned e) { table().pow(xs, n, e); }

}  // namespace keq::kernels
