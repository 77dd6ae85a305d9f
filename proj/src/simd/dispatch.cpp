#include <atomic>
#include <cstdlib>
#include <string>

#include "balance_nets/error.hpp"
#include "balance_nets/simd/kernels.hpp"

namespace balance_nets::simd {

  namespace {
    bool cpu_has_avx2() noexcept {
#if defined(BALANCE_NETS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    }

    Isa initial_isa() noexcept {
      Isa best = detected_isa();
      if (char const* env = std::getenv("BALANCE_NETS_SIMD")) {
        std::string const want(env);
        if (want == "scalar") {
          return Isa::scalar;
        }
        if (want == "avx2" && is_supported(Isa::avx2)) {
          return Isa::avx2;
        }
      }
      return best;
    }

    std::atomic<Isa>& active() noexcept {
      static std::atomic<Isa> isa{initial_isa()};
      return isa;
    }

    bool use_avx2() noexcept {
      return active().load(std::memory_order_relaxed) == Isa::avx2;
    }
  }  // namespace

  std::string_view to_string(Isa isa) noexcept {
    return isa == Isa::avx2 ? "avx2" : "scalar";
  }

  bool is_supported(Isa isa) noexcept {
    return isa == Isa::scalar || cpu_has_avx2();
  }

  Isa detected_isa() noexcept {
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  }

  Isa active_isa() noexcept {
    return active().load(std::memory_order_relaxed);
  }

  void set_active_isa(Isa isa) {
    if (!is_supported(isa)) {
      fail(ErrorCode::invalid_input,
           "SIMD instruction set " + std::string(to_string(isa))
               + " is not available on this machine");
    }
    active().store(isa, std::memory_order_relaxed);
  }

#if defined(BALANCE_NETS_HAVE_AVX2)
#define BALANCE_NETS_DISPATCH(fn, ...) \
  (use_avx2() ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define BALANCE_NETS_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

  void compose_fixed_table(Transf16 const&           table,
                           std::span<Transf16 const> idx,
                           std::span<Transf16>       out) {
    BALANCE_NETS_DISPATCH(compose_fixed_table, table, idx, out);
  }

  void compose_fixed_index(std::span<Transf16 const> tables,
                           Transf16 const&           idx,
                           std::span<Transf16>       out) {
    BALANCE_NETS_DISPATCH(compose_fixed_index, tables, idx, out);
  }

  Mat2Array mat2_ordered_product(Mat2View factors) {
    return BALANCE_NETS_DISPATCH(mat2_ordered_product, factors);
  }

  void mat2_mul_batch(Mat2View lhs, Mat2View rhs, Mat2MutView out) {
    BALANCE_NETS_DISPATCH(mat2_mul_batch, lhs, rhs, out);
  }

  void mat2_mul_add_batch(Mat2View    a,
                          Mat2View    b,
                          Mat2View    c,
                          Mat2View    d,
                          Mat2MutView out) {
    BALANCE_NETS_DISPATCH(mat2_mul_add_batch, a, b, c, d, out);
  }

#undef BALANCE_NETS_DISPATCH

}  // namespace balance_nets::simd
