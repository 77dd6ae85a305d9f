#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64 builds, an AVX2 version; the dispatching entry points pick one at
// runtime. The per-ISA namespaces are public so the equivalence tests can call
// both sides directly.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace balance_nets::simd {

  enum class Isa { scalar, avx2 };

  std::string_view to_string(Isa isa) noexcept;

  // Best ISA supported by both the build and the running CPU.
  Isa detected_isa() noexcept;

  // ISA used by the dispatching kernels. Starts at detected_isa(), or at the
  // value of BALANCE_NETS_SIMD ("scalar" / "avx2") when that is set and usable.
  Isa active_isa() noexcept;

  // Throws Error(invalid_input) when `isa` is not usable on this machine.
  void set_active_isa(Isa isa);

  bool is_supported(Isa isa) noexcept;

  // A transformation of {0, ..., 15}: point i maps to img[i]. Transformations
  // of n < 16 points fix the unused tail.
  struct alignas(16) Transf16 {
    std::array<std::uint8_t, 16> img;

    static Transf16 identity() noexcept {
      Transf16 t{};
      for (std::uint8_t i = 0; i < 16; ++i) {
        t.img[i] = i;
      }
      return t;
    }

    friend bool operator==(Transf16 const&, Transf16 const&) = default;
  };

  // Read-only 2x2 matrices in structure-of-arrays layout; entry k of each span
  // belongs to matrix k.
  struct Mat2View {
    std::span<double const> m00, m01, m10, m11;

    std::size_t size() const noexcept {
      return m00.size();
    }
  };

  struct Mat2MutView {
    std::span<double> m00, m01, m10, m11;

    std::size_t size() const noexcept {
      return m00.size();
    }
  };

  using Mat2Array = std::array<double, 4>;  // row-major

  // out[k].img[i] = table.img[idx[k].img[i]]
  void compose_fixed_table(Transf16 const&            table,
                           std::span<Transf16 const>  idx,
                           std::span<Transf16>        out);

  // out[k].img[i] = tables[k].img[idx.img[i]]
  void compose_fixed_index(std::span<Transf16 const> tables,
                           Transf16 const&           idx,
                           std::span<Transf16>       out);

  // factors[0] * factors[1] * ... * factors[n-1]; identity when empty.
  Mat2Array mat2_ordered_product(Mat2View factors);

  // out[k] = lhs[k] * rhs[k]
  void mat2_mul_batch(Mat2View lhs, Mat2View rhs, Mat2MutView out);

  // out[k] = a[k] * b[k] + c[k] * d[k]
  void mat2_mul_add_batch(Mat2View    a,
                          Mat2View    b,
                          Mat2View    c,
                          Mat2View    d,
                          Mat2MutView out);

  namespace scalar {
    void      compose_fixed_table(Transf16 const&,
                                  std::span<Transf16 const>,
                                  std::span<Transf16>);
    void      compose_fixed_index(std::span<Transf16 const>,
                                  Transf16 const&,
                                  std::span<Transf16>);
    Mat2Array mat2_ordered_product(Mat2View);
    void      mat2_mul_batch(Mat2View, Mat2View, Mat2MutView);
    void mat2_mul_add_batch(Mat2View, Mat2View, Mat2View, Mat2View, Mat2MutView);
  }  // namespace scalar

#if defined(BALANCE_NETS_HAVE_AVX2)
  namespace avx2 {
    void      compose_fixed_table(Transf16 const&,
                                  std::span<Transf16 const>,
                                  std::span<Transf16>);
    void      compose_fixed_index(std::span<Transf16 const>,
                                  Transf16 const&,
                                  std::span<Transf16>);
    Mat2Array mat2_ordered_product(Mat2View);
    void      mat2_mul_batch(Mat2View, Mat2View, Mat2MutView);
    void mat2_mul_add_batch(Mat2View, Mat2View, Mat2View, Mat2View, Mat2MutView);
  }  // namespace avx2
#endif

}  // namespace balance_nets::simd
