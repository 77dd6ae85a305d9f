#include "balance_nets/simd/kernels.hpp"

namespace balance_nets::simd::scalar {

  void compose_fixed_table(Transf16 const&           table,
                           std::span<Transf16 const> idx,
                           std::span<Transf16>       out) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      for (std::size_t i = 0; i < 16; ++i) {
        out[k].img[i] = table.img[idx[k].img[i] & 0x0F];
      }
    }
  }

  void compose_fixed_index(std::span<Transf16 const> tables,
                           Transf16 const&           idx,
                           std::span<Transf16>       out) {
    for (std::size_t k = 0; k < tables.size(); ++k) {
      for (std::size_t i = 0; i < 16; ++i) {
        out[k].img[i] = tables[k].img[idx.img[i] & 0x0F];
      }
    }
  }

  Mat2Array mat2_ordered_product(Mat2View f) {
    double a = 1, b = 0, c = 0, d = 1;
    for (std::size_t k = 0; k < f.size(); ++k) {
      double const p = f.m00[k], q = f.m01[k], r = f.m10[k], s = f.m11[k];
      double const na = a * p + b * r;
      double const nb = a * q + b * s;
      double const nc = c * p + d * r;
      double const nd = c * q + d * s;
      a = na;
      b = nb;
      c = nc;
      d = nd;
    }
    return {a, b, c, d};
  }

  void mat2_mul_batch(Mat2View lhs, Mat2View rhs, Mat2MutView out) {
    for (std::size_t k = 0; k < lhs.size(); ++k) {
      double const a = lhs.m00[k], b = lhs.m01[k], c = lhs.m10[k],
                   d = lhs.m11[k];
      double const p = rhs.m00[k], q = rhs.m01[k], r = rhs.m10[k],
                   s = rhs.m11[k];
      out.m00[k] = a * p + b * r;
      out.m01[k] = a * q + b * s;
      out.m10[k] = c * p + d * r;
      out.m11[k] = c * q + d * s;
    }
  }

  void mat2_mul_add_batch(Mat2View    a,
                          Mat2View    b,
                          Mat2View    c,
                          Mat2View    d,
                          Mat2MutView out) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      double const x00 = a.m00[k] * b.m00[k] + a.m01[k] * b.m10[k];
      double const x01 = a.m00[k] * b.m01[k] + a.m01[k] * b.m11[k];
      double const x10 = a.m10[k] * b.m00[k] + a.m11[k] * b.m10[k];
      double const x11 = a.m10[k] * b.m01[k] + a.m11[k] * b.m11[k];
      double const y00 = c.m00[k] * d.m00[k] + c.m01[k] * d.m10[k];
      double const y01 = c.m00[k] * d.m01[k] + c.m01[k] * d.m11[k];
      double const y10 = c.m10[k] * d.m00[k] + c.m11[k] * d.m10[k];
      double const y11 = c.m10[k] * d.m01[k] + c.m11[k] * d.m11[k];
      out.m00[k]       = x00 + y00;
      out.m01[k]       = x01 + y01;
      out.m10[k]       = x10 + y10;
      out.m11[k]       = x11 + y11;
    }
  }

}  // namespace balance_nets::simd::scalar
