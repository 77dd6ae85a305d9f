// Compiled with -mavx2 only; callers must check is_supported(Isa::avx2).
#include "balance_nets/simd/kernels.hpp"

#include <immintrin.h>

namespace balance_nets::simd::avx2 {

  namespace {
    inline __m256i load_pair(Transf16 const* p) {
      return _mm256_loadu_si256(reinterpret_cast<__m256i const*>(p));
    }

    inline void store_pair(Transf16* p, __m256i v) {
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v);
    }

    inline __m256i broadcast(Transf16 const& t) {
      return _mm256_broadcastsi128_si256(
          _mm_load_si128(reinterpret_cast<__m128i const*>(t.img.data())));
    }

    // Clear the high nibble so pshufb never zeroes a byte.
    inline __m256i low_nibble(__m256i v) {
      return _mm256_and_si256(v, _mm256_set1_epi8(0x0F));
    }
  }  // namespace

  void compose_fixed_table(Transf16 const&           table,
                           std::span<Transf16 const> idx,
                           std::span<Transf16>       out) {
    __m256i const     t = broadcast(table);
    std::size_t const n = idx.size();
    std::size_t       k = 0;
    for (; k + 2 <= n; k += 2) {
      store_pair(&out[k], _mm256_shuffle_epi8(t, low_nibble(load_pair(&idx[k]))));
    }
    if (k < n) {
      scalar::compose_fixed_table(table, idx.subspan(k), out.subspan(k));
    }
  }

  void compose_fixed_index(std::span<Transf16 const> tables,
                           Transf16 const&           idx,
                           std::span<Transf16>       out) {
    __m256i const     ix = low_nibble(broadcast(idx));
    std::size_t const n  = tables.size();
    std::size_t       k  = 0;
    for (; k + 2 <= n; k += 2) {
      store_pair(&out[k], _mm256_shuffle_epi8(load_pair(&tables[k]), ix));
    }
    if (k < n) {
      scalar::compose_fixed_index(tables.subspan(k), idx, out.subspan(k));
    }
  }

  // Each of the four lanes accumulates the product of one contiguous quarter
  // of the factors; the lane products and the tail are then combined in order.
  Mat2Array mat2_ordered_product(Mat2View f) {
    std::size_t const n     = f.size();
    std::size_t const block = n / 4;
    if (block < 2) {
      return scalar::mat2_ordered_product(f);
    }
    __m256d a = _mm256_set1_pd(1.0), b = _mm256_setzero_pd(),
            c = _mm256_setzero_pd(), d = _mm256_set1_pd(1.0);
    __m256i const offsets = _mm256_set_epi64x(
        3 * static_cast<long long>(block), 2 * static_cast<long long>(block),
        static_cast<long long>(block), 0);
    for (std::size_t k = 0; k < block; ++k) {
      __m256i const ix = _mm256_add_epi64(
          offsets, _mm256_set1_epi64x(static_cast<long long>(k)));
      __m256d const p  = _mm256_i64gather_pd(f.m00.data(), ix, 8);
      __m256d const q  = _mm256_i64gather_pd(f.m01.data(), ix, 8);
      __m256d const r  = _mm256_i64gather_pd(f.m10.data(), ix, 8);
      __m256d const s  = _mm256_i64gather_pd(f.m11.data(), ix, 8);
      __m256d const na = _mm256_add_pd(_mm256_mul_pd(a, p), _mm256_mul_pd(b, r));
      __m256d const nb = _mm256_add_pd(_mm256_mul_pd(a, q), _mm256_mul_pd(b, s));
      __m256d const nc = _mm256_add_pd(_mm256_mul_pd(c, p), _mm256_mul_pd(d, r));
      __m256d const nd = _mm256_add_pd(_mm256_mul_pd(c, q), _mm256_mul_pd(d, s));
      a                = na;
      b                = nb;
      c                = nc;
      d                = nd;
    }
    alignas(32) double la[4], lb[4], lc[4], ld[4];
    _mm256_store_pd(la, a);
    _mm256_store_pd(lb, b);
    _mm256_store_pd(lc, c);
    _mm256_store_pd(ld, d);

    std::size_t const tail = 4 * block;
    Mat2Array         t    = scalar::mat2_ordered_product(
        {f.m00.subspan(tail), f.m01.subspan(tail), f.m10.subspan(tail),
                     f.m11.subspan(tail)});
    double const m00[5] = {la[0], la[1], la[2], la[3], t[0]};
    double const m01[5] = {lb[0], lb[1], lb[2], lb[3], t[1]};
    double const m10[5] = {lc[0], lc[1], lc[2], lc[3], t[2]};
    double const m11[5] = {ld[0], ld[1], ld[2], ld[3], t[3]};
    return scalar::mat2_ordered_product({m00, m01, m10, m11});
  }

  void mat2_mul_batch(Mat2View lhs, Mat2View rhs, Mat2MutView out) {
    std::size_t const n = lhs.size();
    std::size_t       k = 0;
    for (; k + 4 <= n; k += 4) {
      __m256d const a = _mm256_loadu_pd(&lhs.m00[k]);
      __m256d const b = _mm256_loadu_pd(&lhs.m01[k]);
      __m256d const c = _mm256_loadu_pd(&lhs.m10[k]);
      __m256d const d = _mm256_loadu_pd(&lhs.m11[k]);
      __m256d const p = _mm256_loadu_pd(&rhs.m00[k]);
      __m256d const q = _mm256_loadu_pd(&rhs.m01[k]);
      __m256d const r = _mm256_loadu_pd(&rhs.m10[k]);
      __m256d const s = _mm256_loadu_pd(&rhs.m11[k]);
      _mm256_storeu_pd(&out.m00[k],
                       _mm256_add_pd(_mm256_mul_pd(a, p), _mm256_mul_pd(b, r)));
      _mm256_storeu_pd(&out.m01[k],
                       _mm256_add_pd(_mm256_mul_pd(a, q), _mm256_mul_pd(b, s)));
      _mm256_storeu_pd(&out.m10[k],
                       _mm256_add_pd(_mm256_mul_pd(c, p), _mm256_mul_pd(d, r)));
      _mm256_storeu_pd(&out.m11[k],
                       _mm256_add_pd(_mm256_mul_pd(c, q), _mm256_mul_pd(d, s)));
    }
    if (k < n) {
      scalar::mat2_mul_batch(
          {lhs.m00.subspan(k), lhs.m01.subspan(k), lhs.m10.subspan(k),
           lhs.m11.subspan(k)},
          {rhs.m00.subspan(k), rhs.m01.subspan(k), rhs.m10.subspan(k),
           rhs.m11.subspan(k)},
          {out.m00.subspan(k), out.m01.subspan(k), out.m10.subspan(k),
           out.m11.subspan(k)});
    }
  }

  namespace {
    struct Quad {
      __m256d m00, m01, m10, m11;
    };

    inline Quad load_quad(Mat2View v, std::size_t k) {
      return {_mm256_loadu_pd(&v.m00[k]),
              _mm256_loadu_pd(&v.m01[k]),
              _mm256_loadu_pd(&v.m10[k]),
              _mm256_loadu_pd(&v.m11[k])};
    }

    inline Quad mul(Quad const& x, Quad const& y) {
      return {
          _mm256_add_pd(_mm256_mul_pd(x.m00, y.m00), _mm256_mul_pd(x.m01, y.m10)),
          _mm256_add_pd(_mm256_mul_pd(x.m00, y.m01), _mm256_mul_pd(x.m01, y.m11)),
          _mm256_add_pd(_mm256_mul_pd(x.m10, y.m00), _mm256_mul_pd(x.m11, y.m10)),
          _mm256_add_pd(_mm256_mul_pd(x.m10, y.m01), _mm256_mul_pd(x.m11, y.m11))};
    }
  }  // namespace

  void mat2_mul_add_batch(Mat2View    a,
                          Mat2View    b,
                          Mat2View    c,
                          Mat2View    d,
                          Mat2MutView out) {
    std::size_t const n = a.size();
    std::size_t       k = 0;
    for (; k + 4 <= n; k += 4) {
      Quad const x = mul(load_quad(a, k), load_quad(b, k));
      Quad const y = mul(load_quad(c, k), load_quad(d, k));
      _mm256_storeu_pd(&out.m00[k], _mm256_add_pd(x.m00, y.m00));
      _mm256_storeu_pd(&out.m01[k], _mm256_add_pd(x.m01, y.m01));
      _mm256_storeu_pd(&out.m10[k], _mm256_add_pd(x.m10, y.m10));
      _mm256_storeu_pd(&out.m11[k], _mm256_add_pd(x.m11, y.m11));
    }
    if (k < n) {
      auto tail = [k](Mat2View v) {
        return Mat2View{v.m00.subspan(k), v.m01.subspan(k), v.m10.subspan(k),
                        v.m11.subspan(k)};
      };
      scalar::mat2_mul_add_batch(tail(a),
                                 tail(b),
                                 tail(c),
                                 tail(d),
                                 {out.m00.subspan(k),
                                  out.m01.subspan(k),
                                  out.m10.subspan(k),
                                  out.m11.subspan(k)});
    }
  }

}  // namespace balance_nets::simd::avx2
