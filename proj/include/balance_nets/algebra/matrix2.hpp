#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>

namespace balance_nets {

  // A 2x2 matrix [[m00, m01], [m10, m11]] over a real or complex scalar.
  template <typename T>
  struct BasicMatrix2 {
    T m00{}, m01{}, m10{}, m11{};

    static constexpr BasicMatrix2 identity() noexcept {
      return {T(1), T(0), T(0), T(1)};
    }

    static constexpr BasicMatrix2 zero() noexcept {
      return {};
    }

    // Z = [[0, 1], [1, 0]]
    static constexpr BasicMatrix2 swap() noexcept {
      return {T(0), T(1), T(1), T(0)};
    }

    T det() const noexcept {
      return m00 * m11 - m01 * m10;
    }

    T trace() const noexcept {
      return m00 + m11;
    }

    BasicMatrix2 inverse() const {
      T const d = det();
      return {m11 / d, -m01 / d, -m10 / d, m00 / d};
    }

    BasicMatrix2& operator+=(BasicMatrix2 const& o) noexcept {
      m00 += o.m00;
      m01 += o.m01;
      m10 += o.m10;
      m11 += o.m11;
      return *this;
    }

    BasicMatrix2& operator-=(BasicMatrix2 const& o) noexcept {
      m00 -= o.m00;
      m01 -= o.m01;
      m10 -= o.m10;
      m11 -= o.m11;
      return *this;
    }

    BasicMatrix2& operator*=(T s) noexcept {
      m00 *= s;
      m01 *= s;
      m10 *= s;
      m11 *= s;
      return *this;
    }

    friend BasicMatrix2 operator+(BasicMatrix2 a, BasicMatrix2 const& b) noexcept {
      return a += b;
    }

    friend BasicMatrix2 operator-(BasicMatrix2 a, BasicMatrix2 const& b) noexcept {
      return a -= b;
    }

    friend BasicMatrix2 operator-(BasicMatrix2 a) noexcept {
      return a *= T(-1);
    }

    friend BasicMatrix2 operator*(BasicMatrix2 a, T s) noexcept {
      return a *= s;
    }

    friend BasicMatrix2 operator*(T s, BasicMatrix2 a) noexcept {
      return a *= s;
    }

    friend BasicMatrix2 operator*(BasicMatrix2 const& a,
                                  BasicMatrix2 const& b) noexcept {
      return {a.m00 * b.m00 + a.m01 * b.m10,
              a.m00 * b.m01 + a.m01 * b.m11,
              a.m10 * b.m00 + a.m11 * b.m10,
              a.m10 * b.m01 + a.m11 * b.m11};
    }

    friend bool operator==(BasicMatrix2 const&, BasicMatrix2 const&) = default;
  };

  using Matrix2  = BasicMatrix2<double>;
  using CMatrix2 = BasicMatrix2<std::complex<double>>;

  // Largest absolute entry.
  template <typename T>
  double norm_max(BasicMatrix2<T> const& m) noexcept {
    using std::abs;
    return std::max({abs(m.m00), abs(m.m01), abs(m.m10), abs(m.m11)});
  }

  template <typename T>
  bool approx_equal(BasicMatrix2<T> const& a,
                    BasicMatrix2<T> const& b,
                    double                 tol) noexcept {
    return norm_max(a - b) <= tol;
  }

  inline std::ostream& operator<<(std::ostream& os, Matrix2 const& m) {
    return os << "[[" << m.m00 << ", " << m.m01 << "], [" << m.m10 << ", "
              << m.m11 << "]]";
  }

}  // namespace balance_nets
