#pragma once

#include <cassert>
#include <cstdint>
#include <ostream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace opforms {

// Prime field F_P with canonical representatives in [0, P).
template <unsigned P>
class GF {
  static_assert(P >= 2 && P < (1u << 15), "small prime expected");

 public:
  constexpr GF() = default;
  constexpr explicit GF(long long x) : v_(norm(x)) {}

  static constexpr GF zero() { return GF(); }
  static constexpr GF one() { return GF(1); }
  static constexpr unsigned characteristic() { return P; }
  static GF from_int(long long x) { return GF(x); }
  static GF parse(const std::string& s) { return GF(std::stoll(s)); }

  constexpr std::uint32_t rep() const { return v_; }
  constexpr bool is_zero() const { return v_ == 0; }

  friend constexpr GF operator+(GF a, GF b) {
    return GF(static_cast<long long>(a.v_) + b.v_);
  }
  friend constexpr GF operator-(GF a, GF b) {
    return GF(static_cast<long long>(a.v_) + P - b.v_);
  }
  friend constexpr GF operator*(GF a, GF b) {
    return GF(static_cast<long long>(a.v_) * b.v_);
  }
  constexpr GF operator-() const { return GF(static_cast<long long>(P) - v_); }

  GF inv() const {
    assert(v_ != 0 && "division by zero");
    // Fermat: v^(P-2); P is tiny.
    GF r = one(), b = *this;
    unsigned e = P - 2;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }
  friend GF operator/(GF a, GF b) { return a * b.inv(); }

  GF& operator+=(GF o) { return *this = *this + o; }
  GF& operator-=(GF o) { return *this = *this - o; }
  GF& operator*=(GF o) { return *this = *this * o; }
  GF& operator/=(GF o) { return *this = *this / o; }

  friend constexpr bool operator==(GF a, GF b) { return a.v_ == b.v_; }
  friend constexpr bool operator!=(GF a, GF b) { return a.v_ != b.v_; }

  std::string str() const { return std::to_string(v_); }
  friend std::ostream& operator<<(std::ostream& os, GF a) { return os << a.v_; }

 private:
  static constexpr std::uint32_t norm(long long x) {
    long long r = x % static_cast<long long>(P);
    if (r < 0) r += P;
    return static_cast<std::uint32_t>(r);
  }
  std::uint32_t v_ = 0;
};

// Arbitrary-precision rationals, always in lowest terms.
class Rat {
 public:
  Rat() = default;
  explicit Rat(long long x) : v_(x) {}
  Rat(long long num, long long den) : v_(num) {
    assert(den != 0);
    v_ /= den;
  }

  static Rat zero() { return Rat(); }
  static Rat one() { return Rat(1); }
  static constexpr unsigned characteristic() { return 0; }
  static Rat from_int(long long x) { return Rat(x); }
  static Rat parse(const std::string& s) {
    Rat r;
    r.v_ = boost::multiprecision::cpp_rational(s);
    return r;
  }

  bool is_zero() const { return v_ == 0; }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(a.v_ + b.v_); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(a.v_ - b.v_); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(a.v_ * b.v_); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    assert(!b.is_zero());
    return Rat(a.v_ / b.v_);
  }
  Rat operator-() const { return Rat(-v_); }
  Rat inv() const { return one() / *this; }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) { assert(!o.is_zero()); v_ /= o.v_; return *this; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }

  std::string str() const { return v_.str(); }
  friend std::ostream& operator<<(std::ostream& os, const Rat& a) {
    return os << a.v_;
  }

 private:
  explicit Rat(boost::multiprecision::cpp_rational v) : v_(std::move(v)) {}
  boost::multiprecision::cpp_rational v_;
};

using F2 = GF<2>;
using F3 = GF<3>;
using F5 = GF<5>;

}  // namespace opforms
