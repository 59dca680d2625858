#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ccnet {

/// Exact rational on int64 with overflow-checked arithmetic. Rate and memory
/// identities are asserted as equalities, so no floating point is allowed
/// anywhere in the bound/rate computations.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(checked(__int128(a.num_) * b.den_ + __int128(b.num_) * a.den_),
                    checked(__int128(a.den_) * b.den_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return a + Rational(-b.num_, b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    // cross-reduce first to keep intermediates small
    const std::int64_t g1 = std::gcd(a.num_ < 0 ? -a.num_ : a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_ < 0 ? -b.num_ : b.num_, a.den_);
    return Rational(checked(__int128(a.num_ / (g1 ? g1 : 1)) * (b.num_ / (g2 ? g2 : 1))),
                    checked(__int128(a.den_ / (g2 ? g2 : 1)) * (b.den_ / (g1 ? g1 : 1))));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return a * Rational(b.den_, b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }

  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return __int128(a.num_) * b.den_ < __int128(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  bool is_integer() const { return den_ == 1; }

  /// Floor toward negative infinity.
  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  double to_double() const { return double(num_) / double(den_); }

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Decimal rendering, exact when it terminates, else rounded half-up.
  std::string to_decimal(int precision = 6) const {
    std::int64_t n = num_;
    std::string sign;
    if (n < 0) {
      sign = "-";
      n = -n;
    }
    std::string out = sign + std::to_string(n / den_);
    __int128 rem = n % den_;
    if (rem == 0) return out;
    std::string frac;
    for (int i = 0; i < precision && rem != 0; ++i) {
      rem *= 10;
      frac.push_back(char('0' + int(rem / den_)));
      rem %= den_;
    }
    if (rem != 0) {
      // round last digit half-up
      if (rem * 2 >= den_) {
        int i = int(frac.size()) - 1;
        while (i >= 0 && frac[std::size_t(i)] == '9') frac[std::size_t(i--)] = '0';
        if (i >= 0)
          ++frac[std::size_t(i)];
        else
          out = sign + std::to_string(n / den_ + 1);
      }
    } else {
      while (!frac.empty() && frac.back() == '0') frac.pop_back();
    }
    if (frac.empty()) return out;
    return out + "." + frac;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

  /// Parses "a", "a/b", or a plain decimal like "2.5".
  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      const std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
      std::int64_t den = 1;
      for (std::size_t i = 0; i < fp.size(); ++i) den = checked(__int128(den) * 10);
      std::int64_t num = std::stoll(ip.empty() || ip == "-" ? ip + "0" : ip) * den;
      std::int64_t f = fp.empty() ? 0 : std::stoll(fp);
      num = (s[0] == '-') ? num - f : num + f;
      return Rational(num, den);
    }
    return Rational(std::stoll(s));
  }

 private:
  static std::int64_t checked(__int128 v) {
    if (v > std::int64_t(0x7fffffffffffffffLL) || v < -std::int64_t(0x7fffffffffffffffLL) - 1)
      throw std::overflow_error("Rational: int64 overflow");
    return std::int64_t(v);
  }

  void normalize() {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace ccnet
