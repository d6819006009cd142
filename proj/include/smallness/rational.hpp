#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace smallness {

// Exact rational arithmetic everywhere; doubles appear only in reports.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// x^e for integer e (negative e inverts; x must be nonzero then).
inline Rat pow_rat(const Rat& x, long e) {
  if (e < 0) {
    if (x == 0) throw std::domain_error("pow_rat: 0 to negative power");
    Rat inv = 1 / x;
    return pow_rat(inv, -e);
  }
  Rat num, den;
  mpz_pow_ui(num.get_num_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(num.get_den_mpz_t(), x.get_den_mpz_t(), static_cast<unsigned long>(e));
  return num;
}

inline Rat pow2(long e) {  // 2^e, e may be negative
  Rat r = 1;
  if (e >= 0)
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
  else
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
  return r;
}

inline Int rat_floor(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

inline Int rat_ceil(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

inline Int binom(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return b;
}

// Directed rational stand-ins for e. Use the upper value where a quantity
// feeds an upper bound that must dominate, the lower value where e sits in a
// denominator of a bound we must not understate (see use sites).
inline const Rat& e_upper() {
  static const Rat v = rat(Int("271828182845905"), Int("100000000000000"));
  return v;
}

inline const Rat& e_lower() {
  static const Rat v = rat(Int("271828182845904"), Int("100000000000000"));
  return v;
}

// Rational upper bound on 2e, used for the J > 2e guard.
inline const Rat& two_e_upper() {
  static const Rat v = rat(543657, 100000);
  return v;
}

// Parses "num/den", a plain integer, or a decimal like "0.25" (exact).
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Int num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    return rat(num, den);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rat(Int(s));
  std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
  bool neg = !whole.empty() && whole[0] == '-';
  if (whole.empty() || whole == "-" || whole == "+") whole += "0";
  for (char c : frac)
    if (c < '0' || c > '9') throw std::invalid_argument("bad decimal: " + s);
  Int den = 1;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  Int num = Int(whole) * den;
  Int fpart = frac.empty() ? Int(0) : Int(frac);
  num += neg ? -fpart : fpart;
  return rat(num, den);
}

inline std::string rat_str(const Rat& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline double rat_approx(const Rat& x) { return x.get_d(); }

}  // namespace smallness
