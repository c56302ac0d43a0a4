#include "bivar.hpp"

#include <algorithm>
#include <sstream>

namespace heckeops {

BiPoly BiPoly::monomial(int da, int db, const Rat& c) {
  if (da < 0 || db < 0) fail(ErrorCode::invalid_argument, "negative exponent in monomial");
  BiPoly r;
  if (c != 0) r.t_[{da, db}] = c;
  return r;
}

Rat BiPoly::coeff(int da, int db) const {
  auto it = t_.find({da, db});
  return it == t_.end() ? Rat(0) : it->second;
}

void BiPoly::prune() {
  for (auto it = t_.begin(); it != t_.end();) {
    if (it->second == 0) it = t_.erase(it);
    else ++it;
  }
}

BiPoly BiPoly::operator-() const {
  BiPoly r(*this);
  for (auto& [k, c] : r.t_) c = -c;
  return r;
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
  BiPoly r(*this);
  for (const auto& [k, c] : o.t_) r.t_[k] += c;
  r.prune();
  return r;
}

BiPoly BiPoly::operator-(const BiPoly& o) const {
  BiPoly r(*this);
  for (const auto& [k, c] : o.t_) r.t_[k] -= c;
  r.prune();
  return r;
}

BiPoly BiPoly::operator*(const BiPoly& o) const {
  BiPoly r;
  for (const auto& [ka, ca] : t_)
    for (const auto& [kb, cb] : o.t_)
      r.t_[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
  r.prune();
  return r;
}

BiPoly BiPoly::scale(const Rat& s) const {
  if (s == 0) return BiPoly();
  BiPoly r(*this);
  for (auto& [k, c] : r.t_) c *= s;
  return r;
}

BiPoly BiPoly::pow(int e) const {
  if (e < 0) fail(ErrorCode::invalid_argument, "negative polynomial power");
  BiPoly r = constant(1);
  BiPoly b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

Rat BiPoly::eval(const Rat& a, const Rat& b) const {
  Rat acc = 0;
  for (const auto& [k, c] : t_) acc += c * pow_rat(a, k.first) * pow_rat(b, k.second);
  return acc;
}

std::vector<Rat> BiPoly::eval_b(const Rat& b) const {
  int da_max = -1;
  for (const auto& [k, c] : t_) da_max = std::max(da_max, k.first);
  std::vector<Rat> out(static_cast<size_t>(da_max + 1));
  for (const auto& [k, c] : t_)
    out[static_cast<size_t>(k.first)] += c * pow_rat(b, k.second);
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

BiPoly BiPoly::reduced_mod(const Int& p) const {
  BiPoly r;
  for (const auto& [k, c] : t_) {
    if (den(c) != 1) fail(ErrorCode::invalid_argument, "mod-p reduction of a non-integer");
    Int v = mod_positive(num(c), p);
    if (v != 0) r.t_[k] = Rat(v);
  }
  return r;
}

bool BiPoly::weighted_homogeneous(long wa, long wb, long* weight) const {
  bool have = false;
  long w = 0;
  for (const auto& [k, c] : t_) {
    long cur = wa * k.first + wb * k.second;
    if (!have) {
      w = cur;
      have = true;
    } else if (cur != w) {
      return false;
    }
  }
  if (weight && have) *weight = w;
  return true;
}

int BiPoly::b_divisibility() const {
  int k = -1;
  for (const auto& [key, c] : t_) k = (k < 0) ? key.second : std::min(k, key.second);
  return k < 0 ? 0 : k;
}

BiPoly BiPoly::div_b_power(int k) const {
  if (k == 0) return *this;
  BiPoly r;
  for (const auto& [key, c] : t_) {
    if (key.second < k) fail(ErrorCode::invalid_argument, "inexact division by B power");
    r.t_[{key.first, key.second - k}] = c;
  }
  return r;
}

std::string BiPoly::to_string(const std::string& va, const std::string& vb) const {
  if (t_.empty()) return "0";
  // Descending A-degree, then descending B-degree.
  std::vector<std::pair<Key, Rat>> items(t_.begin(), t_.end());
  std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
    if (x.first.first != y.first.first) return x.first.first > y.first.first;
    return x.first.second > y.first.second;
  });
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, c] : items) {
    bool neg = c < 0;
    Rat mag = neg ? Rat(-c) : c;
    if (first) {
      if (neg) out << "-";
      first = false;
    } else {
      out << (neg ? " - " : " + ");
    }
    bool has_var = k.first > 0 || k.second > 0;
    if (!has_var || mag != 1) {
      if (den(mag) == 1) out << mag;
      else out << "(" << mag << ")";
      if (has_var) out << "*";
    }
    if (k.first > 0) {
      out << va;
      if (k.first > 1) out << "^" << k.first;
      if (k.second > 0) out << "*";
    }
    if (k.second > 0) {
      out << vb;
      if (k.second > 1) out << "^" << k.second;
    }
  }
  return out.str();
}

}  // namespace heckeops
