#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "sympfactor/core.hpp"
#include "sympfactor/rational.hpp"

namespace sympfactor {

/// Registry of polynomial variables.  Coordinate variables carry a
/// (level, row, column) key with 1-based level and 0-based canonical pair
/// row <= column; free parameters carry only a name.  Creation order fixes
/// the monomial order's variable precedence.
class VarPool {
 public:
  std::uint32_t z(int k, int i, int j) {
    if (i > j) std::swap(i, j);
    auto key = std::make_tuple(k, i, j);
    auto it = zvars_.find(key);
    if (it != zvars_.end()) return it->second;
    std::uint32_t id = add("z" + std::to_string(k) + "_" + std::to_string(i + 1) +
                               std::to_string(j + 1),
                           k, i, j);
    zvars_.emplace(key, id);
    return id;
  }

  std::uint32_t param(const std::string& name) {
    auto it = params_.find(name);
    if (it != params_.end()) return it->second;
    std::uint32_t id = add(name, -1, -1, -1);
    params_.emplace(name, id);
    return id;
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(std::uint32_t id) const { return names_[id]; }
  bool is_coordinate(std::uint32_t id) const { return levels_[id] >= 0; }
  /// (level, row, column) of a coordinate variable
  std::tuple<int, int, int> coordinate(std::uint32_t id) const {
    return {levels_[id], rows_[id], cols_[id]};
  }

 private:
  std::uint32_t add(std::string name, int k, int i, int j) {
    names_.push_back(std::move(name));
    levels_.push_back(k);
    rows_.push_back(i);
    cols_.push_back(j);
    return static_cast<std::uint32_t>(names_.size() - 1);
  }
  std::vector<std::string> names_;
  std::vector<int> levels_, rows_, cols_;
  std::map<std::tuple<int, int, int>, std::uint32_t> zvars_;
  std::map<std::string, std::uint32_t> params_;
};

/// Power product with sparse positive exponents, kept sorted by variable id.
struct Monomial {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> powers;

  static Monomial one() { return {}; }
  static Monomial var(std::uint32_t id, std::uint32_t exp = 1) {
    Monomial m;
    if (exp > 0) m.powers.emplace_back(id, exp);
    return m;
  }
  bool is_one() const { return powers.empty(); }
  int total_degree() const {
    int d = 0;
    for (auto& [v, e] : powers) d += static_cast<int>(e);
    return d;
  }
  int degree_in(std::uint32_t id) const {
    for (auto& [v, e] : powers)
      if (v == id) return static_cast<int>(e);
    return 0;
  }

  Monomial times(const Monomial& o) const {
    Monomial r;
    r.powers.reserve(powers.size() + o.powers.size());
    size_t a = 0, b = 0;
    while (a < powers.size() || b < o.powers.size()) {
      if (b >= o.powers.size() || (a < powers.size() && powers[a].first < o.powers[b].first))
        r.powers.push_back(powers[a++]);
      else if (a >= powers.size() || o.powers[b].first < powers[a].first)
        r.powers.push_back(o.powers[b++]);
      else {
        r.powers.emplace_back(powers[a].first, powers[a].second + o.powers[b].second);
        ++a;
        ++b;
      }
    }
    return r;
  }

  std::optional<Monomial> divided_by(const Monomial& o) const {
    Monomial r;
    size_t a = 0;
    for (auto& [v, e] : o.powers) {
      while (a < powers.size() && powers[a].first < v) r.powers.push_back(powers[a++]);
      if (a >= powers.size() || powers[a].first != v || powers[a].second < e)
        return std::nullopt;
      if (powers[a].second > e) r.powers.emplace_back(v, powers[a].second - e);
      ++a;
    }
    while (a < powers.size()) r.powers.push_back(powers[a++]);
    return r;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.powers == b.powers; }
};

/// Graded lexicographic order: total degree first, then the first variable
/// (in id order) whose exponent differs decides, higher exponent larger.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    size_t i = 0, j = 0;
    while (i < a.powers.size() && j < b.powers.size()) {
      if (a.powers[i].first != b.powers[j].first)
        // the one owning the smaller variable id has a positive exponent
        // where the other has zero, making it lexicographically larger
        return a.powers[i].first > b.powers[j].first;
      if (a.powers[i].second != b.powers[j].second)
        return a.powers[i].second < b.powers[j].second;
      ++i;
      ++j;
    }
    // with equal total degree both lists exhaust together; a leftover means
    // the other side is lexicographically smaller
    return j < b.powers.size();
  }
};

/// Sparse multivariate polynomial over the Gaussian rationals.  Terms live
/// in a canonically ordered map with no zero coefficients stored.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, GaussianRational, MonomialLess>;

  Polynomial() = default;
  static Polynomial constant(GaussianRational c) {
    Polynomial p;
    if (!c.is_zero()) p.terms_.emplace(Monomial::one(), std::move(c));
    return p;
  }
  static Polynomial variable(std::uint32_t id) {
    Polynomial p;
    p.terms_.emplace(Monomial::var(id), GaussianRational(1));
    return p;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int term_count() const { return static_cast<int>(terms_.size()); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
  }
  GaussianRational constant_value() const {
    auto it = terms_.find(Monomial::one());
    return it == terms_.end() ? GaussianRational(0) : it->second;
  }

  int total_degree() const {
    return terms_.empty() ? -1 : terms_.rbegin()->first.total_degree();
  }
  int degree_in(std::uint32_t id) const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.degree_in(id));
    return d;
  }
  /// joint degree in a set of variables
  int degree_in_set(const std::set<std::uint32_t>& ids) const {
    int d = 0;
    for (auto& [m, c] : terms_) {
      int s = 0;
      for (auto& [v, e] : m.powers)
        if (ids.count(v)) s += static_cast<int>(e);
      d = std::max(d, s);
    }
    return d;
  }
  bool depends_on(std::uint32_t id) const { return degree_in(id) > 0; }

  void add_term(const Monomial& m, const GaussianRational& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
  }
  friend Polynomial operator-(const Polynomial& a) {
    Polynomial r;
    for (auto& [m, c] : a.terms_) r.terms_.emplace(m, -c);
    return r;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    if (a.terms_.empty() || b.terms_.empty()) return r;
    std::vector<std::pair<Monomial, GaussianRational>> products;
    products.reserve(a.terms_.size() * b.terms_.size());
    for (auto& [ma, ca] : a.terms_)
      for (auto& [mb, cb] : b.terms_) products.emplace_back(ma.times(mb), ca * cb);
    MonomialLess less;
    std::sort(products.begin(), products.end(),
              [&](const auto& x, const auto& y) { return less(x.first, y.first); });
    for (size_t i = 0; i < products.size();) {
      Monomial key = std::move(products[i].first);
      GaussianRational sum = std::move(products[i].second);
      size_t j = i + 1;
      while (j < products.size() && products[j].first == key) {
        sum += products[j].second;
        ++j;
      }
      if (!sum.is_zero()) r.terms_.emplace_hint(r.terms_.end(), std::move(key), std::move(sum));
      i = j;
    }
    return r;
  }
  friend Polynomial operator*(const GaussianRational& c, const Polynomial& a) {
    Polynomial r;
    if (c.is_zero()) return r;
    for (auto& [m, k] : a.terms_) r.terms_.emplace(m, c * k);
    return r;
  }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.terms_ == b.terms_;
  }

  Polynomial derivative(std::uint32_t id) const {
    Polynomial r;
    for (auto& [m, c] : terms_) {
      int e = m.degree_in(id);
      if (e == 0) continue;
      Monomial reduced;
      for (auto& [v, k] : m.powers) {
        if (v == id) {
          if (k > 1) reduced.powers.emplace_back(v, k - 1);
        } else {
          reduced.powers.emplace_back(v, k);
        }
      }
      r.add_term(reduced, GaussianRational(e) * c);
    }
    return r;
  }

  /// Exact multivariate division by a single divisor; nullopt when any
  /// reduction step leaves an indivisible leading term (nonzero remainder).
  static std::optional<Polynomial> divide_exact(const Polynomial& f, const Polynomial& g) {
    if (g.is_zero()) return std::nullopt;
    Polynomial q, rem = f;
    const auto& glead = *g.terms_.rbegin();
    while (!rem.is_zero()) {
      const auto& lead = *rem.terms_.rbegin();
      auto quot_m = lead.first.divided_by(glead.first);
      if (!quot_m) return std::nullopt;
      GaussianRational quot_c = lead.second / glead.second;
      Polynomial step;
      step.terms_.emplace(*quot_m, quot_c);
      q += step;
      rem -= step * g;
    }
    return q;
  }

  /// Evaluation over any commutative ring with from-GaussianRational
  /// conversion; `values` is indexed by variable id.
  template <class Value, class FromCoeff>
  Value evaluate(const std::vector<Value>& values, FromCoeff&& conv) const {
    Value acc = conv(GaussianRational(0));
    for (auto& [m, c] : terms_) {
      Value t = conv(c);
      for (auto& [v, e] : m.powers)
        for (std::uint32_t k = 0; k < e; ++k) t = t * values[v];
      acc = acc + t;
    }
    return acc;
  }
  cdouble eval_complex(const std::vector<cdouble>& values) const {
    return evaluate<cdouble>(values, [](const GaussianRational& c) { return c.to_complex(); });
  }
  GaussianRational eval_exact(const std::vector<GaussianRational>& values) const {
    return evaluate<GaussianRational>(values, [](const GaussianRational& c) { return c; });
  }

  /// Substitutes exact values for a subset of variables (id -> value);
  /// remaining variables stay symbolic.
  Polynomial substitute(const std::map<std::uint32_t, GaussianRational>& values) const {
    Polynomial r;
    for (auto& [m, c] : terms_) {
      GaussianRational coeff = c;
      Monomial keep;
      for (auto& [v, e] : m.powers) {
        auto it = values.find(v);
        if (it == values.end()) {
          keep.powers.emplace_back(v, e);
        } else {
          for (std::uint32_t k = 0; k < e; ++k) coeff *= it->second;
        }
      }
      r.add_term(keep, coeff);
    }
    return r;
  }

  std::set<std::uint32_t> variables() const {
    std::set<std::uint32_t> out;
    for (auto& [m, c] : terms_)
      for (auto& [v, e] : m.powers) out.insert(v);
    return out;
  }

  std::string to_string(const VarPool& pool) const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!s.empty()) s += " + ";
      s += it->second.to_string();
      for (auto& [v, e] : it->first.powers) {
        s += "*" + pool.name(v);
        if (e > 1) s += "^" + std::to_string(e);
      }
    }
    return s;
  }

 private:
  TermMap terms_;
};

}  // namespace sympfactor
