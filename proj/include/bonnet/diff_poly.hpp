#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bonnet/series.hpp"

namespace bonnet {

/// Polynomial in u, u', u'', ... whose coefficients are truncated series in the
/// independent variable.  A term is keyed by its exponent vector: key[k] is the
/// power of the k-th derivative.
template <class Scalar>
class DifferentialPolynomial {
 public:
  using SeriesT = TruncatedSeries<Scalar>;
  using Exponents = std::vector<int>;

  DifferentialPolynomial() = default;

  /// coefficient * u^{e0} u'^{e1} ...
  static DifferentialPolynomial term(const SeriesT& coefficient, Exponents exponents) {
    DifferentialPolynomial p;
    p.add_term(std::move(exponents), coefficient);
    return p;
  }

  /// The bare unknown differentiated `k` times.
  static DifferentialPolynomial derivative_of_unknown(int k, int window = kDefaultSeriesWindow,
                                                      const std::string& tag = "chi") {
    Exponents e(static_cast<std::size_t>(k + 1), 0);
    e[static_cast<std::size_t>(k)] = 1;
    return term(SeriesT::constant(Scalar(1), window, tag), std::move(e));
  }

  static DifferentialPolynomial constant(const SeriesT& c) { return term(c, {}); }

  const std::map<Exponents, SeriesT>& terms() const { return terms_; }

  /// Highest derivative order that appears.
  int differential_order() const {
    int order = -1;
    for (const auto& [e, c] : terms_) order = std::max(order, static_cast<int>(e.size()) - 1);
    return order;
  }

  friend DifferentialPolynomial operator+(DifferentialPolynomial lhs,
                                          const DifferentialPolynomial& rhs) {
    for (const auto& [e, c] : rhs.terms_) lhs.add_term(e, c);
    return lhs;
  }

  friend DifferentialPolynomial operator-(DifferentialPolynomial lhs,
                                          const DifferentialPolynomial& rhs) {
    for (const auto& [e, c] : rhs.terms_) lhs.add_term(e, -c);
    return lhs;
  }

  friend DifferentialPolynomial operator*(const DifferentialPolynomial& lhs,
                                          const DifferentialPolynomial& rhs) {
    DifferentialPolynomial out;
    for (const auto& [el, cl] : lhs.terms_) {
      for (const auto& [er, cr] : rhs.terms_) {
        Exponents e(std::max(el.size(), er.size()), 0);
        for (std::size_t k = 0; k < el.size(); ++k) e[k] += el[k];
        for (std::size_t k = 0; k < er.size(); ++k) e[k] += er[k];
        out.add_term(std::move(e), cl * cr);
      }
    }
    return out;
  }

  friend DifferentialPolynomial operator*(const SeriesT& s, DifferentialPolynomial p) {
    std::map<Exponents, SeriesT> scaled;
    for (auto& [e, c] : p.terms_) scaled.emplace(e, s * c);
    p.terms_ = std::move(scaled);
    return p;
  }

  friend DifferentialPolynomial operator*(const Scalar& k, DifferentialPolynomial p) {
    for (auto& [e, c] : p.terms_) c *= k;
    return p;
  }

  /// Total derivative d/dx, treating u^(k) -> u^(k+1).
  DifferentialPolynomial derivative() const {
    DifferentialPolynomial out;
    for (const auto& [e, c] : terms_) {
      out.add_term(e, diff(c));
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k] == 0) continue;
        Exponents next = e;
        next[k] -= 1;
        if (next.size() < k + 2) next.resize(k + 2, 0);
        next[k + 1] += 1;
        out.add_term(std::move(next), Scalar(e[k]) * c);
      }
    }
    return out;
  }

  /// Partial derivative with respect to u^(k).
  DifferentialPolynomial partial(int k) const {
    DifferentialPolynomial out;
    const auto idx = static_cast<std::size_t>(k);
    for (const auto& [e, c] : terms_) {
      if (idx >= e.size() || e[idx] == 0) continue;
      Exponents next = e;
      next[idx] -= 1;
      out.add_term(std::move(next), Scalar(e[idx]) * c);
    }
    return out;
  }

  /// Substitutes a series for u.
  SeriesT evaluate(const SeriesT& u) const {
    const int max_order = std::max(differential_order(), 0);
    std::vector<SeriesT> derivatives{u};
    for (int k = 1; k <= max_order; ++k) derivatives.push_back(diff(derivatives.back()));
    SeriesT total;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      SeriesT value = c;
      for (std::size_t k = 0; k < e.size(); ++k) {
        for (int p = 0; p < e[k]; ++p) value = value * derivatives[k];
      }
      total = first ? value : total + value;
      first = false;
    }
    if (first) return SeriesT::zero(kExactOrder, u.tag());
    return total;
  }

 private:
  void add_term(Exponents e, const SeriesT& c) {
    while (!e.empty() && e.back() == 0) e.pop_back();
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(std::move(e), c);
    } else {
      it->second = it->second + c;
    }
  }

  std::map<Exponents, SeriesT> terms_;
};

using DiffPolynomial = DifferentialPolynomial<Rational>;

}  // namespace bonnet
