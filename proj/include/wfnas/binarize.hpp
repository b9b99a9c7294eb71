// Parameterized binarization B_M(w) = sigmoid(M w), its derivative, and the
// hard limit M -> infinity.
#ifndef WFNAS_BINARIZE_HPP
#define WFNAS_BINARIZE_HPP

#include "wfnas/types.hpp"

#include <cmath>
#include <string>

namespace wfnas {

struct BinarizationParams {
  double m_hard = 50.0;  // sharpness of the forward binarization
  double m_soft = 5.0;   // sharpness used in the gradient

  void validate() const;
};

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& w) {
  for (Index i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w(i))) {
      throw Error("binarize: non-finite weight at index " + std::to_string(i));
    }
  }
}

inline void require_positive_sharpness(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw Error("binarize: sharpness M must be positive and finite");
}

/// Logistic function without overflowing intermediates.
template <typename Scalar>
Scalar stable_sigmoid(Scalar t) {
  if (t >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-t));
  const Scalar e = std::exp(t);
  return e / (Scalar(1) + e);
}

}  // namespace detail

/// Elementwise 1 / (1 + exp(-M w_i)).
template <typename Derived>
Vector<typename Derived::Scalar> soft_binarize(const Eigen::MatrixBase<Derived>& w,
                                               typename Derived::Scalar m) {
  using Scalar = typename Derived::Scalar;
  detail::require_positive_sharpness(static_cast<double>(m));
  detail::require_finite(w);
  return w.derived().unaryExpr([m](Scalar wi) { return detail::stable_sigmoid<Scalar>(m * wi); });
}

/// Elementwise M * s * (1 - s) with s = soft_binarize(w, M); at most M/4.
template <typename Derived>
Vector<typename Derived::Scalar> soft_binarize_deriv(const Eigen::MatrixBase<Derived>& w,
                                                     typename Derived::Scalar m) {
  using Scalar = typename Derived::Scalar;
  detail::require_positive_sharpness(static_cast<double>(m));
  detail::require_finite(w);
  return w.derived().unaryExpr([m](Scalar wi) {
    const Scalar s = detail::stable_sigmoid<Scalar>(m * wi);
    return m * s * (Scalar(1) - s);
  });
}

/// B_inf: 1 where w_i >= 0 (zero maps to 1), 0 elsewhere.
template <typename Derived>
BinaryMask hard_binarize(const Eigen::MatrixBase<Derived>& w) {
  using Scalar = typename Derived::Scalar;
  detail::require_finite(w);
  BinaryMask::Bits bits =
      w.derived().unaryExpr([](Scalar wi) -> std::uint8_t { return wi >= Scalar(0) ? 1 : 0; });
  return BinaryMask(std::move(bits));
}

}  // namespace wfnas

#endif  // WFNAS_BINARIZE_HPP
