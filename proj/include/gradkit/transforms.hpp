#pragma once

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "gradkit/grid.hpp"
#include "gradkit/parallel.hpp"

// Separable 2D transforms on row-major arrays of shape (rows = v, cols = u).
//
//   dft2:     F(k,l) = sum_{u,v} f(u,v) e^{-j2pi uk/m} e^{-j2pi vl/n};  inverse carries 1/(mn).
//   sine2:    F(k,l) = sum_{u=1}^{m-1} sum_{v=1}^{n-1} f sin(pi k u/m) sin(pi l v/n), with an
//             array of (m-1) x (n-1) interior samples; inverse carries 4/(mn).
//   cosine2:  F(k,l) = sum_{u,v=0} f cos(pi k (2u+1)/(2m)) cos(pi l (2v+1)/(2n)) on half-sample
//             nodes; inverse f = 1/(mn) sum w_k w_l F cos cos with w_0 = 1, w_{k>0} = 2.
//
// The `fast` path goes through FFTs; `direct` evaluates the sums against an explicit basis.

namespace gradkit {

enum class TransformPath { fast, direct };

template <typename Scalar>
using ComplexArray = RasterArray<std::complex<Scalar>>;

namespace detail {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// Applies a 1D transform along rows (each row independently) then along columns.
template <typename In, typename Out, typename RowFn, typename ColFn>
RasterArray<Out> separable(const RasterArray<In>& f, Index out_rows, Index out_cols, RowFn&& row_fn, ColFn&& col_fn) {
  RasterArray<Out> tmp(f.rows(), out_cols);
  parallel_for(0, f.rows(), [&](Index r) {
    std::vector<In> src(f.row(r).begin(), f.row(r).end());
    const std::vector<Out> dst = row_fn(src);
    for (Index c = 0; c < out_cols; ++c) tmp(r, c) = dst[c];
  });
  RasterArray<Out> out(out_rows, out_cols);
  parallel_for(0, out_cols, [&](Index c) {
    std::vector<Out> src(tmp.rows());
    for (Index r = 0; r < tmp.rows(); ++r) src[r] = tmp(r, c);
    const std::vector<Out> dst = col_fn(src);
    for (Index r = 0; r < out_rows; ++r) out(r, c) = dst[r];
  });
  return out;
}

template <typename Scalar>
std::vector<std::complex<Scalar>> fft(const std::vector<std::complex<Scalar>>& x, bool inverse) {
  if (x.size() <= 1) return x;  // kissfft faults on length 1
  thread_local Eigen::FFT<Scalar> engine;
  std::vector<std::complex<Scalar>> y;
  if (inverse)
    engine.inv(y, x);
  else
    engine.fwd(y, x);
  return y;
}

// DST-I of length N via the odd extension of length 2(N+1).
template <typename Scalar>
std::vector<Scalar> dst1(const std::vector<Scalar>& x) {
  const std::size_t n = x.size(), len = 2 * (n + 1);
  std::vector<std::complex<Scalar>> y(len, Scalar(0));
  for (std::size_t i = 0; i < n; ++i) {
    y[i + 1] = x[i];
    y[len - 1 - i] = -x[i];
  }
  const auto yf = fft(y, false);
  std::vector<Scalar> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = -yf[k + 1].imag() / Scalar(2);
  return out;
}

// DCT-II of length m via the even extension of length 2m.
template <typename Scalar>
std::vector<Scalar> dct2(const std::vector<Scalar>& x) {
  const std::size_t m = x.size();
  std::vector<std::complex<Scalar>> y(2 * m);
  for (std::size_t i = 0; i < m; ++i) y[i] = y[2 * m - 1 - i] = x[i];
  const auto yf = fft(y, false);
  std::vector<Scalar> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Scalar ang = -std::numbers::pi_v<Scalar> * Scalar(k) / Scalar(2 * m);
    out[k] = (std::polar(Scalar(1), ang) * yf[k]).real() / Scalar(2);
  }
  return out;
}

// Exact inverse of dct2: rebuilds the spectrum of the even extension and inverts it.
template <typename Scalar>
std::vector<Scalar> idct2(const std::vector<Scalar>& c) {
  const std::size_t m = c.size();
  std::vector<std::complex<Scalar>> yf(2 * m, Scalar(0));
  for (std::size_t k = 0; k < m; ++k) {
    const Scalar ang = std::numbers::pi_v<Scalar> * Scalar(k) / Scalar(2 * m);
    yf[k] = Scalar(2) * std::polar(Scalar(1), ang) * c[k];
    if (k > 0) yf[2 * m - k] = std::conj(yf[k]);
  }
  const auto y = fft(yf, true);
  std::vector<Scalar> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = y[i].real();
  return out;
}

template <typename Scalar>
Mat<Scalar> sine_basis(Index n) {  // (n-1) x (n-1), entries sin(pi k u / n), k,u = 1..n-1
  Mat<Scalar> b(n - 1, n - 1);
  for (Index k = 1; k < n; ++k)
    for (Index u = 1; u < n; ++u) b(k - 1, u - 1) = std::sin(std::numbers::pi_v<Scalar> * Scalar(k * u) / Scalar(n));
  return b;
}

template <typename Scalar>
Mat<Scalar> cosine_basis(Index m) {  // m x m, entries cos(pi k (2u+1) / (2m))
  Mat<Scalar> b(m, m);
  for (Index k = 0; k < m; ++k)
    for (Index u = 0; u < m; ++u)
      b(k, u) = std::cos(std::numbers::pi_v<Scalar> * Scalar(k * (2 * u + 1)) / Scalar(2 * m));
  return b;
}

template <typename Scalar>
Mat<std::complex<Scalar>> fourier_basis(Index m, bool inverse) {
  Mat<std::complex<Scalar>> b(m, m);
  const Scalar sign = inverse ? Scalar(1) : Scalar(-1);
  for (Index k = 0; k < m; ++k)
    for (Index u = 0; u < m; ++u)
      b(k, u) = std::polar(Scalar(1), sign * Scalar(2) * std::numbers::pi_v<Scalar> * Scalar((k * u) % m) / Scalar(m));
  return b;
}

}  // namespace detail

template <typename Scalar>
ComplexArray<Scalar> dft2(const ComplexArray<Scalar>& f, TransformPath path = TransformPath::fast) {
  using C = std::complex<Scalar>;
  if (path == TransformPath::direct) {
    const auto bm = detail::fourier_basis<Scalar>(f.cols(), false), bn = detail::fourier_basis<Scalar>(f.rows(), false);
    return (bn * f.matrix() * bm.transpose()).array();
  }
  const auto fwd = [](const std::vector<C>& x) { return detail::fft(x, false); };
  return detail::separable<C, C>(f, f.rows(), f.cols(), fwd, fwd);
}

template <typename Scalar>
ComplexArray<Scalar> dft2(const RasterArray<Scalar>& f, TransformPath path = TransformPath::fast) {
  return dft2<Scalar>(ComplexArray<Scalar>(f.template cast<std::complex<Scalar>>()), path);
}

template <typename Scalar>
ComplexArray<Scalar> inverse_dft2(const ComplexArray<Scalar>& f, TransformPath path = TransformPath::fast) {
  using C = std::complex<Scalar>;
  if (path == TransformPath::direct) {
    const auto bm = detail::fourier_basis<Scalar>(f.cols(), true), bn = detail::fourier_basis<Scalar>(f.rows(), true);
    return (bn * f.matrix() * bm.transpose()).array() / C(Scalar(f.size()));
  }
  const auto inv = [](const std::vector<C>& x) { return detail::fft(x, true); };
  return detail::separable<C, C>(f, f.rows(), f.cols(), inv, inv);
}

/// Forward sine transform of an (m-1) x (n-1) array of interior samples.
template <typename Scalar>
RasterArray<Scalar> sine2(const RasterArray<Scalar>& f, TransformPath path = TransformPath::fast) {
  if (path == TransformPath::direct) {
    const auto bm = detail::sine_basis<Scalar>(f.cols() + 1), bn = detail::sine_basis<Scalar>(f.rows() + 1);
    return (bn * f.matrix() * bm.transpose()).array();
  }
  const auto fn = [](const std::vector<Scalar>& x) { return detail::dst1(x); };
  return detail::separable<Scalar, Scalar>(f, f.rows(), f.cols(), fn, fn);
}

template <typename Scalar>
RasterArray<Scalar> inverse_sine2(const RasterArray<Scalar>& c, TransformPath path = TransformPath::fast) {
  const Scalar scale = Scalar(4) / Scalar((c.cols() + 1) * (c.rows() + 1));
  return sine2(c, path) * scale;
}

/// Forward cosine transform on half-sample nodes of an m x n array.
template <typename Scalar>
RasterArray<Scalar> cosine2(const RasterArray<Scalar>& f, TransformPath path = TransformPath::fast) {
  if (path == TransformPath::direct) {
    const auto bm = detail::cosine_basis<Scalar>(f.cols()), bn = detail::cosine_basis<Scalar>(f.rows());
    return (bn * f.matrix() * bm.transpose()).array();
  }
  const auto fn = [](const std::vector<Scalar>& x) { return detail::dct2(x); };
  return detail::separable<Scalar, Scalar>(f, f.rows(), f.cols(), fn, fn);
}

template <typename Scalar>
RasterArray<Scalar> inverse_cosine2(const RasterArray<Scalar>& c, TransformPath path = TransformPath::fast) {
  if (path == TransformPath::direct) {
    auto weights = [](Index n) {
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Constant(n, Scalar(2));
      w[0] = Scalar(1);
      return w;
    };
    const auto bm = detail::cosine_basis<Scalar>(c.cols()), bn = detail::cosine_basis<Scalar>(c.rows());
    const auto wm = weights(c.cols()), wn = weights(c.rows());
    const detail::Mat<Scalar> weighted = wn.asDiagonal() * c.matrix() * wm.asDiagonal();
    return (bn.transpose() * weighted * bm).array() / Scalar(c.size());
  }
  const auto fn = [](const std::vector<Scalar>& x) { return detail::idct2(x); };
  return detail::separable<Scalar, Scalar>(c, c.rows(), c.cols(), fn, fn);
}

}  // namespace gradkit
