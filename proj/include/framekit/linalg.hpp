#ifndef FRAMEKIT_LINALG_HPP
#define FRAMEKIT_LINALG_HPP

// Small dense linear algebra: a row-major matrix, vector helpers and a
// cyclic Jacobi eigensolver for symmetric matrices. Sized for desk-scale
// problems (dimensions up to a few hundred).

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "framekit/error.hpp"

namespace framekit {

using Vector = std::vector<double>;

template <typename T>
class BasicMatrix {
 public:
  using value_type = T;

  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  const T& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<T> column(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  BasicMatrix transpose() const {
    BasicMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Matrix = BasicMatrix<double>;

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
  assert(a.size() == b.size());
  return std::inner_product(a.begin(), a.end(), b.begin(), T{});
}

inline double dot(const Vector& a, const Vector& b) {
  return dot<double>(std::span<const double>(a), std::span<const double>(b));
}

template <typename T>
T norm2(std::span<const T> a) {
  return std::sqrt(dot(a, a));
}

inline double norm2(const Vector& a) {
  return norm2<double>(std::span<const double>(a));
}

template <typename T>
T frobenius_norm(const BasicMatrix<T>& a) {
  return norm2<T>(a.data());
}

/// Largest absolute entry of a - b.
template <typename T>
T max_abs_diff(const BasicMatrix<T>& a, const BasicMatrix<T>& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  T worst{};
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i)
    worst = std::max(worst, std::abs(da[i] - db[i]));
  return worst;
}

template <typename T>
BasicMatrix<T> multiply(const BasicMatrix<T>& a, const BasicMatrix<T>& b) {
  assert(a.cols() == b.rows());
  BasicMatrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

/// Aᵀ A for an arbitrary rectangular A.
template <typename T>
BasicMatrix<T> gram(const BasicMatrix<T>& a) {
  const std::size_t n = a.cols();
  BasicMatrix<T> g(n, n);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto row = a.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      const T ri = row[i];
      if (ri == T{}) continue;
      for (std::size_t j = i; j < n; ++j) g(i, j) += ri * row[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

template <typename T>
std::vector<T> apply(const BasicMatrix<T>& a, std::span<const T> x) {
  assert(a.cols() == x.size());
  std::vector<T> y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = dot<T>(a.row(r), x);
  return y;
}

/// Eigen-decomposition of a symmetric matrix. Eigenvalues are sorted in
/// descending order; column k of `vectors` is the unit eigenvector for
/// values[k].
template <typename T>
struct SymmetricEigen {
  std::vector<T> values;
  BasicMatrix<T> vectors;
  int sweeps = 0;
};

struct JacobiOptions {
  double relative_threshold = 1e-13;  // off-diagonal Frobenius / ‖S‖_F
  int max_sweeps = 100;
  bool want_vectors = true;
};

/// Cyclic Jacobi rotations. Stops when the off-diagonal Frobenius norm
/// drops below relative_threshold * ‖S‖_F.
template <typename T>
SymmetricEigen<T> jacobi_eigen(BasicMatrix<T> a, const JacobiOptions& opt = {}) {
  if (a.rows() != a.cols())
    throw precondition_error("jacobi_eigen: matrix is not square");
  const std::size_t n = a.rows();
  SymmetricEigen<T> out;
  BasicMatrix<T> v = opt.want_vectors ? BasicMatrix<T>::identity(n)
                                      : BasicMatrix<T>{};

  const T scale = frobenius_norm(a);
  const T threshold = static_cast<T>(opt.relative_threshold) * scale;

  auto off_norm = [&] {
    T s{};
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += 2 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (scale > T{} && off_norm() > threshold) {
    if (sweep == opt.max_sweeps)
      throw numerical_error("jacobi_eigen: no convergence within sweep limit");
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const T apq = a(p, q);
        if (apq == T{}) continue;
        const T theta = (a(q, q) - a(p, p)) / (2 * apq);
        T t;
        if (std::abs(theta) > T{1e150}) {
          t = 1 / (2 * theta);
        } else {
          t = (theta >= T{} ? T{1} : T{-1}) /
              (std::abs(theta) + std::sqrt(theta * theta + 1));
        }
        const T c = 1 / std::sqrt(t * t + 1);
        const T s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const T akp = a(k, p);
          const T akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = T{};
        if (opt.want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const T vkp = v(k, p);
            const T vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  out.values.resize(n);
  if (opt.want_vectors) out.vectors = BasicMatrix<T>(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    if (opt.want_vectors)
      for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  out.sweeps = sweep;
  return out;
}

/// Eigen-decomposition of a positive semidefinite matrix. Slightly negative
/// eigenvalues (≥ -1e-8·‖S‖_F) are clipped to zero; anything more negative
/// is reported as a numerical failure.
template <typename T>
SymmetricEigen<T> psd_eigen(BasicMatrix<T> a, const JacobiOptions& opt = {}) {
  const T scale = frobenius_norm(a);
  auto eig = jacobi_eigen(std::move(a), opt);
  for (auto& lambda : eig.values) {
    if (lambda >= T{}) continue;
    if (lambda < -T{1e-8} * scale)
      throw numerical_error("psd_eigen: matrix has a significantly negative eigenvalue");
    lambda = T{};
  }
  return eig;
}

/// Largest eigenvalue of a positive semidefinite matrix.
template <typename T>
T psd_top_eigenvalue(const BasicMatrix<T>& a) {
  if (a.rows() == 0) return T{};
  if (a.rows() == 1) return std::max(T{}, a(0, 0));
  JacobiOptions opt;
  opt.want_vectors = false;
  return psd_eigen(a, opt).values.front();
}

}  // namespace framekit

#endif  // FRAMEKIT_LINALG_HPP
