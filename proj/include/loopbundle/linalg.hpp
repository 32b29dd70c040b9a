#pragma once

// Small dense vectors/matrices over an arbitrary scalar (double or nested
// duals) and the forward-mode differentiation drivers built on them.
// Dimensions here never exceed a handful, so plain row-major storage in a
// std::vector is all we need.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "loopbundle/dual.hpp"
#include "loopbundle/errors.hpp"

namespace loopbundle {

template <class T>
using Vec = std::vector<T>;

template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0.0)) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vec<T> col(std::size_t c) const {
    Vec<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }
  void set_col(std::size_t c, const Vec<T>& v) {
    assert(v.size() == rows_);
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
  }

  friend Mat operator*(const Mat& a, const Mat& b) {
    assert(a.cols_ == b.rows_);
    Mat out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
    return out;
  }
  friend Vec<T> operator*(const Mat& a, const Vec<T>& x) {
    assert(a.cols_ == x.size());
    Vec<T> out(a.rows_, T(0.0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) out[i] += a(i, k) * x[k];
    return out;
  }
  friend Mat operator+(Mat a, const Mat& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Mat operator-(Mat a, const Mat& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// ---------------------------------------------------------------------------
// Vector helpers

template <class T>
Vec<T> operator+(Vec<T> a, const Vec<T>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
template <class T>
Vec<T> operator-(Vec<T> a, const Vec<T>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
template <class T>
Vec<T> scaled(Vec<T> a, double s) {
  for (auto& x : a) x = x * s;
  return a;
}

template <class T, class U>
Vec<T> lift_vec(const Vec<U>& u) {
  Vec<T> out;
  out.reserve(u.size());
  for (const auto& x : u) out.push_back(lift<T>(x));
  return out;
}

template <class T>
Vec<double> primal_vec(const Vec<T>& v) {
  Vec<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(primal(x));
  return out;
}

template <class T>
Mat<double> primal_mat(const Mat<T>& m) {
  Mat<double> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = primal(m(i, j));
  return out;
}

template <class T, class U>
Mat<T> lift_mat(const Mat<U>& m) {
  Mat<T> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = lift<T>(m(i, j));
  return out;
}

inline double max_abs(const Vec<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
inline double max_abs(const Mat<double>& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}
inline double norm2(const Vec<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}
inline Vec<double> unit_vector(std::size_t n, std::size_t i) {
  Vec<double> e(n, 0.0);
  e[i] = 1.0;
  return e;
}

// ---------------------------------------------------------------------------
// LU with partial pivoting. Pivot selection uses the innermost value so the
// same elimination order is replayed on every derivative component.

template <class T>
class LU {
 public:
  explicit LU(Mat<T> a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const std::size_t n = lu_.rows();
    assert(n == lu_.cols());
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(primal(lu_(i, j))));
    if (scale == 0.0) scale = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::abs(primal(lu_(k, k)));
      for (std::size_t i = k + 1; i < n; ++i) {
        double v = std::abs(primal(lu_(i, k)));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      min_pivot_ = (k == 0) ? best / scale : std::min(min_pivot_, best / scale);
      if (best <= 1e-14 * scale) {
        singular_ = true;
        return;
      }
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        T f = lu_(i, k) / lu_(k, k);
        lu_(i, k) = f;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  bool singular() const { return singular_; }
  /// Smallest pivot relative to the largest input entry.
  double min_relative_pivot() const { return min_pivot_; }

  Vec<T> solve(const Vec<T>& b) const {
    if (singular_) throw LoopError(ErrorKind::SingularFrame, "matrix is singular");
    const std::size_t n = lu_.rows();
    Vec<T> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
      for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu_(ii, j) * x[j];
      x[ii] = x[ii] / lu_(ii, ii);
    }
    return x;
  }

  Mat<T> inverse() const {
    const std::size_t n = lu_.rows();
    Mat<T> inv(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      Vec<T> e(n, T(0.0));
      e[c] = T(1.0);
      inv.set_col(c, solve(e));
    }
    return inv;
  }

  T determinant() const {
    if (singular_) return T(0.0);
    const std::size_t n = lu_.rows();
    T d(1.0);
    for (std::size_t i = 0; i < n; ++i) d = d * lu_(i, i);
    std::size_t swaps = 0;
    std::vector<std::size_t> p = perm_;
    for (std::size_t i = 0; i < n; ++i) {
      while (p[i] != i) {
        std::swap(p[i], p[p[i]]);
        ++swaps;
      }
    }
    return (swaps % 2 == 0) ? d : -d;
  }

 private:
  Mat<T> lu_;
  std::vector<std::size_t> perm_;
  bool singular_ = false;
  double min_pivot_ = 0.0;
};

template <class T>
Mat<T> inverse(const Mat<T>& a) {
  return LU<T>(a).inverse();
}

/// 1-norm condition number estimate (exact for the small matrices used here).
inline double condition_number(const Mat<double>& a) {
  LU<double> lu(a);
  if (lu.singular()) return INFINITY;
  Mat<double> inv = lu.inverse();
  auto norm1 = [](const Mat<double>& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
      best = std::max(best, s);
    }
    return best;
  };
  return norm1(a) * norm1(inv);
}

// ---------------------------------------------------------------------------
// Differentiation drivers. `f` must be a generic callable accepting Vec<S>
// for any scalar S and returning Vec<S> (or S for the scalar variants).

/// Value of f at x and its Jacobian, one forward pass per input direction.
template <class T, class F>
Mat<T> jacobian(F&& f, const Vec<T>& x) {
  using DT = Dual<T>;
  const std::size_t n = x.size();
  Mat<T> jac;
  for (std::size_t k = 0; k < n; ++k) {
    Vec<DT> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = DT(x[i], T(i == k ? 1.0 : 0.0));
    Vec<DT> y = f(xs);
    if (k == 0) jac = Mat<T>(y.size(), n);
    for (std::size_t r = 0; r < y.size(); ++r) jac(r, k) = y[r].d;
  }
  return jac;
}

/// Directional derivative of f at x along dir.
template <class T, class F>
Vec<T> directional(F&& f, const Vec<T>& x, const Vec<T>& dir) {
  using DT = Dual<T>;
  Vec<DT> xs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xs[i] = DT(x[i], dir[i]);
  Vec<DT> y = f(xs);
  Vec<T> out(y.size());
  for (std::size_t r = 0; r < y.size(); ++r) out[r] = y[r].d;
  return out;
}

/// Extract value and derivative parts of a dual-valued matrix.
template <class T>
Mat<T> value_part(const Mat<Dual<T>>& m) {
  Mat<T> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).v;
  return out;
}
template <class T>
Mat<T> derivative_part(const Mat<Dual<T>>& m) {
  Mat<T> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).d;
  return out;
}

}  // namespace loopbundle
