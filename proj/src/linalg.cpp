#include "hgf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "hgf/errors.hpp"

namespace hgf {

Vec::Vec(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw InvalidInput("Vec dimension must be in 1..3");
}

Vec::Vec(std::initializer_list<double> xs) : dim_(static_cast<int>(xs.size())) {
  if (dim_ < 1 || dim_ > kMaxDim) throw InvalidInput("Vec dimension must be in 1..3");
  std::copy(xs.begin(), xs.end(), c_.begin());
}

Vec Vec::filled(int dim, double value) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = value;
  return v;
}

double Vec::norm_inf() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs((*this)[i]));
  return m;
}

double Vec::norm_sq() const { return dot(*this, *this); }

bool Vec::all_finite() const {
  for (int i = 0; i < dim_; ++i)
    if (!std::isfinite((*this)[i])) return false;
  return true;
}

Vec& Vec::operator+=(const Vec& o) {
  for (int i = 0; i < dim_; ++i) (*this)[i] += o[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  for (int i = 0; i < dim_; ++i) (*this)[i] -= o[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (int i = 0; i < dim_; ++i) (*this)[i] *= s;
  return *this;
}

bool operator==(const Vec& a, const Vec& b) {
  if (a.dim_ != b.dim_) return false;
  for (int i = 0; i < a.dim_; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator*(double s, Vec a) { return a *= s; }

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

Mat::Mat(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw InvalidInput("Mat dimension must be in 1..3");
}

Mat Mat::identity(int dim) {
  Mat m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

bool Mat::all_finite() const {
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      if (!std::isfinite((*this)(i, j))) return false;
  return true;
}

double Mat::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m = std::max(m, std::abs((*this)(i, j)));
  return m;
}

Mat& Mat::operator+=(const Mat& o) {
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) (*this)(i, j) += o(i, j);
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) (*this)(i, j) *= s;
  return *this;
}

bool operator==(const Mat& a, const Mat& b) {
  if (a.dim_ != b.dim_) return false;
  for (int i = 0; i < a.dim_; ++i)
    for (int j = 0; j < a.dim_; ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator*(double s, Mat a) { return a *= s; }

Vec operator*(const Mat& m, const Vec& v) {
  Vec r(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    double s = 0.0;
    for (int j = 0; j < m.dim(); ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

Mat symmetrized(const Mat& m) {
  Mat s(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    s(i, i) = m(i, i);
    for (int j = i + 1; j < m.dim(); ++j) {
      // One expression evaluated once and stored twice keeps s bitwise symmetric.
      const double avg = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = avg;
      s(j, i) = avg;
    }
  }
  return s;
}

double determinant(const Mat& m) {
  switch (m.dim()) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    default:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  }
}

std::optional<Vec> solve(const Mat& m, const Vec& b, double pivot_tol) {
  const int n = m.dim();
  Mat a = m;
  Vec x = b;
  const double scale = std::max(a.max_abs(), 1e-300);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) <= pivot_tol * scale) return std::nullopt;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(x[col], x[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      x[r] -= f * x[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = x[r];
    for (int j = r + 1; j < n; ++j) s -= a(r, j) * x[j];
    x[r] = s / a(r, r);
  }
  return x;
}

Vec symmetric_eigenvalues(const Mat& m) {
  const int n = m.dim();
  Mat a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      a(i, j) = m(i, j);
      a(j, i) = m(i, j);
    }

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (int i = 0; i < n; ++i) {
      diag += a(i, i) * a(i, i);
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (off <= 1e-34 * diag || off == 0.0) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        // Rotation angle zeroing a(p,q); Golub & Van Loan sym.schur2.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  Vec ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i);
  std::array<double, kMaxDim> tmp{};
  for (int i = 0; i < n; ++i) tmp[static_cast<std::size_t>(i)] = ev[i];
  std::sort(tmp.begin(), tmp.begin() + n);
  for (int i = 0; i < n; ++i) ev[i] = tmp[static_cast<std::size_t>(i)];
  return ev;
}

NonIntegrableField::NonIntegrableField(double max_residual, double tolerance, std::size_t node)
    : Error("field is not integrable: discrete curl " + std::to_string(max_residual) +
            " exceeds tolerance " + std::to_string(tolerance) + " at node " + std::to_string(node)),
      max_residual_(max_residual),
      tolerance_(tolerance),
      node_(node) {}

NoConvergence::NoConvergence(double residual, int iterations)
    : Error("Newton iteration did not converge after " + std::to_string(iterations) +
            " iterations (residual " + std::to_string(residual) + ")"),
      residual_(residual),
      iterations_(iterations) {}

}  // namespace hgf
