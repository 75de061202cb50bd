#pragma once

// Fixed-capacity vectors and matrices for R^n with n <= 3.
//
// Every geometric quantity in the library (points, slopes, Hessians,
// characteristic Jacobians) lives in at most three dimensions, so these
// types keep their storage inline and never allocate.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <optional>

namespace hgf {

inline constexpr int kMaxDim = 3;

class Vec {
 public:
  Vec() = default;
  explicit Vec(int dim);
  Vec(std::initializer_list<double> xs);

  static Vec filled(int dim, double value);

  int dim() const { return dim_; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

  double norm_inf() const;
  double norm_sq() const;
  bool all_finite() const;

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double s);

  friend bool operator==(const Vec& a, const Vec& b);

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator*(double s, Vec a);
double dot(const Vec& a, const Vec& b);

/// Dense n x n matrix, row-major.
class Mat {
 public:
  Mat() = default;
  explicit Mat(int dim);

  static Mat identity(int dim);

  int dim() const { return dim_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * kMaxDim + j)]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * kMaxDim + j)]; }

  bool all_finite() const;
  double max_abs() const;

  Mat& operator+=(const Mat& o);
  Mat& operator*=(double s);

  friend bool operator==(const Mat& a, const Mat& b);

 private:
  std::array<double, kMaxDim * kMaxDim> a_{};
  int dim_ = 0;
};

Mat operator+(Mat a, const Mat& b);
Mat operator*(double s, Mat a);
Vec operator*(const Mat& m, const Vec& v);

/// (M + M^T) / 2, computed so that the result is bitwise symmetric.
Mat symmetrized(const Mat& m);

double determinant(const Mat& m);

/// Solves m x = b with partial pivoting; nullopt when a pivot underflows
/// `pivot_tol` relative to the largest entry.
std::optional<Vec> solve(const Mat& m, const Vec& b, double pivot_tol = 1e-14);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Only the upper triangle is read.
Vec symmetric_eigenvalues(const Mat& m);

}  // namespace hgf
