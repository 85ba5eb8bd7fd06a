#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bratteli {

/// Exact integer used for dimensions and multiplicities.
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Multiplicity matrix: rows index the lower level, columns the upper one.
using MultMatrix = Matrix<BigInt>;
using DimVector = Vector<BigInt>;

enum class Tri { yes, no, unknown };

const char* to_string(Tri t);
Tri tri_from_string(const std::string& s);

inline Tri tri_not(Tri t) {
  if (t == Tri::yes) return Tri::no;
  if (t == Tri::no) return Tri::yes;
  return Tri::unknown;
}

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a bounded search runs out of depth; carries the vertices that blocked it.
class UnknownAtDepth : public std::runtime_error {
 public:
  UnknownAtDepth(const std::string& msg, std::vector<std::string> witness)
      : std::runtime_error(msg), witness_(std::move(witness)) {}
  const std::vector<std::string>& witness() const { return witness_; }

 private:
  std::vector<std::string> witness_;
};

class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Inconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline MultMatrix zero_matrix(Eigen::Index rows, Eigen::Index cols) {
  return MultMatrix::Constant(rows, cols, BigInt(0));
}

inline MultMatrix identity_matrix(Eigen::Index n) {
  MultMatrix m = zero_matrix(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

/// Matrix product over exact integers.
template <typename Scalar>
Matrix<Scalar> product(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("product: shape mismatch");
  Matrix<Scalar> out = Matrix<Scalar>::Constant(a.rows(), b.cols(), Scalar(0));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        if (b(k, j) != 0) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

/// (M^T d): the total dimension flowing into each column vertex.
template <typename Scalar>
Vector<Scalar> incoming_sum(const Matrix<Scalar>& m, const Vector<Scalar>& d) {
  Vector<Scalar> out = Vector<Scalar>::Constant(m.cols(), Scalar(0));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0) out(j) += m(i, j) * d(i);
  return out;
}

template <typename Scalar>
bool equal(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep);

}  // namespace bratteli
