#pragma once

#include "rt/array.hpp"
#include "rt/errors.hpp"
#include "rt/ewise.hpp"
#include "rt/index.hpp"
#include "rt/lattice.hpp"
#include "rt/pagewise.hpp"
#include "rt/tensor.hpp"

namespace rt {

inline Tensor operator*(const Tensor& a, const Tensor& b) { return product(a, b); }
/// b / a
inline Tensor operator/(const Tensor& b, const Tensor& a) { return solve_right(b, a); }
inline Tensor operator+(const Tensor& a, const Tensor& b) {
  return ewise_binary(BinaryOp::add, a, b);
}
inline Tensor operator-(const Tensor& a, const Tensor& b) {
  return ewise_binary(BinaryOp::sub, a, b);
}
inline Tensor operator-(const Tensor& a) { return ewise_unary(UnaryOp::neg, a); }
inline Tensor operator==(const Tensor& a, const Tensor& b) {
  return ewise_binary(BinaryOp::eq, a, b);
}
inline Tensor operator!=(const Tensor& a, const Tensor& b) {
  return ewise_binary(BinaryOp::ne, a, b);
}
inline Tensor operator<(const Tensor& a, const Tensor& b) {
  return ewise_binary(BinaryOp::lt, a, b);
}
inline Tensor operator>(const Tensor& a, const Tensor& b) {
  return ewise_binary(BinaryOp::gt, a, b);
}
inline Tensor operator<=(const Tensor& a, const Tensor& b) {
  return ewise_binary(BinaryOp::le, a, b);
}
inline Tensor operator>=(const Tensor& a, const Tensor& b) {
  return ewise_binary(BinaryOp::ge, a, b);
}
inline Tensor operator&(const Tensor& a, const Tensor& b) {
  return ewise_binary(BinaryOp::logical_and, a, b);
}
inline Tensor operator|(const Tensor& a, const Tensor& b) {
  return ewise_binary(BinaryOp::logical_or, a, b);
}
inline Tensor operator!(const Tensor& a) { return ewise_unary(UnaryOp::logical_not, a); }

inline Tensor times(const Tensor& a, const Tensor& b) {
  return ewise_binary(BinaryOp::times, a, b);
}
inline Tensor rdivide(const Tensor& a, const Tensor& b) {
  return ewise_binary(BinaryOp::rdivide, a, b);
}
inline Tensor power(const Tensor& a, const Tensor& b) {
  return ewise_binary(BinaryOp::power, a, b);
}

}  // namespace rt
