#pragma once

#include "wsos/cone.hpp"

namespace wsos::kernels {

// Gradient and Hessian of f(x) = -ln det Lambda(x), given the inverse blocks
// W_i = Lambda_i(x)^{-1}:
//   g(x)     = -Lambda^*(W)
//   H(x)_uv  = sum_i trace(W_i A_iu W_i A_iv),   A_iu = Lambda_i(e_u)
//
// The serial reference works over any scalar field and is what exact mode
// uses. The parallel variants are double-only, OpenMP-parallel over output
// rows, and each output entry is accumulated by a single thread in a fixed
// order, so results do not depend on the thread count.

namespace serial {

template <typename T>
Vector<T> gradient(const ConeOperator& cone, const BlockSym<T>& inv_blocks);

template <typename T>
Matrix<T> hessian(const ConeOperator& cone, const BlockSym<T>& inv_blocks);

}  // namespace serial

namespace parallel {

/// Tensor contraction, parallel over Hessian rows. O(sum_u nnz_u L^2).
DMatrix hessian_tensor(const ConeOperator& cone, const BlockSym<double>& inv_blocks);

/// Rank-one nodal form (cone.nodal() required). O(U^3 + U^2 L).
DMatrix hessian_nodal(const ConeOperator& cone, const BlockSym<double>& inv_blocks);
DVector gradient_nodal(const ConeOperator& cone, const BlockSym<double>& inv_blocks);

/// Picks the nodal kernel when the cone carries one, else the tensor kernel.
DMatrix hessian(const ConeOperator& cone, const BlockSym<double>& inv_blocks);

}  // namespace parallel

int max_threads();

}  // namespace wsos::kernels
