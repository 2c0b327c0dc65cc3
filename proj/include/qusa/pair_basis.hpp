#pragma once

#include <array>

#include "qusa/common.hpp"
#include "qusa/network.hpp"

namespace qusa {

// 2x2 and 4x4 complex matrices, row-major. The 4x4 ones act on a single
// spin pair, either in the product spin basis (uu, ud, du, dd) or in the
// label basis (X, Y, Z, Sing).
using Mat2 = std::array<Complex, 4>;
using Mat4 = std::array<Complex, 16>;

Mat2 pauli_matrix(Axis axis);

Mat4 kron(const Mat2& a, const Mat2& b);
Mat4 matmul(const Mat4& a, const Mat4& b);
Mat4 adjoint(const Mat4& a);
Mat4 identity4();

/// Unitary whose columns are the label states X, Y, Z, Sing expressed in
/// the product spin basis:
///   |X> = (uu - dd)/sqrt2, |Y> = (uu + dd)/sqrt2,
///   |Z> = (ud + du)/sqrt2, |Sing> = (ud - du)/sqrt2.
const Mat4& pair_frame();

/// Conjugate a spin-basis pair operator into the label basis: U^dag A U.
Mat4 to_label_basis(const Mat4& spin_op);

/// q_axis = (1 - sigma_1,axis sigma_2,axis)/2 in the product spin basis.
/// Diagonal in the label basis with eigenvalue qubit_value(label, axis).
Mat4 qubit_observable(Axis axis);

/// Swaps the two sites; diag(1,1,1,-1) in the label basis.
Mat4 exchange_operator();

/// (1 + exchange)/2; diag(1,1,1,0) in the label basis.
Mat4 pair_projector();

/// Label-basis block for sum_a b1[a] sigma_a x 1 + b2[a] 1 x sigma_a.
/// Hermitian; the building block of the noise coupling.
Mat4 pair_field_block(const std::array<double, 3>& b1, const std::array<double, 3>& b2);

}  // namespace qusa
