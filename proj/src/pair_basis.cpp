#include "qusa/pair_basis.hpp"

#include <cmath>

namespace qusa {

namespace {
constexpr Complex I{0.0, 1.0};
}

Mat2 pauli_matrix(Axis axis) {
    switch (axis) {
        case Axis::X: return {0, 1, 1, 0};
        case Axis::Y: return {0, -I, I, 0};
        case Axis::Z: return {1, 0, 0, -1};
    }
    throw std::logic_error("bad axis");
}

Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out[(2 * i + k) * 4 + (2 * j + l)] = a[i * 2 + j] * b[k * 2 + l];
    return out;
}

Mat4 matmul(const Mat4& a, const Mat4& b) {
    Mat4 out{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const Complex aik = a[i * 4 + k];
            if (aik == Complex{}) continue;
            for (int j = 0; j < 4; ++j) out[i * 4 + j] += aik * b[k * 4 + j];
        }
    return out;
}

Mat4 adjoint(const Mat4& a) {
    Mat4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i * 4 + j] = std::conj(a[j * 4 + i]);
    return out;
}

Mat4 identity4() {
    Mat4 out{};
    for (int i = 0; i < 4; ++i) out[i * 4 + i] = 1.0;
    return out;
}

const Mat4& pair_frame() {
    static const Mat4 u = [] {
        const double r = 1.0 / std::sqrt(2.0);
        Mat4 m{};
        // rows: uu, ud, du, dd; columns: X, Y, Z, Sing
        m[0 * 4 + 0] = r;
        m[3 * 4 + 0] = -r;
        m[0 * 4 + 1] = r;
        m[3 * 4 + 1] = r;
        m[1 * 4 + 2] = r;
        m[2 * 4 + 2] = r;
        m[1 * 4 + 3] = r;
        m[2 * 4 + 3] = -r;
        return m;
    }();
    return u;
}

Mat4 to_label_basis(const Mat4& spin_op) {
    return matmul(adjoint(pair_frame()), matmul(spin_op, pair_frame()));
}

Mat4 qubit_observable(Axis axis) {
    const Mat4 ss = kron(pauli_matrix(axis), pauli_matrix(axis));
    Mat4 out = identity4();
    for (int i = 0; i < 16; ++i) out[i] = 0.5 * (out[i] - ss[i]);
    return out;
}

Mat4 exchange_operator() {
    Mat4 out{};
    out[0 * 4 + 0] = 1.0;
    out[1 * 4 + 2] = 1.0;
    out[2 * 4 + 1] = 1.0;
    out[3 * 4 + 3] = 1.0;
    return out;
}

Mat4 pair_projector() {
    const Mat4 x = exchange_operator();
    Mat4 out = identity4();
    for (int i = 0; i < 16; ++i) out[i] = 0.5 * (out[i] + x[i]);
    return out;
}

Mat4 pair_field_block(const std::array<double, 3>& b1, const std::array<double, 3>& b2) {
    const Mat2 one{1, 0, 0, 1};
    Mat4 spin{};
    for (int a = 0; a < 3; ++a) {
        const Mat2 s = pauli_matrix(static_cast<Axis>(a));
        const Mat4 left = kron(s, one);
        const Mat4 right = kron(one, s);
        for (int i = 0; i < 16; ++i) spin[i] += b1[a] * left[i] + b2[a] * right[i];
    }
    return to_label_basis(spin);
}

}  // namespace qusa
