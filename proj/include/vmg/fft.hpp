#pragma once

#include "vmg/types.hpp"

#include <complex>
#include <vector>

namespace vmg {

using Cplx = std::complex<double>;
using CMat = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic>;

// In-place iterative radix-2 transform; n must be a power of two.
// sign = -1: forward (e^{-2pi i jk/n}); sign = +1: inverse kernel, unscaled.
inline void fft_pow2(Cplx* a, int n, int sign) {
    if (n <= 0 || (n & (n - 1)) != 0) throw ValidationError("fft_pow2: length must be a power of two");
    for (int i = 1, j = 0; i < n; ++i) { // bit reversal
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / len;
        const Cplx wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            Cplx w(1.0, 0.0);
            for (int j = 0; j < len / 2; ++j) {
                const Cplx u = a[i + j];
                const Cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// 2-D transform over all rows then all columns, in place. Unscaled.
inline void fft2_pow2(CMat& a, int sign) {
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    std::vector<Cplx> buf(static_cast<std::size_t>(std::max(rows, cols)));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) buf[static_cast<std::size_t>(j)] = a(i, j);
        fft_pow2(buf.data(), cols, sign);
        for (int j = 0; j < cols; ++j) a(i, j) = buf[static_cast<std::size_t>(j)];
    }
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) buf[static_cast<std::size_t>(i)] = a(i, j);
        fft_pow2(buf.data(), rows, sign);
        for (int i = 0; i < rows; ++i) a(i, j) = buf[static_cast<std::size_t>(i)];
    }
}

} // namespace vmg
