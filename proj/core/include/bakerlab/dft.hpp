#pragma once

#include <complex>
#include <span>

namespace bakerlab {

enum class Direction { forward, inverse };

namespace fft {

/// Unnormalised in-place transform of arbitrary length:
///   forward:  X_k = sum_j x_j e^{-2 pi i jk/n}
///   inverse:  X_k = sum_j x_j e^{+2 pi i jk/n}
/// Backed by FFTW; plans are created once per (length, direction) and
/// shared, so concurrent calls from several threads are safe.
void transform(std::span<std::complex<double>> data, Direction direction);

/// Strided variant used for column transforms of row-major grids.
void transform_strided(std::complex<double>* data, int length, int stride,
                       Direction direction);

/// `count` contiguous transforms of `length` points each, e.g. every column
/// of a column-major square matrix.
void transform_batch(std::complex<double>* data, int length, int count, Direction direction);

}  // namespace fft
}  // namespace bakerlab
