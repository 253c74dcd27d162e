#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace windeval {

// Unnormalised 2D DFT over a row-major rows x cols buffer. Forward uses
// exp(-i 2 pi ...), inverse exp(+i 2 pi ...). Safe to call from several
// threads.
void fft2d(std::vector<std::complex<double>>& data, std::size_t rows, std::size_t cols, bool inverse = false);

}  // namespace windeval
