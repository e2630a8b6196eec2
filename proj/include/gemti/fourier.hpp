#ifndef GEMTI_FOURIER_HPP
#define GEMTI_FOURIER_HPP

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace gemti {

using cplx = std::complex<double>;

// Unscaled DFT_k = sum_j x_j exp(-2*pi*i*j*k/n) and its 1/n inverse.
inline std::vector<cplx> dft(const std::vector<cplx>& x) {
  Eigen::FFT<double> fft;
  std::vector<cplx> y;
  fft.fwd(y, x);
  return y;
}

inline std::vector<cplx> idft(const std::vector<cplx>& x) {
  Eigen::FFT<double> fft;
  std::vector<cplx> y;
  fft.inv(y, x);
  return y;
}

// Index of the zero-frequency bin once fftshifted: floor(n/2).
inline int fftshift_center(int n) { return n / 2; }

// Reorder wrapped DFT output into ascending frequency order.
template <class T>
std::vector<T> fftshift(const std::vector<T>& x) {
  const int n = static_cast<int>(x.size());
  const int c = fftshift_center(n);
  std::vector<T> y(n);
  for (int m = 0; m < n; ++m) y[m] = x[(m + (n - c)) % n];
  return y;
}

template <class T>
std::vector<T> ifftshift(const std::vector<T>& x) {
  const int n = static_cast<int>(x.size());
  const int c = fftshift_center(n);
  std::vector<T> y(n);
  for (int k = 0; k < n; ++k) y[k] = x[(k + c) % n];
  return y;
}

}  // namespace gemti

#endif
