#ifndef DFTS_NUMERICS_HPP
#define DFTS_NUMERICS_HPP

#include <complex>
#include <vector>

namespace dfts {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// Unitary forward DFT, X[k] = (1/sqrt(M)) * sum_n x[n] e^{-j2pi kn/M}.
/// Any positive length: radix-2 for powers of two, Bluestein otherwise.
cvec dft(const cvec& v);

/// Unitary inverse DFT, x[n] = (1/sqrt(M)) * sum_k X[k] e^{+j2pi kn/M}.
cvec idft(const cvec& v);

/// O(M^2) direct-summation reference transforms (oracle path).
cvec dft_direct(const cvec& v);
cvec idft_direct(const cvec& v);

/// Circular convolution: out[k] = sum_l h[l] * x[(k-l) mod N]. Requires len(h) <= len(x).
cvec circular_convolve(const cvec& x, const cvec& h);

/// Squared Euclidean norm of a vector.
double energy(const cvec& v);

bool all_finite(const cvec& v);

} // namespace dfts

#endif
