#pragma once

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace scalolab::detail {

using cvec = std::vector<std::complex<double>>;

// out[k] = sum_m in[m] exp(-2 pi i k m / n)
inline cvec fft_forward(const cvec& in) {
    Eigen::FFT<double> fft;
    cvec out;
    fft.fwd(out, in);
    return out;
}

// out[m] = (1/n) sum_k in[k] exp(+2 pi i k m / n)
inline cvec fft_inverse(const cvec& in) {
    Eigen::FFT<double> fft;
    cvec out;
    fft.inv(out, in);
    return out;
}

inline cvec to_complex(const double* data, std::size_t n) {
    cvec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {data[i], 0.0};
    return out;
}

}  // namespace scalolab::detail
