#ifndef RSPEC_FFT_HPP
#define RSPEC_FFT_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rspec {

// Complex transform of one fixed size. inverse() includes the 1/n factor, so
// inverse(forward(v)) == v up to rounding. Plans are FFTW_ESTIMATE only:
// planning never depends on timing, so repeated runs are bit-identical.
// Instances own their buffers; use shared() for the per-thread cache so
// distinct threads never touch the same plan.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const { return n_; }

    void forward(const std::complex<double>* in, std::complex<double>* out);
    void inverse(const std::complex<double>* in, std::complex<double>* out);

    static Fft& shared(std::size_t n);

private:
    std::size_t n_;
    void* in_;
    void* out_;
    void* plan_forward_;
    void* plan_inverse_;
};

// Unnormalized forward transform of real samples.
std::vector<std::complex<double>> fft_forward_real(std::span<const double> values);

// Real part of the normalized inverse transform.
std::vector<double> fft_inverse_real(std::span<const std::complex<double>> coeffs);

} // namespace rspec

#endif
