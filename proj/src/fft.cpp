#include "rspec/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include "rspec/errors.hpp"

namespace rspec {

namespace {

// FFTW plan creation and destruction share global state and are not
// thread-safe; execution through an instance's own buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0) throw DomainError("fft: size must be positive");
    in_ = fftw_alloc_complex(n);
    out_ = fftw_alloc_complex(n);
    if (in_ == nullptr || out_ == nullptr) throw Error("fft: allocation failed");
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_forward_ = fftw_plan_dft_1d(static_cast<int>(n),
                                     static_cast<fftw_complex*>(in_),
                                     static_cast<fftw_complex*>(out_),
                                     FFTW_FORWARD, FFTW_ESTIMATE);
    plan_inverse_ = fftw_plan_dft_1d(static_cast<int>(n),
                                     static_cast<fftw_complex*>(in_),
                                     static_cast<fftw_complex*>(out_),
                                     FFTW_BACKWARD, FFTW_ESTIMATE);
    if (plan_forward_ == nullptr || plan_inverse_ == nullptr)
        throw Error("fft: plan creation failed");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
    fftw_free(in_);
    fftw_free(out_);
}

void Fft::forward(const std::complex<double>* in, std::complex<double>* out) {
    std::memcpy(in_, in, n_ * sizeof(std::complex<double>));
    fftw_execute(static_cast<fftw_plan>(plan_forward_));
    std::memcpy(out, out_, n_ * sizeof(std::complex<double>));
}

void Fft::inverse(const std::complex<double>* in, std::complex<double>* out) {
    std::memcpy(in_, in, n_ * sizeof(std::complex<double>));
    fftw_execute(static_cast<fftw_plan>(plan_inverse_));
    const double scale = 1.0 / static_cast<double>(n_);
    auto* res = static_cast<std::complex<double>*>(out_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = res[i] * scale;
}

Fft& Fft::shared(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<Fft>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<Fft>(n)).first;
    return *it->second;
}

std::vector<std::complex<double>> fft_forward_real(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::complex<double>> in(n), out(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = values[i];
    Fft::shared(n).forward(in.data(), out.data());
    return out;
}

std::vector<double> fft_inverse_real(std::span<const std::complex<double>> coeffs) {
    const std::size_t n = coeffs.size();
    std::vector<std::complex<double>> out(n);
    Fft::shared(n).inverse(coeffs.data(), out.data());
    std::vector<double> res(n);
    for (std::size_t i = 0; i < n; ++i) res[i] = out[i].real();
    return res;
}

} // namespace rspec
