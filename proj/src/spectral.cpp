#include "entroflux/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>

#include "entroflux/errors.hpp"

namespace entroflux {

namespace {

// FFTW planning is not thread-safe; execution of ready plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

using CVec = std::vector<std::complex<double>>;

CVec forward(int N, const ScalarField2D& f) {
    CVec in(static_cast<std::size_t>(N) * N), out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        in[i] = f[i];
    }
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_2d(N, N, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

ScalarField2D backward(int N, CVec& fhat) {
    CVec out(fhat.size());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_2d(N, N, reinterpret_cast<fftw_complex*>(fhat.data()),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    ScalarField2D f(fhat.size());
    const double scale = 1.0 / (static_cast<double>(N) * N);
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = out[i].real() * scale;
    }
    return f;
}

// Signed integer frequency for DFT index k on an N-grid. The Nyquist mode of
// an even grid carries no usable sign for odd derivatives and is zeroed, which
// also keeps the projector conjugate-symmetric there.
inline double freq(int k, int N) {
    if (2 * k == N) {
        return 0.0;
    }
    return (k <= N / 2) ? k : k - N;
}

void check_size(int N, const ScalarField2D& f) {
    if (N < 2 || f.size() != static_cast<std::size_t>(N) * N) {
        throw GridError("field size does not match N*N torus grid");
    }
}

} // namespace

void project_divergence_free(int N, ScalarField2D& fx, ScalarField2D& fy) {
    check_size(N, fx);
    check_size(N, fy);
    CVec fxh = forward(N, fx);
    CVec fyh = forward(N, fy);
    const double twopi = 2.0 * M_PI;
    for (int ky = 0; ky < N; ++ky) {
        for (int kx = 0; kx < N; ++kx) {
            const double k1 = twopi * freq(kx, N);
            const double k2 = twopi * freq(ky, N);
            const double k2norm = k1 * k1 + k2 * k2;
            if (k2norm == 0.0) {
                continue;
            }
            const std::size_t idx = static_cast<std::size_t>(ky) * N + kx;
            // d = i*(k1, k2); remove d * (conj(d) . fhat) / |d|^2
            const std::complex<double> div = std::complex<double>(0, 1) * (k1 * fxh[idx] + k2 * fyh[idx]);
            const std::complex<double> scale = std::complex<double>(0, -1) * div / k2norm;
            fxh[idx] -= scale * k1;
            fyh[idx] -= scale * k2;
        }
    }
    fx = backward(N, fxh);
    fy = backward(N, fyh);
}

ScalarField2D spectral_divergence(int N, const ScalarField2D& fx, const ScalarField2D& fy) {
    check_size(N, fx);
    check_size(N, fy);
    CVec fxh = forward(N, fx);
    CVec fyh = forward(N, fy);
    CVec divh(fxh.size());
    const double twopi = 2.0 * M_PI;
    for (int ky = 0; ky < N; ++ky) {
        for (int kx = 0; kx < N; ++kx) {
            const double k1 = twopi * freq(kx, N);
            const double k2 = twopi * freq(ky, N);
            const std::size_t idx = static_cast<std::size_t>(ky) * N + kx;
            divh[idx] = std::complex<double>(0, 1) * (k1 * fxh[idx] + k2 * fyh[idx]);
        }
    }
    return backward(N, divh);
}

} // namespace entroflux
