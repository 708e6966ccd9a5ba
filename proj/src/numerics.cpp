#include "dfts/numerics.hpp"
#include "dfts/errors.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace dfts {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Forward roots e^{-j2pi k/n} for k < n/2, cached per size. Inverse uses conjugates.
const cvec& roots_table(std::size_t n)
{
    static std::mutex mtx;
    static std::map<std::size_t, std::unique_ptr<cvec>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) {
        auto table = std::make_unique<cvec>(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k)
            (*table)[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
        it = cache.emplace(n, std::move(table)).first;
    }
    return *it->second;
}

// In-place radix-2 FFT, no normalization. sign=-1 forward, +1 inverse.
void fft_pow2(cvec& a, int sign)
{
    const std::size_t n = a.size();
    if (n <= 1)
        return;

    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }

    const cvec& roots = roots_table(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx w = roots[k * step];
                if (sign > 0)
                    w = std::conj(w);
                const cplx u = a[i + k];
                const cplx t = a[i + k + len / 2] * w;
                a[i + k] = u + t;
                a[i + k + len / 2] = u - t;
            }
        }
    }
}

struct BluesteinPlan {
    std::size_t n = 0;
    std::size_t conv_len = 0;
    cvec chirp;      // e^{sign * j*pi*k^2/n}, k < n (sign=-1 forward)
    cvec chirp_fft;  // FFT of the wrapped conjugate chirp
};

// Plans cached per (n, sign).
const BluesteinPlan& bluestein_plan(std::size_t n, int sign)
{
    static std::mutex mtx;
    static std::map<std::pair<std::size_t, int>, std::unique_ptr<BluesteinPlan>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto plan = std::make_unique<BluesteinPlan>();
        plan->n = n;
        std::size_t L = 1;
        while (L < 2 * n - 1)
            L <<= 1;
        plan->conv_len = L;
        plan->chirp.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            // k^2 mod 2n keeps the trig argument small and exact
            const std::uint64_t m = (static_cast<std::uint64_t>(k) * k) % (2 * n);
            plan->chirp[k] = std::polar(1.0, sign * kPi * static_cast<double>(m) / static_cast<double>(n));
        }
        cvec b(L, cplx(0.0, 0.0));
        for (std::size_t k = 0; k < n; ++k) {
            const cplx c = std::conj(plan->chirp[k]);
            b[k] = c;
            if (k > 0)
                b[L - k] = c;
        }
        fft_pow2(b, -1);
        plan->chirp_fft = std::move(b);
        it = cache.emplace(key, std::move(plan)).first;
    }
    return *it->second;
}

// Arbitrary-length transform via Bluestein, no normalization.
cvec fft_any(const cvec& v, int sign)
{
    const std::size_t n = v.size();
    const BluesteinPlan& plan = bluestein_plan(n, sign);
    cvec a(plan.conv_len, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k)
        a[k] = v[k] * plan.chirp[k];
    fft_pow2(a, -1);
    for (std::size_t k = 0; k < plan.conv_len; ++k)
        a[k] *= plan.chirp_fft[k];
    fft_pow2(a, +1);
    const double scale = 1.0 / static_cast<double>(plan.conv_len);
    cvec out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = a[k] * scale * plan.chirp[k];
    return out;
}

cvec transform(const cvec& v, int sign)
{
    if (v.empty())
        throw invalid_input("dft: empty input");
    if (!all_finite(v))
        throw invalid_input("dft: non-finite input sample");
    cvec out;
    if (is_pow2(v.size())) {
        out = v;
        fft_pow2(out, sign);
    } else {
        out = fft_any(v, sign);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(v.size()));
    for (cplx& c : out)
        c *= scale;
    return out;
}

} // namespace

cvec dft(const cvec& v) { return transform(v, -1); }

cvec idft(const cvec& v) { return transform(v, +1); }

cvec dft_direct(const cvec& v)
{
    if (v.empty())
        throw invalid_input("dft_direct: empty input");
    const std::size_t n = v.size();
    cvec out(n, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const std::uint64_t m = (static_cast<std::uint64_t>(k) * t) % n;
            acc += v[t] * std::polar(1.0, -2.0 * kPi * static_cast<double>(m) / static_cast<double>(n));
        }
        out[k] = acc / std::sqrt(static_cast<double>(n));
    }
    return out;
}

cvec idft_direct(const cvec& v)
{
    if (v.empty())
        throw invalid_input("idft_direct: empty input");
    const std::size_t n = v.size();
    cvec out(n, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const std::uint64_t m = (static_cast<std::uint64_t>(k) * t) % n;
            acc += v[t] * std::polar(1.0, 2.0 * kPi * static_cast<double>(m) / static_cast<double>(n));
        }
        out[k] = acc / std::sqrt(static_cast<double>(n));
    }
    return out;
}

cvec circular_convolve(const cvec& x, const cvec& h)
{
    if (x.empty() || h.empty())
        throw invalid_input("circular_convolve: empty input");
    if (h.size() > x.size())
        throw invalid_input("circular_convolve: h longer than x");
    const std::size_t n = x.size();
    cvec out(n, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t l = 0; l < h.size(); ++l)
            acc += h[l] * x[(k + n - l) % n];
        out[k] = acc;
    }
    return out;
}

double energy(const cvec& v)
{
    double e = 0.0;
    for (const cplx& c : v)
        e += std::norm(c);
    return e;
}

bool all_finite(const cvec& v)
{
    for (const cplx& c : v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            return false;
    return true;
}

} // namespace dfts
