#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "bcc/errors.hpp"

namespace bcc {

using cplx = std::complex<double>;

// ============================================================================
// SNR values
// ============================================================================

// SNR stored in linear scale; dB only at I/O boundaries.
class SnrValue {
public:
    static SnrValue from_linear(double linear) {
        if (!(linear > 0.0))
            throw validation_error("SnrValue: linear SNR must be > 0");
        return SnrValue(linear);
    }
    static SnrValue from_db(double db) { return SnrValue(std::pow(10.0, db / 10.0)); }

    double linear() const { return linear_; }
    double db() const { return 10.0 * std::log10(linear_); }

private:
    explicit SnrValue(double linear) : linear_(linear) {}
    double linear_;
};

// ============================================================================
// Reproducible randomness
// ============================================================================
//
// One master seed per experiment; every frame gets an independent generator
// derived as hash(master, frame_index, stream_tag), so any frame can be
// re-simulated in isolation and sweeps parallelize without changing results.
// The mt19937_64 engine output is specified bit-exactly by the standard; the
// uniform/gaussian transforms below are hand-rolled because the std::
// distributions are implementation-defined.

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t frame_index,
                                 std::uint64_t stream_tag) {
    return mix64(mix64(master ^ mix64(frame_index)) ^ stream_tag);
}

class FrameRng {
public:
    explicit FrameRng(std::uint64_t seed) : engine_(seed) {}
    FrameRng(std::uint64_t master, std::uint64_t frame_index, std::uint64_t stream_tag)
        : engine_(derive_seed(master, frame_index, stream_tag)) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    bool bit() { return (engine_() >> 63) != 0; }

    // standard normal via Box-Muller; one cached variate
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        // guard against log(0)
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stream tags used by the Monte Carlo harness.
namespace stream {
inline constexpr std::uint64_t message = 0;
inline constexpr std::uint64_t fading = 1;
inline constexpr std::uint64_t noise = 2;
}  // namespace stream

// ============================================================================
// Quasi-static Rayleigh fading + AWGN
// ============================================================================

// One realization per codeword: h constant over the frame.
struct ChannelRealization {
    cplx h{1.0, 0.0};
    double n0 = 0.0;  // total complex noise variance (N0/2 per dimension)
};

// h = x + iy with x, y ~ N(0, 1/2), so E[|h|^2] = 1 and |h|^2 ~ Exp(1).
inline cplx sample_fading(FrameRng& rng) {
    const double s = std::sqrt(0.5);
    const double re = s * rng.gaussian();
    const double im = s * rng.gaussian();
    return {re, im};
}

// y_i = h * s_i + n_i with circularly symmetric complex Gaussian noise.
inline std::vector<cplx> transmit(std::span<const cplx> symbols,
                                  const ChannelRealization& real, FrameRng& rng) {
    std::vector<cplx> out(symbols.size());
    const double s = std::sqrt(real.n0 * 0.5);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const cplx noise(s * rng.gaussian(), s * rng.gaussian());
        out[i] = real.h * symbols[i] + noise;
    }
    return out;
}

}  // namespace bcc
