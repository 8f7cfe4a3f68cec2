#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "entroflux/linalg.hpp"

namespace entroflux {

/// Deterministic RNG: mt19937_64 with hand-rolled floating-point mappings so
/// streams are identical across standard-library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Marsaglia polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    /// Uniform direction on the unit sphere in dimension n.
    Vec unit_vector(int n) {
        Vec beta(n);
        double norm2 = 0.0;
        do {
            for (int i = 0; i < n; ++i) {
                beta(i) = normal();
            }
            norm2 = beta.squaredNorm();
        } while (norm2 < 1e-12);
        return beta / std::sqrt(norm2);
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace entroflux
