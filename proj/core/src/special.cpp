#include "tccm/errors.hpp"
#include "tccm/rng.hpp"
#include "tccm/synthetic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace tccm {

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
    }
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
    }
    // 14-term Lanczos series with g = 607/128.
    static constexpr std::array<double, 14> coef = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,     -0.491913816097620199,
        .339946499848118887e-4,  .465236289270485756e-4,  -.983744753048795646e-4, .158088703224912494e-3,
        -.210264441724104883e-3, .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
        -.261908384015814087e-4, .368991826595316234e-5,
    };
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double series = 0.999999999999997092;
    for (double c : coef) series += c / ++y;
    return tmp + std::log(2.5066282746310005 * series / x);
}

double chi_mean(int d, double sigma_f) {
    if (d < 1) throw DomainError("chi_mean: d must be >= 1");
    if (!(sigma_f >= 0.0)) throw DomainError("chi_mean: sigma_f must be non-negative");
    const double half = 0.5 * static_cast<double>(d);
    return sigma_f * std::numbers::sqrt2 * std::exp(log_gamma(half + 0.5) - log_gamma(half));
}

McEstimate noncentral_chi_mean_mc(int d, double lambda, std::size_t n, std::uint64_t seed) {
    if (d < 1) throw DomainError("noncentral_chi_mean_mc: d must be >= 1");
    if (!(lambda >= 0.0)) throw DomainError("noncentral_chi_mean_mc: lambda must be >= 0");
    if (n < 1) throw DomainError("noncentral_chi_mean_mc: n must be >= 1");

    Rng rng(seed, Stream::MonteCarlo);
    const double shift = std::sqrt(lambda);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 0.0;
        for (int j = 0; j < d; ++j) {
            const double x = rng.normal() + (j == 0 ? shift : 0.0);
            sq += x * x;
        }
        const double r = std::sqrt(sq);
        sum += r;
        sum_sq += r * r;
    }
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    const double var = n > 1 ? std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0)) : 0.0;
    return McEstimate{mean, std::sqrt(var / nn)};
}

}  // namespace tccm
