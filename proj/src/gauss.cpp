#include "lifstat/gauss.hpp"

#include <cmath>
#include <stdexcept>

namespace lifstat {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2*pi)/2
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kAsymptoticCut = 8.0;

// Laplace continued fraction for the Mills ratio pi(x)/pdf(x),
//   M(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...)))),
// evaluated bottom-up. Accurate to machine precision for x >= 8.
double mills_ratio(double x) {
    double t = x;
    for (int k = 64; k >= 1; --k) t = x + k / t;
    return 1.0 / t;
}

}  // namespace

double log_gauss_pdf(double x) { return -0.5 * x * x - kHalfLog2Pi; }

double gauss_tail(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("gauss_tail: non-finite input");
    if (x > kAsymptoticCut) return std::exp(log_gauss_tail(x));
    return 0.5 * std::erfc(x * kInvSqrt2);
}

double log_gauss_tail(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("log_gauss_tail: non-finite input");
    if (x > kAsymptoticCut)
        return log_gauss_pdf(x) + std::log(mills_ratio(x));
    if (x < -kAsymptoticCut)
        return std::log1p(-gauss_tail(-x));
    return std::log(0.5 * std::erfc(x * kInvSqrt2));
}

}  // namespace lifstat
