#ifndef LIFSTAT_GAUSS_HPP
#define LIFSTAT_GAUSS_HPP

namespace lifstat {

/// Upper tail of the standard normal, pi(x) = P(Z >= x).
/// Strictly decreasing; pi(0) = 1/2. Throws on non-finite input.
double gauss_tail(double x);

/// log pi(x), evaluated without underflow for |x| up to ~40. For x > 8 the
/// tail is computed from the Mills-ratio continued fraction so the result
/// stays finite far beyond the range where pi(x) itself is representable.
double log_gauss_tail(double x);

/// log density of the standard normal at x.
double log_gauss_pdf(double x);

}  // namespace lifstat

#endif
