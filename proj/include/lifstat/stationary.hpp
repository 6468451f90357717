#ifndef LIFSTAT_STATIONARY_HPP
#define LIFSTAT_STATIONARY_HPP

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lifstat/chain.hpp"
#include "lifstat/params.hpp"

namespace lifstat {

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, int iterations_, double residual_)
        : std::runtime_error(what), iterations(iterations_), residual(residual_) {}
    int iterations;
    double residual;
};

/// Perron-Frobenius data of a chain: dominant left/right eigenvectors with
/// <l,r> = 1, invariant word measure mu(w) = l_w r_w, topological pressure
/// P = log s (zero for a normalized chain, where the right eigenvector is
/// constant), entropy h = P - mu(psi) > 0, and per-neuron firing rates.
struct StationaryAnalysis {
    std::vector<double> left_vec;
    std::vector<double> right_vec;
    std::vector<double> measure;
    double pressure = 0.0;
    double entropy = 0.0;
    std::vector<double> rates;
    int iterations = 0;
    double residual = 0.0;

    /// Stationary probability of the (R+1)-block (w, a):
    /// l_w (exp(psi)/s) r_succ.
    double block_prob(const GibbsChain& chain, std::uint64_t w, std::uint32_t a) const;
};

struct PowerIterationOptions {
    double tolerance = 1e-12;  // max-norm change of both eigenvectors
    int max_iterations = 100000;
};

/// Power iteration for the dominant eigentriple; the eigenvalue is isolated
/// (the incidence structure is primitive with I^(R+1) > 0), so convergence
/// is geometric. Throws ConvergenceError with the iteration count and last
/// residual when the tolerance is not reached.
StationaryAnalysis stationary(const GibbsChain& chain, const PowerIterationOptions& options = {});

/// Probability of a spike block of length >= R under the stationary chain
/// (Chapman-Kolmogorov product along the word path).
double block_probability(const StationaryAnalysis& analysis, const GibbsChain& chain,
                         const SpikeBlock& block);

/// Kullback-Leibler divergence rate d(mu_coarse, mu_fine) between the
/// stationary measures of two normalized chains of the same network,
/// coarse range <= fine range:
///   d = -mu_coarse(psi_fine) - h(mu_coarse).
/// Nonnegative up to roundoff and bounded by K' gamma^(coarse range).
double kl_divergence(const StationaryAnalysis& coarse, const GibbsChain& coarse_chain,
                     const GibbsChain& fine_chain);

/// Extremal Gibbs ratios mu(cyl) / exp(-m P + sum psi) over all cylinders of
/// length m = 1..max_len and all boundary histories, the sum running over the
/// potential of each pattern in the cylinder given its (boundary-completed)
/// past. By construction the observed ratios straddle 1: 0 < c1 <= 1 <= c2.
std::pair<double, double> gibbs_ratio_bounds(const StationaryAnalysis& analysis,
                                             const GibbsChain& chain, int max_len);

/// Stationary membrane-potential density of one neuron on a grid: the
/// mixture sum_w mu(w) Normal(v; C_i(w), sigma_i^2(w)). params must be the
/// network the chain was built from.
std::vector<double> membrane_density(const StationaryAnalysis& analysis, const GibbsChain& chain,
                                     const NetworkParams& params, int neuron,
                                     std::span<const double> grid);

/// Matching mixture cumulative distribution on a grid.
std::vector<double> membrane_cdf(const StationaryAnalysis& analysis, const GibbsChain& chain,
                                 const NetworkParams& params, int neuron,
                                 std::span<const double> grid);

}  // namespace lifstat

#endif
