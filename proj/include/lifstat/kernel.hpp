#ifndef LIFSTAT_KERNEL_HPP
#define LIFSTAT_KERNEL_HPP

#include <utility>
#include <vector>

#include "lifstat/params.hpp"
#include "lifstat/raster.hpp"

namespace lifstat {

/// Conditional law of the membrane potentials one step after a spiking
/// history: given the history, the V_i are independent Gaussians with mean
/// drift[i] and variance variance[i]. last_fire[i] is the last firing time
/// of neuron i within the history (block convention: its start time when the
/// neuron stayed quiet).
struct ConditionalMoments {
    std::vector<double> drift;      // C_i
    std::vector<double> variance;   // sigma_i^2
    std::vector<long long> last_fire;  // tau_i
};

/// Leak-discounted spike count x_ij = sum_{l=tau_i}^{end} gamma^(end-l) omega_j(l);
/// lies in [0, 1/(1-gamma)].
double integrated_spikes(const SpikeBlock& history, int i, int j, double leak);

/// Exact conditional mean and variance of V(next) given a finite history:
///   C_i     = sum_j W_ij x_ij + I_i (1-gamma^(m_i))/(1-gamma)
///   sigma_i^2 = sigma_B^2 (1-gamma^(2 m_i))/(1-gamma^2)
/// with m_i the number of steps since tau_i. Only pattern content matters;
/// absolute time labels never enter.
ConditionalMoments conditional_moments(const SpikeBlock& history, const NetworkParams& params);

/// Probability of the next spiking pattern given the history:
///   prod_i [ omega_i pi(y_i) + (1-omega_i)(1-pi(y_i)) ],  y_i = (theta-C_i)/sigma_i.
/// Strictly positive, and sums to 1 over the 2^N possible patterns.
double transition_prob(SpikingPattern next, const SpikeBlock& history, const NetworkParams& params);

/// log of transition_prob, evaluated term-wise in log space so it stays
/// finite even when the product itself underflows.
double potential(SpikingPattern next, const SpikeBlock& history, const NetworkParams& params);

/// Per-neuron y_i = (theta - C_i)/sigma_i for a moments structure.
std::vector<double> threshold_scores(const ConditionalMoments& moments, const NetworkParams& params);

/// Regularity constants of the transition kernel.
///   K  = sqrt(2/pi) (1/sigma_B) sqrt((1+gamma)/(1-gamma)) [ sum|W| + sum|I| ]
/// bounds the variation of the kernel: var_k(g0) <= K gamma^k, and
///   K' = sqrt(2 pi) ||pi'/pi||_[a,b] K
/// bounds the variation of its log. [a,b] is the envelope of the attainable
/// y_i, built from the extreme drifts C_i^- and C_i^+.
struct VariationConstants {
    double k_const = 0.0;   // K
    double k_prime = 0.0;   // K'
    double a_bound = 0.0;   // a
    double b_bound = 0.0;   // b
};

VariationConstants variation_constants(const NetworkParams& params);

/// Envelope [C_i^-, C_i^+] of the conditional drift over all histories.
std::pair<std::vector<double>, std::vector<double>> drift_envelope(const NetworkParams& params);

/// Per-step bounds 0 < Pi_- <= Pi_+ < 1 on the conditional probability that a
/// neuron stays below threshold, taken over the attainable y envelope.
struct NoFireBounds {
    double pi_minus = 0.0;
    double pi_plus = 0.0;
};

NoFireBounds no_fire_bounds(const NetworkParams& params);

/// (Pi_-^m, Pi_+^m): bounds on the probability of staying quiet for m
/// consecutive steps. Requires m >= 1.
std::pair<double, double> no_fire_bounds(const NetworkParams& params, int horizon);

}  // namespace lifstat

#endif
