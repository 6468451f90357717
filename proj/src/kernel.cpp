#include "lifstat/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lifstat/gauss.hpp"

namespace lifstat {

double integrated_spikes(const SpikeBlock& history, int i, int j, double leak) {
    if (i < 0 || i >= history.n_neurons || j < 0 || j >= history.n_neurons)
        throw std::invalid_argument("integrated_spikes: neuron index out of range");
    if (history.length() < 1) throw std::invalid_argument("integrated_spikes: empty history");
    const long long tau = last_firing_time(history, i);
    double sum = 0.0;
    double g = 1.0;
    for (long long l = history.end_time(); l >= tau; --l) {
        if (history.bit(j, l)) sum += g;
        g *= leak;
    }
    return sum;
}

ConditionalMoments conditional_moments(const SpikeBlock& history, const NetworkParams& params) {
    const int n = params.n_neurons;
    if (history.n_neurons != n) throw std::invalid_argument("conditional_moments: neuron count mismatch");
    if (history.length() < 1) throw std::invalid_argument("conditional_moments: empty history");
    const double gamma = params.leak;
    const long long end = history.end_time();

    ConditionalMoments m;
    m.drift.resize(static_cast<std::size_t>(n));
    m.variance.resize(static_cast<std::size_t>(n));
    m.last_fire.resize(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        const long long tau = last_firing_time(history, i);
        m.last_fire[static_cast<std::size_t>(i)] = tau;

        // x_ij for all j in one sweep over the window [tau, end]
        double drift = 0.0;
        double g = 1.0;
        double g2_sum = 0.0;  // sum of gamma^(2(end-l)) = (1-gamma^(2 steps))/(1-gamma^2)
        double g_sum = 0.0;   // sum of gamma^(end-l)   = (1-gamma^steps)/(1-gamma)
        for (long long l = end; l >= tau; --l) {
            const SpikingPattern p = history.pattern_at(l);
            if (p != 0) {
                for (int j = 0; j < n; ++j)
                    if ((p >> j) & 1u) drift += params.weight(i, j) * g;
            }
            g_sum += g;
            g2_sum += g * g;
            g *= gamma;
        }
        drift += params.inputs[static_cast<std::size_t>(i)] * g_sum;
        m.drift[static_cast<std::size_t>(i)] = drift;
        m.variance[static_cast<std::size_t>(i)] = params.noise_amp * params.noise_amp * g2_sum;
    }
    return m;
}

std::vector<double> threshold_scores(const ConditionalMoments& moments, const NetworkParams& params) {
    std::vector<double> y(moments.drift.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = (params.threshold - moments.drift[i]) / std::sqrt(moments.variance[i]);
    return y;
}

double transition_prob(SpikingPattern next, const SpikeBlock& history, const NetworkParams& params) {
    const auto y = threshold_scores(conditional_moments(history, params), params);
    double p = 1.0;
    for (int i = 0; i < params.n_neurons; ++i) {
        const double yi = y[static_cast<std::size_t>(i)];
        p *= ((next >> i) & 1u) ? gauss_tail(yi) : gauss_tail(-yi);
    }
    return p;
}

double potential(SpikingPattern next, const SpikeBlock& history, const NetworkParams& params) {
    const auto y = threshold_scores(conditional_moments(history, params), params);
    double psi = 0.0;
    for (int i = 0; i < params.n_neurons; ++i) {
        const double yi = y[static_cast<std::size_t>(i)];
        psi += ((next >> i) & 1u) ? log_gauss_tail(yi) : log_gauss_tail(-yi);
    }
    return psi;
}

std::pair<std::vector<double>, std::vector<double>> drift_envelope(const NetworkParams& params) {
    const int n = params.n_neurons;
    const double one_minus = 1.0 - params.leak;
    std::vector<double> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double pos = 0.0, neg = 0.0;
        for (int j = 0; j < n; ++j) {
            const double w = params.weight(i, j);
            if (w > 0.0) pos += w;
            else neg += w;
        }
        // The input term I_i (1-gamma^m)/(1-gamma) sweeps [I_i, I_i/(1-gamma)]
        // as m goes from 1 to infinity (interval reversed for I_i < 0).
        const double in = params.inputs[static_cast<std::size_t>(i)];
        const double in_far = in / one_minus;
        lo[static_cast<std::size_t>(i)] = neg / one_minus + std::min(in, in_far);
        hi[static_cast<std::size_t>(i)] = pos / one_minus + std::max(in, in_far);
    }
    return {lo, hi};
}

VariationConstants variation_constants(const NetworkParams& params) {
    const int n = params.n_neurons;
    const double gamma = params.leak;
    double l1 = 0.0;
    for (double w : params.weights) l1 += std::abs(w);
    for (double in : params.inputs) l1 += std::abs(in);

    VariationConstants c;
    c.k_const = std::sqrt(2.0 / M_PI) / params.noise_amp * std::sqrt((1.0 + gamma) / (1.0 - gamma)) * l1;

    const auto [c_lo, c_hi] = drift_envelope(params);
    const double shrink = std::sqrt(1.0 - gamma * gamma);  // sigma_i in [sigma_B, sigma_B/shrink]
    double a = std::numeric_limits<double>::infinity();
    double b = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double u = (params.threshold - c_hi[static_cast<std::size_t>(i)]) / params.noise_amp;
        const double v = (params.threshold - c_lo[static_cast<std::size_t>(i)]) / params.noise_amp;
        a = std::min(a, u >= 0.0 ? shrink * u : u);
        b = std::max(b, v >= 0.0 ? v : shrink * v);
    }
    c.a_bound = a;
    c.b_bound = b;

    // ||pi'/pi|| over [a,b] is the normal hazard rate at b (it is increasing).
    const double hazard = std::exp(log_gauss_pdf(b) - log_gauss_tail(b));
    c.k_prime = std::sqrt(2.0 * M_PI) * hazard * c.k_const;
    return c;
}

NoFireBounds no_fire_bounds(const NetworkParams& params) {
    const auto c = variation_constants(params);
    // 1 - pi(y) is increasing in y, so the y envelope [a,b] maps onto the
    // probability envelope (Pi_-, Pi_+) directly.
    NoFireBounds b;
    b.pi_minus = gauss_tail(-c.a_bound);
    b.pi_plus = gauss_tail(-c.b_bound);
    return b;
}

std::pair<double, double> no_fire_bounds(const NetworkParams& params, int horizon) {
    if (horizon < 1) throw std::invalid_argument("no_fire_bounds: horizon must be >= 1");
    const NoFireBounds b = no_fire_bounds(params);
    return {std::pow(b.pi_minus, horizon), std::pow(b.pi_plus, horizon)};
}

}  // namespace lifstat
