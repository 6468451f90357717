#include "lifstat/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lifstat/gauss.hpp"
#include "lifstat/kernel.hpp"

namespace lifstat {

double StationaryAnalysis::block_prob(const GibbsChain& chain, std::uint64_t w,
                                      std::uint32_t a) const {
    return left_vec[w] * std::exp(chain.log_prob(w, a) - pressure) *
           right_vec[chain.successor(w, a)];
}

StationaryAnalysis stationary(const GibbsChain& chain, const PowerIterationOptions& options) {
    const std::uint64_t words = chain.n_words();
    const std::uint32_t patterns = chain.n_patterns();

    std::vector<double> probs(chain.log_probs.size());
    for (std::size_t k = 0; k < probs.size(); ++k) probs[k] = std::exp(chain.log_probs[k]);

    std::vector<double> l(words, 1.0 / static_cast<double>(words));
    std::vector<double> r(words, 1.0);
    std::vector<double> l_next(words), r_next(words);

    // One simultaneous left/right sweep; returns the left growth factor
    // (the Perron eigenvalue estimate) and tracks the max-norm change.
    double residual = std::numeric_limits<double>::infinity();
    auto sweep = [&]() {
        std::fill(l_next.begin(), l_next.end(), 0.0);
        for (std::uint64_t w = 0; w < words; ++w) {
            const double lw = l[w];
            if (lw == 0.0) continue;
            const double* row = &probs[w * patterns];
            for (std::uint32_t a = 0; a < patterns; ++a)
                l_next[chain.successor(w, a)] += lw * row[a];
        }
        const double growth = std::accumulate(l_next.begin(), l_next.end(), 0.0);
        for (double& x : l_next) x /= growth;

        for (std::uint64_t w = 0; w < words; ++w) {
            const double* row = &probs[w * patterns];
            double acc = 0.0;
            for (std::uint32_t a = 0; a < patterns; ++a)
                acc += row[a] * r[chain.successor(w, a)];
            r_next[w] = acc;
        }
        double scale = 0.0;
        for (std::uint64_t w = 0; w < words; ++w) scale += l_next[w] * r_next[w];
        for (double& x : r_next) x /= scale;

        residual = 0.0;
        for (std::uint64_t w = 0; w < words; ++w) {
            residual = std::max(residual, std::abs(l_next[w] - l[w]));
            residual = std::max(residual, std::abs(r_next[w] - r[w]));
        }
        l.swap(l_next);
        r.swap(r_next);
        return growth;
    };

    int sweeps = 0;
    while (sweeps < options.max_iterations) {
        sweep();
        ++sweeps;
        if (residual < options.tolerance) break;
    }
    if (residual >= options.tolerance) {
        std::ostringstream msg;
        msg << "power iteration did not converge: residual " << residual << " after " << sweeps
            << " sweeps";
        throw ConvergenceError(msg.str(), sweeps, residual);
    }
    // Pressure from the growth factors of 10 fully converged sweeps.
    double p = 0.0;
    for (int k = 0; k < 10; ++k) p += std::log(sweep());
    sweeps += 10;

    StationaryAnalysis analysis;
    analysis.pressure = p / 10.0;
    analysis.left_vec = std::move(l);
    analysis.right_vec = std::move(r);
    analysis.iterations = sweeps;
    analysis.residual = residual;

    analysis.measure.resize(words);
    for (std::uint64_t w = 0; w < words; ++w)
        analysis.measure[w] = analysis.left_vec[w] * analysis.right_vec[w];

    // Averages over (R+1)-blocks: mu(psi) for the entropy, spike marginals
    // for the rates.
    double mu_psi = 0.0;
    analysis.rates.assign(static_cast<std::size_t>(chain.n_neurons), 0.0);
    const double s = std::exp(analysis.pressure);
    for (std::uint64_t w = 0; w < words; ++w) {
        const double lw = analysis.left_vec[w];
        if (lw == 0.0) continue;
        const double* row = &probs[w * patterns];
        for (std::uint32_t a = 0; a < patterns; ++a) {
            const double pb = lw * (row[a] / s) * analysis.right_vec[chain.successor(w, a)];
            mu_psi += pb * chain.log_probs[w * patterns + a];
            for (int i = 0; i < chain.n_neurons; ++i)
                if ((a >> i) & 1u) analysis.rates[static_cast<std::size_t>(i)] += pb;
        }
    }
    analysis.entropy = analysis.pressure - mu_psi;
    return analysis;
}

double block_probability(const StationaryAnalysis& analysis, const GibbsChain& chain,
                         const SpikeBlock& block) {
    if (block.n_neurons != chain.n_neurons)
        throw std::invalid_argument("block_probability: neuron count mismatch");
    const int r = chain.range;
    if (block.length() < r) throw std::invalid_argument("block_probability: block shorter than range");
    std::uint64_t w = encode_block(block.slice(block.start_time, block.start_time + r - 1)).value;
    double p = analysis.left_vec[w];
    for (long long t = block.start_time + r; t <= block.end_time(); ++t) {
        const std::uint32_t a = block.pattern_at(t);
        p *= std::exp(chain.log_prob(w, a) - analysis.pressure);
        w = chain.successor(w, a);
    }
    return p * analysis.right_vec[w];
}

double kl_divergence(const StationaryAnalysis& coarse, const GibbsChain& coarse_chain,
                     const GibbsChain& fine_chain) {
    if (coarse_chain.n_neurons != fine_chain.n_neurons)
        throw std::invalid_argument("kl_divergence: neuron count mismatch");
    if (coarse_chain.range > fine_chain.range)
        throw std::invalid_argument("kl_divergence: coarse range exceeds fine range");
    if (!coarse_chain.normalized || !fine_chain.normalized)
        throw std::invalid_argument("kl_divergence: chains must be normalized");

    const int n = fine_chain.n_neurons;
    const int rc = coarse_chain.range;
    const int rf = fine_chain.range;
    const std::uint64_t coarse_mask = (std::uint64_t{1} << (n * rc)) - 1;
    const std::uint32_t pattern_mask = fine_chain.n_patterns() - 1;

    // mu_coarse(psi_fine): extend coarse words to (rf+1)-blocks by
    // Chapman-Kolmogorov, average the fine potential.
    double mu_psi_fine = 0.0;
    for (std::uint64_t wf = 0; wf < fine_chain.n_words(); ++wf) {
        for (std::uint32_t af = 0; af < fine_chain.n_patterns(); ++af) {
            const std::uint64_t block = fine_chain.block_word(wf, af);  // n*(rf+1) bits
            std::uint64_t w = block & coarse_mask;
            double p = coarse.measure[w];
            for (int k = rc; k <= rf; ++k) {
                const std::uint32_t a =
                    static_cast<std::uint32_t>(block >> (n * k)) & pattern_mask;
                p *= coarse_chain.prob(w, a);
                w = coarse_chain.successor(w, a);
            }
            mu_psi_fine += p * fine_chain.log_prob(wf, af);
        }
    }
    return -mu_psi_fine - coarse.entropy;
}

std::pair<double, double> gibbs_ratio_bounds(const StationaryAnalysis& analysis,
                                             const GibbsChain& chain, int max_len) {
    const int n = chain.n_neurons;
    const int r = chain.range;
    if (max_len < r) throw std::invalid_argument("gibbs_ratio_bounds: max_len must be >= range");
    if (n * (max_len + r) > 26)
        throw std::runtime_error("gibbs_ratio_bounds: enumeration cap exceeded");

    const std::uint32_t pattern_mask = chain.n_patterns() - 1;
    double c1 = std::numeric_limits<double>::infinity();
    double c2 = 0.0;

    for (int m = 1; m <= max_len; ++m) {
        const std::uint64_t n_blocks = std::uint64_t{1} << (n * m);
        for (std::uint64_t block = 0; block < n_blocks; ++block) {
            // Marginal probability of the m-pattern cylinder.
            double mu_block;
            if (m >= r) {
                std::uint64_t path = block & ((std::uint64_t{1} << (n * r)) - 1);
                double p = analysis.left_vec[path];
                for (int k = r; k < m; ++k) {
                    const std::uint32_t a =
                        static_cast<std::uint32_t>(block >> (n * k)) & pattern_mask;
                    p *= std::exp(chain.log_prob(path, a) - analysis.pressure);
                    path = chain.successor(path, a);
                }
                mu_block = p * analysis.right_vec[path];
            } else {
                // Sum word measure over the unconstrained earlier patterns:
                // the cylinder pins the last m patterns (the high bits).
                mu_block = 0.0;
                const int free_bits = n * (r - m);
                for (std::uint64_t pre = 0; pre < (std::uint64_t{1} << free_bits); ++pre)
                    mu_block += analysis.measure[pre | (block << free_bits)];
            }

            // Potential sum with every possible boundary history.
            for (std::uint64_t boundary = 0; boundary < chain.n_words(); ++boundary) {
                std::uint64_t w = boundary;
                double sum_psi = 0.0;
                for (int k = 0; k < m; ++k) {
                    const std::uint32_t a =
                        static_cast<std::uint32_t>(block >> (n * k)) & pattern_mask;
                    sum_psi += chain.log_prob(w, a);
                    w = chain.successor(w, a);
                }
                const double ratio = mu_block / std::exp(-m * analysis.pressure + sum_psi);
                c1 = std::min(c1, ratio);
                c2 = std::max(c2, ratio);
            }
        }
    }
    return {c1, c2};
}

std::vector<double> membrane_density(const StationaryAnalysis& analysis, const GibbsChain& chain,
                                     const NetworkParams& params, int neuron,
                                     std::span<const double> grid) {
    if (neuron < 0 || neuron >= chain.n_neurons)
        throw std::invalid_argument("membrane_density: neuron index out of range");
    std::vector<double> density(grid.size(), 0.0);
    for (std::uint64_t w = 0; w < chain.n_words(); ++w) {
        const double mu = analysis.measure[w];
        if (mu == 0.0) continue;
        const SpikeBlock history = decode_word(Word{w, chain.n_neurons, chain.range});
        const auto moments = conditional_moments(history, params);
        const double c = moments.drift[static_cast<std::size_t>(neuron)];
        const double sigma = std::sqrt(moments.variance[static_cast<std::size_t>(neuron)]);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double z = (grid[g] - c) / sigma;
            density[g] += mu * std::exp(log_gauss_pdf(z)) / sigma;
        }
    }
    return density;
}

std::vector<double> membrane_cdf(const StationaryAnalysis& analysis, const GibbsChain& chain,
                                 const NetworkParams& params, int neuron,
                                 std::span<const double> grid) {
    if (neuron < 0 || neuron >= chain.n_neurons)
        throw std::invalid_argument("membrane_cdf: neuron index out of range");
    std::vector<double> cdf(grid.size(), 0.0);
    for (std::uint64_t w = 0; w < chain.n_words(); ++w) {
        const double mu = analysis.measure[w];
        if (mu == 0.0) continue;
        const SpikeBlock history = decode_word(Word{w, chain.n_neurons, chain.range});
        const auto moments = conditional_moments(history, params);
        const double c = moments.drift[static_cast<std::size_t>(neuron)];
        const double sigma = std::sqrt(moments.variance[static_cast<std::size_t>(neuron)]);
        for (std::size_t g = 0; g < grid.size(); ++g)
            cdf[g] += mu * gauss_tail(-(grid[g] - c) / sigma);
    }
    return cdf;
}

}  // namespace lifstat
