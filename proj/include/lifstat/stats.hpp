#ifndef LIFSTAT_STATS_HPP
#define LIFSTAT_STATS_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "lifstat/chain.hpp"
#include "lifstat/raster.hpp"
#include "lifstat/stationary.hpp"

namespace lifstat {

/// Sliding-window block counts of a raster: counts maps the word encoding of
/// each observed block of block_len patterns to its number of occurrences;
/// total = raster length - block_len + 1.
struct EmpiricalMeasure {
    int n_neurons = 0;
    int block_len = 0;
    std::unordered_map<std::uint64_t, long long> counts;
    long long total = 0;

    double frequency(std::uint64_t word) const {
        auto it = counts.find(word);
        return it == counts.end() ? 0.0 : static_cast<double>(it->second) / total;
    }
};

EmpiricalMeasure empirical_blocks(const Raster& raster, int block_len);

/// Time-averaged firing rate of each neuron.
std::vector<double> empirical_rates(const Raster& raster);

/// N x N matrix (row-major) of time averages of omega_i(t) omega_j(t+lag).
/// pairwise(-lag) is the transpose of pairwise(lag).
std::vector<double> empirical_pairwise(const Raster& raster, int lag);

/// Conditional block-entropy estimate H_{n+1} - H_n in [0, N log 2], where
/// H_n is taken from the n-marginal of the (n+1)-block counts (dropping the
/// newest pattern) so the difference is a true conditional entropy; the
/// measure_n argument is cross-checked against that marginal. No small-sample
/// bias correction is applied.
double entropy_rate(const EmpiricalMeasure& measure_n, const EmpiricalMeasure& measure_n1);

/// Plug-in Kullback-Leibler divergence rate of a raster from a normalized
/// reference chain: d = P - mu_emp(psi_ref) - h_emp, with mu_emp(psi_ref)
/// the raster time-average of the reference potential and h_emp the
/// conditional block entropy at the chain's range.
double empirical_kl(const Raster& raster, const StationaryAnalysis& analysis,
                    const GibbsChain& chain);

/// Total-variation distance between the empirical distribution of depth-R
/// words and a chain's stationary measure.
double word_tv_distance(const EmpiricalMeasure& measure, const StationaryAnalysis& analysis);

}  // namespace lifstat

#endif
