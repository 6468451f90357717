#include "lifstat/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace lifstat {

EmpiricalMeasure empirical_blocks(const Raster& raster, int block_len) {
    const int n = raster.n_neurons;
    if (block_len < 1) throw std::invalid_argument("empirical_blocks: block_len must be >= 1");
    if (n * block_len > 62) throw std::invalid_argument("empirical_blocks: block encoding exceeds 62 bits");
    if (raster.length() < block_len) throw std::invalid_argument("empirical_blocks: raster too short");

    EmpiricalMeasure m;
    m.n_neurons = n;
    m.block_len = block_len;
    m.total = raster.length() - block_len + 1;

    const std::uint64_t keep = (std::uint64_t{1} << (n * (block_len - 1))) - 1;
    std::uint64_t w = 0;
    for (int k = 0; k < block_len; ++k)
        w |= static_cast<std::uint64_t>(raster.patterns[static_cast<std::size_t>(k)]) << (k * n);
    ++m.counts[w];
    for (std::size_t t = static_cast<std::size_t>(block_len); t < raster.patterns.size(); ++t) {
        w = ((w >> n) & keep) | (static_cast<std::uint64_t>(raster.patterns[t]) << ((block_len - 1) * n));
        ++m.counts[w];
    }
    return m;
}

std::vector<double> empirical_rates(const Raster& raster) {
    const int n = raster.n_neurons;
    if (raster.length() < 1) throw std::invalid_argument("empirical_rates: empty raster");
    std::vector<long long> counts(static_cast<std::size_t>(n), 0);
    for (SpikingPattern p : raster.patterns)
        for (int i = 0; i < n; ++i)
            if ((p >> i) & 1u) ++counts[static_cast<std::size_t>(i)];
    std::vector<double> rates(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        rates[static_cast<std::size_t>(i)] =
            static_cast<double>(counts[static_cast<std::size_t>(i)]) / raster.length();
    return rates;
}

std::vector<double> empirical_pairwise(const Raster& raster, int lag) {
    const int n = raster.n_neurons;
    const long long t_len = raster.length();
    const long long a = std::abs(static_cast<long long>(lag));
    if (t_len < a + 1) throw std::invalid_argument("empirical_pairwise: raster too short for lag");

    std::vector<long long> counts(static_cast<std::size_t>(n) * n, 0);
    for (long long t = 0; t + a < t_len; ++t) {
        const SpikingPattern p0 = raster.patterns[static_cast<std::size_t>(lag >= 0 ? t : t + a)];
        const SpikingPattern p1 = raster.patterns[static_cast<std::size_t>(lag >= 0 ? t + a : t)];
        if (p0 == 0 || p1 == 0) continue;
        for (int i = 0; i < n; ++i) {
            if (!((p0 >> i) & 1u)) continue;
            for (int j = 0; j < n; ++j)
                if ((p1 >> j) & 1u) ++counts[static_cast<std::size_t>(i) * n + j];
        }
    }
    std::vector<double> avg(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
        avg[k] = static_cast<double>(counts[k]) / static_cast<double>(t_len - a);
    return avg;
}

namespace {

double plugin_entropy(const std::unordered_map<std::uint64_t, long long>& counts, long long total) {
    double h = 0.0;
    for (const auto& [word, count] : counts) {
        const double f = static_cast<double>(count) / total;
        h -= f * std::log(f);
    }
    return h;
}

}  // namespace

double entropy_rate(const EmpiricalMeasure& measure_n, const EmpiricalMeasure& measure_n1) {
    if (measure_n1.block_len != measure_n.block_len + 1 || measure_n1.n_neurons != measure_n.n_neurons)
        throw std::invalid_argument("entropy_rate: measures must be consecutive block lengths");
    // n-marginal of the (n+1)-blocks: drop the newest pattern (top bits).
    const std::uint64_t mask =
        (std::uint64_t{1} << (measure_n.n_neurons * measure_n.block_len)) - 1;
    std::unordered_map<std::uint64_t, long long> marginal;
    for (const auto& [word, count] : measure_n1.counts) marginal[word & mask] += count;
    for (const auto& [word, count] : marginal)
        if (measure_n.counts.find(word) == measure_n.counts.end())
            throw std::invalid_argument("entropy_rate: measures disagree (different rasters?)");
    return plugin_entropy(measure_n1.counts, measure_n1.total) -
           plugin_entropy(marginal, measure_n1.total);
}

double empirical_kl(const Raster& raster, const StationaryAnalysis& analysis,
                    const GibbsChain& chain) {
    const int n = chain.n_neurons;
    const int r = chain.range;
    if (raster.n_neurons != n) throw std::invalid_argument("empirical_kl: neuron count mismatch");
    if (raster.length() < r + 1) throw std::invalid_argument("empirical_kl: raster shorter than range+1");

    const std::uint64_t keep = (std::uint64_t{1} << (n * (r - 1))) - 1;
    std::uint64_t w = 0;
    for (int k = 0; k < r; ++k)
        w |= static_cast<std::uint64_t>(raster.patterns[static_cast<std::size_t>(k)]) << (k * n);
    double mu_psi = 0.0;
    long long windows = 0;
    for (std::size_t t = static_cast<std::size_t>(r); t < raster.patterns.size(); ++t) {
        const double psi = chain.log_prob(w, raster.patterns[t]);
        if (!std::isfinite(psi))
            throw std::runtime_error("empirical_kl: reference assigns zero probability to an observed transition");
        mu_psi += psi;
        ++windows;
        w = ((w >> n) & keep) | (static_cast<std::uint64_t>(raster.patterns[t]) << ((r - 1) * n));
    }
    mu_psi /= static_cast<double>(windows);

    const double h_emp = entropy_rate(empirical_blocks(raster, r), empirical_blocks(raster, r + 1));
    return analysis.pressure - mu_psi - h_emp;
}

double word_tv_distance(const EmpiricalMeasure& measure, const StationaryAnalysis& analysis) {
    const std::uint64_t words = analysis.measure.size();
    if ((std::uint64_t{1} << (measure.n_neurons * measure.block_len)) != words)
        throw std::invalid_argument("word_tv_distance: block length does not match chain range");
    double tv = 0.0;
    for (std::uint64_t w = 0; w < words; ++w)
        tv += std::abs(measure.frequency(w) - analysis.measure[w]);
    return 0.5 * tv;
}

}  // namespace lifstat
