#ifndef LIFSTAT_CHAIN_HPP
#define LIFSTAT_CHAIN_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "lifstat/params.hpp"
#include "lifstat/raster.hpp"

namespace lifstat {

/// Finite-range Markov approximation of the spike process: states are the
/// 2^(N R) words (depth-R histories) and each word has exactly 2^N legal
/// successors, one per next spiking pattern. Row w stores the potential
/// values psi(w, a) = log P(pattern a | history w); non-legal transitions
/// are implicit zeros.
struct GibbsChain {
    int n_neurons = 0;
    int range = 0;
    bool normalized = true;  // rows sum to 1 (potential of a conditional probability)
    std::vector<double> log_probs;  // [w * 2^N + a]

    std::uint64_t n_words() const { return std::uint64_t{1} << (n_neurons * range); }
    std::uint32_t n_patterns() const { return std::uint32_t{1} << n_neurons; }

    /// The word that follows w when pattern a is appended.
    std::uint64_t successor(std::uint64_t w, std::uint32_t a) const {
        return (w >> n_neurons) | (static_cast<std::uint64_t>(a) << (n_neurons * (range - 1)));
    }
    /// Integer coding of the (R+1)-block obtained by appending a to w.
    std::uint64_t block_word(std::uint64_t w, std::uint32_t a) const {
        return w | (static_cast<std::uint64_t>(a) << (n_neurons * range));
    }
    double log_prob(std::uint64_t w, std::uint32_t a) const {
        return log_probs[w * n_patterns() + a];
    }
    double prob(std::uint64_t w, std::uint32_t a) const;
};

/// Number of state bits (N*R) allowed for chain construction; reads the
/// LIFSTAT_MAX_STATE_BITS environment variable, default 20.
int max_state_bits();

/// Builds the normalized range-R chain of a network: entry (w, a) is
/// exp(psi) of the corresponding (R+1)-block, evaluated from the exact
/// conditional law with the history truncated to depth R. Requires R >= 1
/// and N*R within the state-bit cap (the error reports the memory a larger
/// space would need).
GibbsChain build_chain(const NetworkParams& params, int range);

/// Text dump: header "N=<n> R=<r> normalized=<0|1>", then one line per legal
/// transition "<word> <successor> <log-prob>" in row-major order.
void write_chain(const GibbsChain& chain, const std::filesystem::path& file);
GibbsChain read_chain(const std::filesystem::path& file);

}  // namespace lifstat

#endif
