#ifndef LIFSTAT_RASTER_HPP
#define LIFSTAT_RASTER_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

namespace lifstat {

/// One spiking pattern: the firing states of all N neurons at a single time
/// step, packed into the low N bits (neuron k at bit k, 0-based).
using SpikingPattern = std::uint32_t;

constexpr int kMaxNeurons = 32;

/// A block of consecutive spiking patterns omega(s) ... omega(t).
///
/// Times are signed so that histories ending at -1 and rasters starting at 0
/// share this one type; a raster is simply a block with its start time.
struct SpikeBlock {
    int n_neurons = 0;
    long long start_time = 0;  // time index of patterns.front()
    std::vector<SpikingPattern> patterns;

    long long end_time() const { return start_time + static_cast<long long>(patterns.size()) - 1; }
    int length() const { return static_cast<int>(patterns.size()); }

    /// Firing state of neuron i (0-based) at absolute time t.
    int bit(int neuron, long long t) const {
        return (patterns[static_cast<std::size_t>(t - start_time)] >> neuron) & 1u;
    }
    SpikingPattern pattern_at(long long t) const { return patterns[static_cast<std::size_t>(t - start_time)]; }

    /// The sub-block covering absolute times s..t (inclusive).
    SpikeBlock slice(long long s, long long t) const;
};

using Raster = SpikeBlock;

/// Integer encoding of a depth-R spike block: the state of the range-R chain.
/// Neuron i (0-based) at the k-th pattern (k=0 earliest) sits at bit i + k*N,
/// so the earliest pattern occupies the lowest N bits.
struct Word {
    std::uint64_t value = 0;
    int n_neurons = 0;
    int range = 0;
};

/// Encodes a block of length R into its word. Throws std::invalid_argument
/// if N*R exceeds 63 bits.
Word encode_block(const SpikeBlock& block);

/// Inverse of encode_block; the resulting block spans start_time..start_time+R-1
/// (default: a history ending at -1). Throws on an out-of-range value.
SpikeBlock decode_word(const Word& w, long long start_time);
SpikeBlock decode_word(const Word& w);

/// True iff the transition w_prev -> w_next is legal: the two words overlap
/// on R-1 patterns, i.e. (w_prev >> N) == (w_next mod 2^(N(R-1))).
/// For R=1 the overlap is empty and every transition is legal.
bool follows(const Word& w_prev, const Word& w_next);

/// Last firing time of a neuron in the block: max{k : omega_i(k)=1}, or the
/// block's start time when the neuron never fires in it (which also covers
/// a spike exactly at the start -- the two cases are deliberately conflated).
long long last_firing_time(const SpikeBlock& block, int neuron);

/// Raster text format: header "N=<n> T=<len> t0=<start>", then one line per
/// time step of N characters '0'/'1', neuron 1 leftmost.
void write_raster(const Raster& raster, const std::filesystem::path& file);
Raster read_raster(const std::filesystem::path& file);

}  // namespace lifstat

#endif
