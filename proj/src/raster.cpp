#include "lifstat/raster.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lifstat {

SpikeBlock SpikeBlock::slice(long long s, long long t) const {
    if (s < start_time || t > end_time() || s > t)
        throw std::invalid_argument("slice out of range");
    SpikeBlock out;
    out.n_neurons = n_neurons;
    out.start_time = s;
    out.patterns.assign(patterns.begin() + static_cast<std::ptrdiff_t>(s - start_time),
                        patterns.begin() + static_cast<std::ptrdiff_t>(t - start_time + 1));
    return out;
}

Word encode_block(const SpikeBlock& block) {
    const int n = block.n_neurons;
    const int r = block.length();
    if (r < 1) throw std::invalid_argument("encode_block: empty block");
    if (n < 1 || n > kMaxNeurons) throw std::invalid_argument("encode_block: bad neuron count");
    if (n * r > 63) throw std::invalid_argument("encode_block: N*R exceeds 63 bits");
    std::uint64_t value = 0;
    for (int k = 0; k < r; ++k)
        value |= static_cast<std::uint64_t>(block.patterns[static_cast<std::size_t>(k)]) << (k * n);
    return Word{value, n, r};
}

SpikeBlock decode_word(const Word& w, long long start_time) {
    const int n = w.n_neurons;
    const int r = w.range;
    if (n < 1 || r < 1 || n * r > 63) throw std::invalid_argument("decode_word: bad dimensions");
    if (w.value >> (n * r)) throw std::invalid_argument("decode_word: value out of range");
    SpikeBlock block;
    block.n_neurons = n;
    block.start_time = start_time;
    block.patterns.resize(static_cast<std::size_t>(r));
    const std::uint32_t mask = (n == 32) ? ~0u : ((1u << n) - 1u);
    for (int k = 0; k < r; ++k)
        block.patterns[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(w.value >> (k * n)) & mask;
    return block;
}

SpikeBlock decode_word(const Word& w) { return decode_word(w, -static_cast<long long>(w.range)); }

bool follows(const Word& w_prev, const Word& w_next) {
    if (w_prev.n_neurons != w_next.n_neurons || w_prev.range != w_next.range)
        throw std::invalid_argument("follows: dimension mismatch");
    const int n = w_prev.n_neurons;
    const int r = w_prev.range;
    const std::uint64_t overlap_mask = (static_cast<std::uint64_t>(1) << (n * (r - 1))) - 1;
    return (w_prev.value >> n) == (w_next.value & overlap_mask);
}

long long last_firing_time(const SpikeBlock& block, int neuron) {
    if (neuron < 0 || neuron >= block.n_neurons)
        throw std::invalid_argument("last_firing_time: neuron index out of range");
    for (long long t = block.end_time(); t > block.start_time; --t)
        if (block.bit(neuron, t)) return t;
    return block.start_time;
}

void write_raster(const Raster& raster, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
    out << "N=" << raster.n_neurons << " T=" << raster.length() << " t0=" << raster.start_time << "\n";
    std::string line(static_cast<std::size_t>(raster.n_neurons), '0');
    for (SpikingPattern p : raster.patterns) {
        for (int i = 0; i < raster.n_neurons; ++i)
            line[static_cast<std::size_t>(i)] = ((p >> i) & 1u) ? '1' : '0';
        out << line << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

Raster read_raster(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("raster not found: " + file.string());
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty raster file: " + file.string());
    int n = 0;
    long long t = 0, t0 = 0;
    if (std::sscanf(header.c_str(), "N=%d T=%lld t0=%lld", &n, &t, &t0) != 3)
        throw std::runtime_error("bad raster header: " + header);
    if (n < 1 || n > kMaxNeurons || t < 1) throw std::runtime_error("bad raster dimensions: " + header);
    Raster raster;
    raster.n_neurons = n;
    raster.start_time = t0;
    raster.patterns.reserve(static_cast<std::size_t>(t));
    std::string line;
    while (std::getline(in, line) && static_cast<long long>(raster.patterns.size()) < t) {
        if (line.empty()) continue;
        if (static_cast<int>(line.size()) < n) throw std::runtime_error("short raster line: " + line);
        SpikingPattern p = 0;
        for (int i = 0; i < n; ++i) {
            if (line[static_cast<std::size_t>(i)] == '1') p |= 1u << i;
            else if (line[static_cast<std::size_t>(i)] != '0')
                throw std::runtime_error("bad raster character in line: " + line);
        }
        raster.patterns.push_back(p);
    }
    if (static_cast<long long>(raster.patterns.size()) != t)
        throw std::runtime_error("raster shorter than header length");
    return raster;
}

}  // namespace lifstat
