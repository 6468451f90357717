#include "lifstat/chain.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lifstat/gauss.hpp"
#include "lifstat/kernel.hpp"

namespace lifstat {

double GibbsChain::prob(std::uint64_t w, std::uint32_t a) const {
    return std::exp(log_prob(w, a));
}

int max_state_bits() {
    if (const char* env = std::getenv("LIFSTAT_MAX_STATE_BITS")) {
        const int bits = std::atoi(env);
        if (bits >= 1 && bits <= 40) return bits;
    }
    return 20;
}

GibbsChain build_chain(const NetworkParams& params, int range) {
    const int n = params.n_neurons;
    if (range < 1) throw std::invalid_argument("build_chain: range must be >= 1");
    const int bits = n * range;
    const int cap = max_state_bits();
    if (bits > cap) {
        std::ostringstream msg;
        msg << "build_chain: state space needs " << bits << " bits ("
            << (std::pow(2.0, bits + n) * sizeof(double) / (1024.0 * 1024.0))
            << " MiB of transition storage), cap is " << cap
            << " bits (LIFSTAT_MAX_STATE_BITS)";
        throw std::runtime_error(msg.str());
    }

    GibbsChain chain;
    chain.n_neurons = n;
    chain.range = range;
    chain.normalized = true;
    const std::uint64_t words = chain.n_words();
    const std::uint32_t patterns = chain.n_patterns();
    chain.log_probs.resize(words * patterns);

    std::vector<double> log_fire(static_cast<std::size_t>(n));
    std::vector<double> log_quiet(static_cast<std::size_t>(n));
    for (std::uint64_t w = 0; w < words; ++w) {
        const SpikeBlock history = decode_word(Word{w, n, range});
        const auto y = threshold_scores(conditional_moments(history, params), params);
        for (int i = 0; i < n; ++i) {
            log_fire[static_cast<std::size_t>(i)] = log_gauss_tail(y[static_cast<std::size_t>(i)]);
            log_quiet[static_cast<std::size_t>(i)] = log_gauss_tail(-y[static_cast<std::size_t>(i)]);
        }
        for (std::uint32_t a = 0; a < patterns; ++a) {
            double psi = 0.0;
            for (int i = 0; i < n; ++i)
                psi += ((a >> i) & 1u) ? log_fire[static_cast<std::size_t>(i)]
                                       : log_quiet[static_cast<std::size_t>(i)];
            chain.log_probs[w * patterns + a] = psi;
        }
    }
    return chain;
}

void write_chain(const GibbsChain& chain, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
    out.precision(17);
    out << "N=" << chain.n_neurons << " R=" << chain.range
        << " normalized=" << (chain.normalized ? 1 : 0) << "\n";
    for (std::uint64_t w = 0; w < chain.n_words(); ++w)
        for (std::uint32_t a = 0; a < chain.n_patterns(); ++a)
            out << w << " " << chain.successor(w, a) << " " << chain.log_prob(w, a) << "\n";
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

GibbsChain read_chain(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("chain file not found: " + file.string());
    std::string header;
    std::getline(in, header);
    GibbsChain chain;
    int norm = 1;
    if (std::sscanf(header.c_str(), "N=%d R=%d normalized=%d", &chain.n_neurons, &chain.range, &norm) != 3)
        throw std::runtime_error("bad chain header: " + header);
    chain.normalized = norm != 0;
    if (chain.n_neurons < 1 || chain.range < 1 || chain.n_neurons * chain.range > 62)
        throw std::runtime_error("bad chain dimensions: " + header);
    chain.log_probs.assign(chain.n_words() * chain.n_patterns(),
                           -std::numeric_limits<double>::infinity());
    std::uint64_t w = 0, succ = 0;
    double lp = 0.0;
    while (in >> w >> succ >> lp) {
        if (w >= chain.n_words()) throw std::runtime_error("chain entry out of range");
        // Recover the appended pattern from the successor word.
        const std::uint32_t a = static_cast<std::uint32_t>(succ >> (chain.n_neurons * (chain.range - 1)));
        if (chain.successor(w, a) != succ) throw std::runtime_error("non-legal transition in chain file");
        chain.log_probs[w * chain.n_patterns() + a] = lp;
    }
    return chain;
}

}  // namespace lifstat
