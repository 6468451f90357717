#include "lifstat/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lifstat {

std::uint64_t Monomial::mask(int n_neurons, int range) const {
    std::uint64_t m = 0;
    for (const auto& [neuron, offset] : pairs) {
        if (neuron < 0 || neuron >= n_neurons)
            throw std::invalid_argument("monomial: neuron index out of range");
        if (offset > 0 || offset < -range)
            throw std::invalid_argument("monomial: time offset out of range");
        m |= std::uint64_t{1} << (neuron + (offset + range) * n_neurons);
    }
    return m;
}

Monomial Monomial::anchored() const {
    if (pairs.empty()) return *this;
    int latest = std::numeric_limits<int>::min();
    for (const auto& [neuron, offset] : pairs) latest = std::max(latest, offset);
    Monomial out;
    out.pairs.reserve(pairs.size());
    for (const auto& [neuron, offset] : pairs) out.pairs.emplace_back(neuron, offset - latest);
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

int eval_monomial(const Monomial& m, const SpikeBlock& block) {
    const int depth = block.length() - 1;
    for (const auto& [neuron, offset] : m.pairs) {
        if (offset > 0 || offset < -depth)
            throw std::invalid_argument("eval_monomial: offset outside block");
        if (!block.bit(neuron, block.end_time() + offset)) return 0;
    }
    return 1;
}

double UpletPotential::evaluate(std::uint64_t block_word, int n_neurons) const {
    double psi = 0.0;
    for (const auto& [monomial, coef] : terms) {
        const std::uint64_t m = monomial.mask(n_neurons, range);
        if ((block_word & m) == m) psi += coef;
    }
    return psi;
}

UpletPotential block_to_uplet(const GibbsChain& chain) {
    const int n = chain.n_neurons;
    const int bits = n * (chain.range + 1);
    if (bits > 24) throw std::runtime_error("block_to_uplet: block space too large");

    // Collect psi indexed by block word, then Moebius-transform over the
    // subset lattice: lambda_S = sum_{T subseteq S} (-1)^(|S|-|T|) alpha_T.
    std::vector<double> coef(std::size_t{1} << bits);
    for (std::uint64_t w = 0; w < chain.n_words(); ++w)
        for (std::uint32_t a = 0; a < chain.n_patterns(); ++a)
            coef[chain.block_word(w, a)] = chain.log_prob(w, a);
    for (int b = 0; b < bits; ++b)
        for (std::uint64_t s = 0; s < coef.size(); ++s)
            if (s & (std::uint64_t{1} << b)) coef[s] -= coef[s ^ (std::uint64_t{1} << b)];

    UpletPotential pot;
    pot.range = chain.range;
    for (std::uint64_t s = 0; s < coef.size(); ++s) {
        if (coef[s] == 0.0 && s != 0) continue;
        Monomial m;
        for (int b = 0; b < bits; ++b)
            if (s & (std::uint64_t{1} << b))
                m.pairs.emplace_back(b % n, b / n - chain.range);
        pot.terms.emplace_back(std::move(m), coef[s]);
    }
    return pot;
}

GibbsChain chain_from_potential(const UpletPotential& pot, int n_neurons) {
    int depth = 0;
    for (const auto& [monomial, coef] : pot.terms)
        for (const auto& [neuron, offset] : monomial.pairs) depth = std::max(depth, -offset);
    const int range = std::max(1, depth);

    GibbsChain chain;
    chain.n_neurons = n_neurons;
    chain.range = range;
    chain.normalized = false;
    if (n_neurons * range > max_state_bits())
        throw std::runtime_error("chain_from_potential: state space exceeds cap");
    chain.log_probs.assign(chain.n_words() * chain.n_patterns(), 0.0);

    std::vector<std::pair<std::uint64_t, double>> masked;
    masked.reserve(pot.terms.size());
    for (const auto& [monomial, coef] : pot.terms)
        masked.emplace_back(monomial.mask(n_neurons, range), coef);

    for (std::uint64_t w = 0; w < chain.n_words(); ++w) {
        for (std::uint32_t a = 0; a < chain.n_patterns(); ++a) {
            const std::uint64_t block = chain.block_word(w, a);
            double psi = 0.0;
            for (const auto& [mask, coef] : masked)
                if ((block & mask) == mask) psi += coef;
            chain.log_probs[w * chain.n_patterns() + a] = psi;
        }
    }
    return chain;
}

std::vector<double> expectations(const GibbsChain& chain, const StationaryAnalysis& analysis,
                                 std::span<const Monomial> monomials) {
    std::vector<std::uint64_t> masks;
    masks.reserve(monomials.size());
    for (const auto& m : monomials) masks.push_back(m.mask(chain.n_neurons, chain.range));

    std::vector<double> values(monomials.size(), 0.0);
    for (std::uint64_t w = 0; w < chain.n_words(); ++w) {
        for (std::uint32_t a = 0; a < chain.n_patterns(); ++a) {
            const double pb = analysis.block_prob(chain, w, a);
            if (pb == 0.0) continue;
            const std::uint64_t block = chain.block_word(w, a);
            for (std::size_t l = 0; l < masks.size(); ++l)
                if ((block & masks[l]) == masks[l]) values[l] += pb;
        }
    }
    return values;
}

std::vector<double> expectations(const UpletPotential& pot, std::span<const Monomial> monomials,
                                 int n_neurons) {
    const GibbsChain chain = chain_from_potential(pot, n_neurons);
    const StationaryAnalysis analysis = stationary(chain);
    return expectations(chain, analysis, monomials);
}

namespace {

UpletPotential assemble_potential(std::span<const Monomial> monomials,
                                  std::span<const double> lambda, int range) {
    UpletPotential pot;
    pot.range = range;
    pot.terms.reserve(monomials.size());
    for (std::size_t l = 0; l < monomials.size(); ++l)
        pot.terms.emplace_back(monomials[l], lambda[l]);
    return pot;
}

}  // namespace

FitResult fit(std::span<const double> targets, std::span<const Monomial> monomials, int n_neurons,
              int range, const FitOptions& options) {
    if (targets.size() != monomials.size())
        throw std::invalid_argument("fit: targets and monomials must have equal length");
    for (std::size_t l = 0; l < targets.size(); ++l) {
        if (!monomials[l].pairs.empty() && (targets[l] <= 0.0 || targets[l] >= 1.0)) {
            std::ostringstream msg;
            msg << "fit: boundary target " << targets[l] << " for monomial " << l
                << " (multipliers diverge at 0 or 1)";
            throw std::invalid_argument(msg.str());
        }
    }

    const std::size_t dim = monomials.size();
    std::vector<double> lambda(dim, 0.0);

    // One evaluation of the dual objective P(lambda) - <lambda, C> and its
    // exact gradient mu_lambda(phi) - C.
    auto evaluate = [&](const std::vector<double>& lam, std::vector<double>& grad,
                        std::vector<double>& mu, double& pressure) {
        const UpletPotential pot = assemble_potential(monomials, lam, range);
        const GibbsChain chain = chain_from_potential(pot, n_neurons);
        const StationaryAnalysis analysis = stationary(chain);
        mu = expectations(chain, analysis, monomials);
        pressure = analysis.pressure;
        double dual = pressure;
        grad.resize(dim);
        for (std::size_t l = 0; l < dim; ++l) {
            grad[l] = mu[l] - targets[l];
            dual -= lam[l] * targets[l];
        }
        return dual;
    };

    std::vector<double> grad, mu, trial_grad, trial_mu;
    double pressure = 0.0;
    double dual = evaluate(lambda, grad, mu, pressure);

    FitResult best;
    best.residual = std::numeric_limits<double>::infinity();
    double step = 1.0;
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        double grad_inf = 0.0, grad_sq = 0.0;
        for (double g : grad) {
            grad_inf = std::max(grad_inf, std::abs(g));
            grad_sq += g * g;
        }
        if (grad_inf < best.residual) {
            best.residual = grad_inf;
            best.potential = assemble_potential(monomials, lambda, range);
            best.pressure = pressure;
            best.achieved = mu;
        }
        if (grad_inf <= options.tolerance) {
            best.converged = true;
            break;
        }
        for (double l : lambda)
            if (std::abs(l) > options.lambda_cap)
                throw std::runtime_error("fit: multiplier diverged, target on boundary of realizable set");

        // Backtracking line search on the convex dual.
        std::vector<double> trial(dim);
        double trial_dual = std::numeric_limits<double>::infinity();
        double trial_pressure = 0.0;
        bool accepted = false;
        const double slack = 1e-15 * (1.0 + std::abs(dual));  // roundoff floor near the optimum
        for (int halvings = 0; halvings < 60; ++halvings) {
            for (std::size_t l = 0; l < dim; ++l) trial[l] = lambda[l] - step * grad[l];
            trial_dual = evaluate(trial, trial_grad, trial_mu, trial_pressure);
            if (trial_dual <= dual - 0.5 * step * grad_sq + slack) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            throw std::runtime_error("fit: line search failed to make progress");
        lambda.swap(trial);
        grad.swap(trial_grad);
        mu.swap(trial_mu);
        dual = trial_dual;
        pressure = trial_pressure;
        step *= 1.5;
    }
    best.iterations = iter;
    return best;
}

double model_divergence(const StationaryAnalysis& reference, const GibbsChain& reference_chain,
                        const UpletPotential& fitted) {
    const int n = reference_chain.n_neurons;
    const GibbsChain test_chain = chain_from_potential(fitted, n);
    const StationaryAnalysis test_analysis = stationary(test_chain);
    const double test_pressure = test_analysis.pressure;

    const int m = std::max(reference_chain.range, test_chain.range);
    const std::uint64_t ref_mask = (std::uint64_t{1} << (n * reference_chain.range)) - 1;
    const std::uint32_t pattern_mask = reference_chain.n_patterns() - 1;
    const int shift = n * (m - test_chain.range);

    std::vector<std::pair<std::uint64_t, double>> masked;
    masked.reserve(fitted.terms.size());
    for (const auto& [monomial, coef] : fitted.terms)
        masked.emplace_back(monomial.mask(n, test_chain.range), coef);

    // mu_ref(psi_test) over (m+1)-pattern blocks, extending the reference
    // measure by Chapman-Kolmogorov when m exceeds its range.
    double mu_psi_test = 0.0;
    const std::uint64_t n_blocks = std::uint64_t{1} << (n * (m + 1));
    for (std::uint64_t block = 0; block < n_blocks; ++block) {
        std::uint64_t w = block & ref_mask;
        double p = reference.left_vec[w];
        for (int k = reference_chain.range; k <= m; ++k) {
            const std::uint32_t a = static_cast<std::uint32_t>(block >> (n * k)) & pattern_mask;
            p *= std::exp(reference_chain.log_prob(w, a) - reference.pressure);
            w = reference_chain.successor(w, a);
        }
        p *= reference.right_vec[w];
        if (p == 0.0) continue;
        const std::uint64_t tail = block >> shift;
        double psi = 0.0;
        for (const auto& [mask, coef] : masked)
            if ((tail & mask) == mask) psi += coef;
        mu_psi_test += p * psi;
    }
    return test_pressure - mu_psi_test - reference.entropy;
}

std::vector<Monomial> bernoulli_monomials(int n_neurons) {
    std::vector<Monomial> out;
    out.reserve(static_cast<std::size_t>(n_neurons));
    for (int i = 0; i < n_neurons; ++i) out.push_back(Monomial{{{i, 0}}});
    return out;
}

std::vector<Monomial> pairwise_monomials(int n_neurons) {
    std::vector<Monomial> out = bernoulli_monomials(n_neurons);
    for (int i = 0; i < n_neurons; ++i)
        for (int j = i + 1; j < n_neurons; ++j) out.push_back(Monomial{{{i, 0}, {j, 0}}});
    return out;
}

void write_potential(const UpletPotential& pot, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
    out.precision(17);
    for (const auto& [monomial, coef] : pot.terms) {
        out << "lambda " << coef;
        for (const auto& [neuron, offset] : monomial.pairs)
            out << " (" << neuron + 1 << "," << offset << ")";
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

UpletPotential read_potential(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("potential file not found: " + file.string());
    UpletPotential pot;
    std::string line;
    int depth = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string keyword;
        double coef = 0.0;
        if (!(fields >> keyword >> coef) || keyword != "lambda")
            throw std::runtime_error("bad potential line: " + line);
        Monomial m;
        std::string pair_text;
        while (fields >> pair_text) {
            int neuron = 0, offset = 0;
            if (std::sscanf(pair_text.c_str(), "(%d,%d)", &neuron, &offset) != 2 || neuron < 1)
                throw std::runtime_error("bad monomial pair: " + pair_text);
            m.pairs.emplace_back(neuron - 1, offset);
            depth = std::max(depth, -offset);
        }
        std::sort(m.pairs.begin(), m.pairs.end());
        pot.terms.emplace_back(std::move(m), coef);
    }
    pot.range = depth;
    return pot;
}

}  // namespace lifstat
