#ifndef LIFSTAT_MAXENT_HPP
#define LIFSTAT_MAXENT_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "lifstat/chain.hpp"
#include "lifstat/raster.hpp"
#include "lifstat/stationary.hpp"

namespace lifstat {

/// A spike uplet: the product of firing indicators omega_i(t) over a set of
/// (neuron, time-offset) pairs with offsets in {-R..0} and no repeated pair.
/// The empty monomial is the constant 1.
struct Monomial {
    std::vector<std::pair<int, int>> pairs;  // (neuron 0-based, offset <= 0), sorted

    /// Bit mask of the referenced spikes inside an (range+1)-pattern block
    /// word. Throws if an offset does not fit the range.
    std::uint64_t mask(int n_neurons, int range) const;

    /// Canonical form: latest offset anchored at 0 (time-translates of a
    /// monomial have identical stationary expectations).
    Monomial anchored() const;

    bool operator==(const Monomial&) const = default;
};

/// Evaluates the monomial on a block: 1 iff every referenced bit is 1.
/// Offset 0 refers to the block's last pattern.
int eval_monomial(const Monomial& m, const SpikeBlock& block);

/// A linear combination of monomials psi_lambda = sum_l lambda_l phi_l
/// (possibly including the constant term), defining a range-(range+1)
/// potential over blocks of range+1 patterns.
struct UpletPotential {
    int range = 0;  // largest history depth referenced: offsets live in [-range, 0]
    std::vector<std::pair<Monomial, double>> terms;

    double evaluate(std::uint64_t block_word, int n_neurons) const;
};

/// Exact change of basis from the spike-block representation (one potential
/// value alpha per (R+1)-block) to the spike-uplet representation: a Moebius
/// transform over the block bit-lattice. The result reproduces every alpha.
UpletPotential block_to_uplet(const GibbsChain& chain);

/// Chain whose entries are exp(psi_lambda) on legal transitions (not
/// normalized in general). The chain range is max(1, potential range).
GibbsChain chain_from_potential(const UpletPotential& pot, int n_neurons);

/// Stationary expectations mu_lambda(phi_l) of monomials under the Gibbs
/// measure of the potential, via the dominant eigentriple. Equals the
/// pressure gradient dP/dlambda_l.
std::vector<double> expectations(const UpletPotential& pot, std::span<const Monomial> monomials,
                                 int n_neurons);
std::vector<double> expectations(const GibbsChain& chain, const StationaryAnalysis& analysis,
                                 std::span<const Monomial> monomials);

struct FitOptions {
    double tolerance = 1e-8;    // on max |mu_lambda(phi_l) - C_l|
    int max_iterations = 50000;
    double lambda_cap = 60.0;   // divergence detector for unrealizable targets
};

struct FitResult {
    UpletPotential potential;
    double pressure = 0.0;
    std::vector<double> achieved;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Maximum-entropy fit: finds multipliers lambda such that the Gibbs measure
/// of sum_l lambda_l phi_l matches the target expectations, by minimizing the
/// convex dual P(lambda) - sum lambda_l C_l with exact gradients and a
/// backtracking line search. Boundary targets (0 or 1) are rejected up
/// front; a diverging multiplier norm is reported as a target on the
/// boundary of the realizable set.
FitResult fit(std::span<const double> targets, std::span<const Monomial> monomials, int n_neurons,
              int range, const FitOptions& options = {});

/// Kullback-Leibler divergence rate of a fitted potential from a reference
/// chain's stationary measure:
///   d = P(psi_test) - mu_ref(psi_test) - h(mu_ref).
/// Handles fitted ranges different from the reference range by extending
/// block probabilities with Chapman-Kolmogorov.
double model_divergence(const StationaryAnalysis& reference, const GibbsChain& reference_chain,
                        const UpletPotential& fitted);

/// Convenience builders for the two classical model families (offsets all 0).
std::vector<Monomial> bernoulli_monomials(int n_neurons);
std::vector<Monomial> pairwise_monomials(int n_neurons);

/// Potential file format: one line per term,
///   lambda <coef> (i,t) (i,t) ...
/// with 1-based neuron indices and offsets in [-R, 0]; a line with no pairs
/// is the constant term.
void write_potential(const UpletPotential& pot, const std::filesystem::path& file);
UpletPotential read_potential(const std::filesystem::path& file);

}  // namespace lifstat

#endif
