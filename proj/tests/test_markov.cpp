#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "lifstat/chain.hpp"
#include "lifstat/gauss.hpp"
#include "lifstat/kernel.hpp"
#include "lifstat/stationary.hpp"
#include "test_util.hpp"

using namespace lifstat;

TEST_CASE("two-state chain entries come from the tail of the conditional law") {
    NetworkParams p;
    p.n_neurons = 1;
    p.leak = 0.0;
    p.threshold = 1.0;
    p.noise_amp = 0.8;
    p.weights = {0.5};
    p.inputs = {0.3};
    const GibbsChain chain = build_chain(p, 1);
    const double spike_after_quiet = gauss_tail((1.0 - 0.3) / 0.8);
    const double spike_after_spike = gauss_tail((1.0 - 0.8) / 0.8);
    CHECK(chain.prob(0, 1) == doctest::Approx(spike_after_quiet).epsilon(1e-14));
    CHECK(chain.prob(0, 0) == doctest::Approx(1.0 - spike_after_quiet).epsilon(1e-14));
    CHECK(chain.prob(1, 1) == doctest::Approx(spike_after_spike).epsilon(1e-14));
    CHECK(chain.prob(1, 0) == doctest::Approx(1.0 - spike_after_spike).epsilon(1e-14));
}

TEST_CASE("rows of a built chain sum to one") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 2);
        const int r = 1 + static_cast<int>(rng() % 3);
        const GibbsChain chain = build_chain(test::draw_params(rng, n), r);
        for (std::uint64_t w = 0; w < chain.n_words(); ++w) {
            double sum = 0.0;
            for (std::uint32_t a = 0; a < chain.n_patterns(); ++a) sum += chain.prob(w, a);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("with W=0 rows depend only on the last firing times") {
    NetworkParams p;
    p.n_neurons = 1;
    p.leak = 0.6;
    p.threshold = 1.0;
    p.noise_amp = 1.0;
    p.weights = {0.0};
    p.inputs = {0.5};
    const GibbsChain chain = build_chain(p, 3);
    // words 0b001, 0b011, 0b101, 0b111 all have tau at the latest slot... no:
    // spikes live at distinct positions; words sharing the position of the
    // most recent spike share their row.
    auto tau_of = [&](std::uint64_t w) {
        const SpikeBlock b = decode_word(Word{w, 1, 3});
        return last_firing_time(b, 0);
    };
    for (std::uint64_t w1 = 0; w1 < 8; ++w1)
        for (std::uint64_t w2 = 0; w2 < 8; ++w2) {
            if (tau_of(w1) != tau_of(w2)) continue;
            for (std::uint32_t a = 0; a < 2; ++a)
                CHECK(chain.log_prob(w1, a) == chain.log_prob(w2, a));
        }
}

TEST_CASE("build_chain enforces range and cap") {
    const NetworkParams p = test::canonical_pair();
    CHECK_THROWS(build_chain(p, 0));
    CHECK_THROWS_WITH(build_chain(p, 30), doctest::Contains("cap"));
}

TEST_CASE("incidence structure is primitive with power R+1") {
    std::mt19937_64 rng(9);
    for (const auto& [n, r] : {std::pair{1, 2}, {2, 2}, {1, 3}, {3, 1}}) {
        const GibbsChain chain = build_chain(test::draw_params(rng, n), r);
        const std::size_t words = chain.n_words();
        std::vector<std::vector<bool>> reach(words, std::vector<bool>(words, false));
        for (std::uint64_t w = 0; w < words; ++w) reach[w][w] = true;
        for (int power = 0; power < r + 1; ++power) {
            std::vector<std::vector<bool>> next(words, std::vector<bool>(words, false));
            for (std::uint64_t w = 0; w < words; ++w)
                for (std::uint64_t v = 0; v < words; ++v) {
                    if (!reach[w][v]) continue;
                    for (std::uint32_t a = 0; a < chain.n_patterns(); ++a)
                        next[w][chain.successor(v, a)] = true;
                }
            reach.swap(next);
        }
        for (std::uint64_t w = 0; w < words; ++w)
            for (std::uint64_t v = 0; v < words; ++v) CHECK(reach[w][v]);
    }
}

TEST_CASE("stationary measure of a two-state chain matches the closed form") {
    NetworkParams p;
    p.n_neurons = 1;
    p.leak = 0.0;
    p.threshold = 1.0;
    p.noise_amp = 0.9;
    p.weights = {0.4};
    p.inputs = {0.2};
    const GibbsChain chain = build_chain(p, 1);
    const StationaryAnalysis analysis = stationary(chain);
    const double fire_rate = chain.prob(0, 1);       // p: quiet -> spike
    const double stay_rate = chain.prob(1, 1);       // q: spike -> spike
    const double denom = 1.0 - stay_rate + fire_rate;
    CHECK(analysis.measure[0] == doctest::Approx((1.0 - stay_rate) / denom).epsilon(1e-12));
    CHECK(analysis.measure[1] == doctest::Approx(fire_rate / denom).epsilon(1e-12));
    CHECK(analysis.rates[0] == doctest::Approx(fire_rate / denom).epsilon(1e-10));
}

TEST_CASE("normalized chains have zero pressure and a constant right eigenvector") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const int r = 1 + static_cast<int>(rng() % (n == 1 ? 4 : 2));
        const GibbsChain chain = build_chain(test::draw_params(rng, n), r);
        const StationaryAnalysis analysis = stationary(chain);
        CHECK(std::abs(analysis.pressure) <= 1e-10);
        for (double rv : analysis.right_vec)
            CHECK(rv == doctest::Approx(analysis.right_vec[0]).epsilon(1e-10));
        double total = 0.0;
        for (double mu : analysis.measure) {
            CHECK(mu >= 0.0);
            total += mu;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(analysis.entropy > 0.0);
    }
}

TEST_CASE("stationary measure is shift-consistent") {
    const GibbsChain chain = build_chain(test::canonical_pair(), 3);
    const StationaryAnalysis analysis = stationary(chain);
    std::vector<double> pushed(chain.n_words(), 0.0);
    for (std::uint64_t w = 0; w < chain.n_words(); ++w)
        for (std::uint32_t a = 0; a < chain.n_patterns(); ++a)
            pushed[chain.successor(w, a)] += analysis.measure[w] * chain.prob(w, a);
    for (std::uint64_t w = 0; w < chain.n_words(); ++w)
        CHECK(pushed[w] == doctest::Approx(analysis.measure[w]).epsilon(1e-10));
}

TEST_CASE("fair chain entropy is N log 2") {
    NetworkParams p;
    p.n_neurons = 2;
    p.leak = 0.0;
    p.threshold = 1.0;
    p.noise_amp = 1.0;
    p.weights = {0.0, 0.0, 0.0, 0.0};
    p.inputs = {1.0, 1.0};  // theta - C = 0 for every history
    const StationaryAnalysis analysis = stationary(build_chain(p, 2));
    CHECK(analysis.entropy == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(analysis.rates[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("entropy matches the explicit Bernoulli-like form") {
    const NetworkParams p = test::canonical_pair();
    const GibbsChain chain = build_chain(p, 3);
    const StationaryAnalysis analysis = stationary(chain);
    double h = 0.0;
    for (std::uint64_t w = 0; w < chain.n_words(); ++w) {
        const SpikeBlock history = decode_word(Word{w, 2, 3});
        const auto y = threshold_scores(conditional_moments(history, p), p);
        for (int i = 0; i < 2; ++i) {
            const double ri = gauss_tail(y[static_cast<std::size_t>(i)]);
            h -= analysis.measure[w] *
                 (ri * std::log(ri) + (1.0 - ri) * std::log1p(-ri));
        }
    }
    CHECK(analysis.entropy == doctest::Approx(h).epsilon(1e-10));
}

TEST_CASE("rates equal the measure average of the conditional rate") {
    const NetworkParams p = test::canonical_pair();
    const GibbsChain chain = build_chain(p, 3);
    const StationaryAnalysis analysis = stationary(chain);
    std::vector<double> expected(2, 0.0);
    for (std::uint64_t w = 0; w < chain.n_words(); ++w) {
        const SpikeBlock history = decode_word(Word{w, 2, 3});
        const auto y = threshold_scores(conditional_moments(history, p), p);
        for (int i = 0; i < 2; ++i)
            expected[static_cast<std::size_t>(i)] +=
                analysis.measure[w] * gauss_tail(y[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < 2; ++i)
        CHECK(analysis.rates[static_cast<std::size_t>(i)] ==
              doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-10));
}

TEST_CASE("block probabilities: base case, normalization, marginal oracle") {
    const NetworkParams p = test::canonical_single();
    const GibbsChain chain = build_chain(p, 2);
    const StationaryAnalysis analysis = stationary(chain);

    // length exactly R: the word measure itself
    for (std::uint64_t w = 0; w < 4; ++w)
        CHECK(block_probability(analysis, chain, decode_word(Word{w, 1, 2})) ==
              doctest::Approx(analysis.measure[w]).epsilon(1e-12));

    // all blocks of a fixed length sum to one
    for (int len = 2; len <= 5; ++len) {
        double sum = 0.0;
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << len); ++b)
            sum += block_probability(analysis, chain, decode_word(Word{b, 1, len}));
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }

    // brute-force path-sum oracle: marginalize over the R patterns that
    // precede the block instead of anchoring on its first word
    for (std::uint64_t b = 0; b < 16; ++b) {
        const SpikeBlock block = decode_word(Word{b, 1, 4});
        double oracle = 0.0;
        for (std::uint64_t boundary = 0; boundary < 4; ++boundary) {
            double path = analysis.measure[boundary];
            std::uint64_t w = boundary;
            for (int k = 0; k < 4; ++k) {
                const std::uint32_t a = block.patterns[static_cast<std::size_t>(k)];
                path *= chain.prob(w, a);
                w = chain.successor(w, a);
            }
            oracle += path;
        }
        CHECK(block_probability(analysis, chain, block) == doctest::Approx(oracle).epsilon(1e-12));
    }

    SpikeBlock tooShort;
    tooShort.n_neurons = 1;
    tooShort.start_time = 0;
    tooShort.patterns = {0};
    CHECK_THROWS(block_probability(analysis, chain, tooShort));
}

TEST_CASE("kl divergence: self, memoryless, and decay") {
    NetworkParams p = test::canonical_single();

    // coarse == fine
    const GibbsChain c3 = build_chain(p, 3);
    const StationaryAnalysis a3 = stationary(c3);
    CHECK(std::abs(kl_divergence(a3, c3, c3)) <= 1e-10);

    // gamma = 0: range 1 is already exact
    NetworkParams q = p;
    q.leak = 0.0;
    const GibbsChain f6 = build_chain(q, 6);
    for (int rc = 1; rc <= 3; ++rc) {
        const GibbsChain c = build_chain(q, rc);
        CHECK(std::abs(kl_divergence(stationary(c), c, f6)) <= 1e-10);
    }

    // gamma = 0.4: nonincreasing in the coarse range, below K' gamma^R'
    NetworkParams g = p;
    g.leak = 0.4;
    const GibbsChain fine = build_chain(g, 6);
    const double k_prime = variation_constants(g).k_prime;
    double prev = std::numeric_limits<double>::infinity();
    for (int rc = 1; rc <= 3; ++rc) {
        const GibbsChain coarse = build_chain(g, rc);
        const double d = kl_divergence(stationary(coarse), coarse, fine);
        CHECK(d >= -1e-10);
        CHECK(d <= k_prime * std::pow(g.leak, rc));
        CHECK(d <= prev + 1e-12);
        prev = d;
    }

    CHECK_THROWS(kl_divergence(a3, c3, build_chain(p, 2)));  // coarse > fine
}

TEST_CASE("gibbs ratio bounds straddle one and match a brute-force oracle") {
    const NetworkParams p = test::canonical_single();
    const GibbsChain chain = build_chain(p, 1);
    const StationaryAnalysis analysis = stationary(chain);
    const auto [c1, c2] = gibbs_ratio_bounds(analysis, chain, 4);
    CHECK(c1 > 0.0);
    CHECK(c1 <= 1.0 + 1e-9);
    CHECK(c2 >= 1.0 - 1e-9);

    // independent enumeration: every cylinder length, every boundary word
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int m = 1; m <= 4; ++m) {
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << m); ++b) {
            const SpikeBlock block = decode_word(Word{b, 1, m}, 0);
            const double mu = block_probability(analysis, chain, block);
            for (std::uint64_t boundary = 0; boundary < 2; ++boundary) {
                double sum_psi = 0.0;
                std::uint64_t w = boundary;
                for (int k = 0; k < m; ++k) {
                    sum_psi += chain.log_prob(w, block.patterns[static_cast<std::size_t>(k)]);
                    w = chain.successor(w, block.patterns[static_cast<std::size_t>(k)]);
                }
                const double ratio = mu / std::exp(sum_psi);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
    }
    CHECK(c1 == doctest::Approx(lo).epsilon(1e-12));
    CHECK(c2 == doctest::Approx(hi).epsilon(1e-12));
}

TEST_CASE("membrane density: single-component case and normalization") {
    NetworkParams p;
    p.n_neurons = 1;
    p.leak = 0.0;
    p.threshold = 1.0;
    p.noise_amp = 0.7;
    p.weights = {0.0};
    p.inputs = {0.0};
    const GibbsChain chain = build_chain(p, 1);
    const StationaryAnalysis analysis = stationary(chain);

    std::vector<double> grid;
    for (double v = -6.0; v <= 6.0; v += 0.01) grid.push_back(v);
    const auto density = membrane_density(analysis, chain, p, 0, grid);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double z = grid[g] / 0.7;
        CHECK(density[g] == doctest::Approx(std::exp(log_gauss_pdf(z)) / 0.7).epsilon(1e-12));
    }

    // trapezoid integral over a wide grid reaches 1
    const NetworkParams pc = test::canonical_pair();
    const GibbsChain cc = build_chain(pc, 3);
    const StationaryAnalysis ac = stationary(cc);
    const auto [lo, hi] = drift_envelope(pc);
    const double sigma_max = pc.noise_amp / std::sqrt(1.0 - pc.leak * pc.leak);
    std::vector<double> wide;
    const double a = lo[0] - 8.0 * sigma_max, b = hi[0] + 8.0 * sigma_max;
    const int npts = 4000;
    for (int k = 0; k <= npts; ++k) wide.push_back(a + (b - a) * k / npts);
    const auto rho = membrane_density(ac, cc, pc, 0, wide);
    double integral = 0.0;
    for (int k = 0; k < npts; ++k)
        integral += 0.5 * (rho[static_cast<std::size_t>(k)] + rho[static_cast<std::size_t>(k) + 1]) *
                    (wide[static_cast<std::size_t>(k) + 1] - wide[static_cast<std::size_t>(k)]);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("chain text dump round-trips") {
    const GibbsChain chain = build_chain(test::canonical_pair(), 2);
    const auto file = std::filesystem::temp_directory_path() / "lifstat_chain_test.txt";
    write_chain(chain, file);
    const GibbsChain back = read_chain(file);
    CHECK(back.n_neurons == chain.n_neurons);
    CHECK(back.range == chain.range);
    CHECK(back.normalized == chain.normalized);
    for (std::size_t k = 0; k < chain.log_probs.size(); ++k)
        CHECK(back.log_probs[k] == chain.log_probs[k]);
    std::filesystem::remove(file);
}

TEST_CASE("power iteration reports non-convergence honestly") {
    const GibbsChain chain = build_chain(test::canonical_pair(), 2);
    PowerIterationOptions opts;
    opts.max_iterations = 1;
    try {
        stationary(chain, opts);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.iterations == 1);
        CHECK(e.residual > 0.0);
    }
}
