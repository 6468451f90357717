#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lifstat/gauss.hpp"
#include "lifstat/simulator.hpp"
#include "test_util.hpp"

using namespace lifstat;

TEST_CASE("gaussian stream follows the pinned recipe") {
    // mt19937_64 + basic Box-Muller, two 53-bit uniforms per pair
    std::mt19937_64 reference(99);
    const double u1 = (static_cast<double>(reference() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(reference() >> 11) * 0x1.0p-53;
    GaussianRng rng(99);
    CHECK(rng.next() == std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2));
    CHECK(rng.next() == std::sqrt(-2.0 * std::log(u1)) * std::sin(2.0 * M_PI * u2));
}

TEST_CASE("noise-free step: pure leak below threshold, reset above") {
    NetworkParams p;
    p.n_neurons = 1;
    p.leak = 0.4;
    p.threshold = 1.0;
    p.noise_amp = 1.0;
    p.weights = {0.0};
    p.inputs = {0.0};
    const std::vector<double> zero_noise = {0.0};

    std::vector<double> v = {0.5};
    SpikingPattern emitted = step_with_noise(v, p, zero_noise);
    CHECK(emitted == 0);
    CHECK(v[0] == doctest::Approx(0.2).epsilon(1e-15));

    v = {1.5};  // above threshold: reset to 0, no leak survives
    emitted = step_with_noise(v, p, zero_noise);
    CHECK(emitted == 1);
    CHECK(v[0] == 0.0);
}

TEST_CASE("spiking neuron feeds synapses and input in the same step") {
    NetworkParams p = test::canonical_pair();
    const std::vector<double> zero_noise = {0.0, 0.0};
    std::vector<double> v = {1.2, 0.5};  // neuron 0 fires
    const SpikingPattern emitted = step_with_noise(v, p, zero_noise);
    CHECK(emitted == 1);
    CHECK(v[0] == doctest::Approx(0.6).epsilon(1e-15));                    // reset + I_0
    CHECK(v[1] == doctest::Approx(0.2 * 0.5 - 0.3 + 0.4).epsilon(1e-15));  // leak + W_10 + I_1
}

TEST_CASE("same seed gives bit-identical output, traces consume no randomness") {
    const NetworkParams p = test::canonical_pair();
    const SimOutput a = run(p, 500, 42, 100, false);
    const SimOutput b = run(p, 500, 42, 100, false);
    const SimOutput c = run(p, 500, 42, 100, true);
    CHECK(a.raster.patterns == b.raster.patterns);
    CHECK(a.raster.patterns == c.raster.patterns);
    CHECK(c.has_traces);
    CHECK(c.traces.size() == 1000);
}

TEST_CASE("raster bits equal Z(V) where traces are kept") {
    const NetworkParams p = test::canonical_pair();
    const SimOutput out = run(p, 2000, 7, 50, true);
    for (long long t = 0; t < 2000; ++t)
        for (int i = 0; i < 2; ++i)
            CHECK(out.raster.bit(i, t) == (out.trace(t, i) >= p.threshold ? 1 : 0));
}

TEST_CASE("first pattern from a cold start is quiet") {
    const NetworkParams p = test::canonical_pair();
    const SimOutput out = run(p, 1, 1, 0, false);
    CHECK(out.raster.patterns[0] == 0);  // V(0) = 0 < theta
}

TEST_CASE("default burn-in scales with the leak time constant") {
    NetworkParams p = test::canonical_pair();
    p.leak = 0.0;
    CHECK(default_burn_in(p) == 10);
    p.leak = 0.9;
    CHECK(default_burn_in(p) == 100);
}

TEST_CASE("run rejects bad requests before starting") {
    const NetworkParams p = test::canonical_pair();
    CHECK_THROWS(run(p, 0, 1));
    CHECK_THROWS_WITH(run(p, 400'000'000, 1, 0, true), doctest::Contains("trace memory"));
}

TEST_CASE("memoryless single neuron fires at the tail rate") {
    NetworkParams p;
    p.n_neurons = 1;
    p.leak = 0.0;
    p.threshold = 1.0;
    p.noise_amp = 1.0;
    p.weights = {0.0};
    p.inputs = {0.0};
    const SimOutput out = run(p, 1'000'000, 2024, 0, false);
    long long spikes = 0;
    for (SpikingPattern a : out.raster.patterns) spikes += a;
    const double rate = static_cast<double>(spikes) / 1e6;
    // pi(1) with a margin of ~5 binomial standard errors
    CHECK(std::abs(rate - gauss_tail(1.0)) < 0.002);
}
