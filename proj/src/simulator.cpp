#include "lifstat/simulator.hpp"

#include <cmath>
#include <stdexcept>

namespace lifstat {

double GaussianRng::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // 53-bit uniforms; u1 shifted into (0,1] so log(u1) is always finite.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
}

SimState init_state(const NetworkParams& params, std::uint64_t seed) {
    return SimState{std::vector<double>(static_cast<std::size_t>(params.n_neurons), 0.0), 0,
                    GaussianRng(seed)};
}

void lif_drift(std::span<const double> v, const NetworkParams& params, std::span<double> out) {
    const int n = params.n_neurons;
    for (int i = 0; i < n; ++i) {
        double acc = params.inputs[static_cast<std::size_t>(i)];
        if (v[static_cast<std::size_t>(i)] < params.threshold)
            acc += params.leak * v[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j)
            if (v[static_cast<std::size_t>(j)] >= params.threshold) acc += params.weight(i, j);
        out[static_cast<std::size_t>(i)] = acc;
    }
}

SpikingPattern firing_pattern(std::span<const double> v, const NetworkParams& params) {
    SpikingPattern p = 0;
    for (int i = 0; i < params.n_neurons; ++i)
        if (v[static_cast<std::size_t>(i)] >= params.threshold) p |= 1u << i;
    return p;
}

SpikingPattern step_with_noise(std::vector<double>& v, const NetworkParams& params,
                               std::span<const double> noise) {
    const SpikingPattern emitted = firing_pattern(v, params);
    static thread_local std::vector<double> next;
    next.resize(v.size());
    lif_drift(v, params, next);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = next[i] + params.noise_amp * noise[i];
    return emitted;
}

SpikingPattern step(SimState& state, const NetworkParams& params) {
    static thread_local std::vector<double> noise;
    noise.resize(state.potentials.size());
    for (double& b : noise) b = state.rng.next();
    const SpikingPattern emitted = step_with_noise(state.potentials, params, noise);
    ++state.time;
    return emitted;
}

long long default_burn_in(const NetworkParams& params) {
    return 10 * static_cast<long long>(std::ceil(1.0 / (1.0 - params.leak) - 1e-9));
}

SimOutput run(const NetworkParams& params, long long steps, std::uint64_t seed,
              long long burn_in, bool keep_traces) {
    if (steps < 1) throw std::invalid_argument("run: steps must be >= 1");
    if (burn_in < 0) burn_in = default_burn_in(params);
    const int n = params.n_neurons;
    if (keep_traces) {
        const long long bytes = steps * n * static_cast<long long>(sizeof(double));
        if (bytes > (1LL << 31))
            throw std::runtime_error("run: requested trace memory exceeds 2 GiB");
    }

    SimOutput out;
    out.raster.n_neurons = n;
    out.raster.start_time = 0;
    out.raster.patterns.reserve(static_cast<std::size_t>(steps));
    out.has_traces = keep_traces;
    if (keep_traces) out.traces.reserve(static_cast<std::size_t>(steps * n));

    SimState state = init_state(params, seed);
    for (long long t = 0; t < burn_in; ++t) step(state, params);
    for (long long t = 0; t < steps; ++t) {
        if (keep_traces)
            out.traces.insert(out.traces.end(), state.potentials.begin(), state.potentials.end());
        out.raster.patterns.push_back(step(state, params));
    }
    return out;
}

}  // namespace lifstat
