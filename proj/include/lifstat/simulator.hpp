#ifndef LIFSTAT_SIMULATOR_HPP
#define LIFSTAT_SIMULATOR_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "lifstat/params.hpp"
#include "lifstat/raster.hpp"

namespace lifstat {

/// Deterministic standard-normal generator: mersenne twister (mt19937_64,
/// whose output sequence is fixed by the standard) driving a basic
/// Box-Muller transform. Each pair of normals consumes exactly two 53-bit
/// uniforms, so streams are reproducible bit-for-bit across platforms.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    double next();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// State of one simulation run.
struct SimState {
    std::vector<double> potentials;  // V
    long long time = 0;
    GaussianRng rng;
};

struct SimOutput {
    Raster raster;
    std::vector<double> traces;  // T x N row-major membrane potentials, empty unless requested
    bool has_traces = false;

    double trace(long long t, int i) const {
        return traces[static_cast<std::size_t>(t - raster.start_time) * raster.n_neurons + i];
    }
};

/// V(0) = 0 at time 0 with a freshly seeded generator.
SimState init_state(const NetworkParams& params, std::uint64_t seed);

/// The deterministic map F of the dynamics:
///   F_i(V) = gamma V_i (1 - Z(V_i)) + sum_j W_ij Z(V_j) + I_i,
/// with Z(x) = 1(x >= theta). Exposed separately so tests can drive the
/// noise-free flow.
void lif_drift(std::span<const double> v, const NetworkParams& params, std::span<double> out);

/// Firing states Z(V) packed into a pattern.
SpikingPattern firing_pattern(std::span<const double> v, const NetworkParams& params);

/// One synchronous update with an explicit noise vector:
/// emits Z(V(t)), then V(t+1) = F(V(t)) + sigma_B * noise.
SpikingPattern step_with_noise(std::vector<double>& v, const NetworkParams& params,
                               std::span<const double> noise);

/// One update drawing the noise from the state's generator.
SpikingPattern step(SimState& state, const NetworkParams& params);

/// Runs the dynamics from V(0)=0 for burn_in + steps updates and records the
/// last `steps` patterns as a raster starting at time 0 (and the matching
/// membrane potentials when keep_traces is set). burn_in < 0 selects the
/// default 10*ceil(1/(1-gamma)). Trace memory above ~2 GiB is rejected
/// before the run starts.
SimOutput run(const NetworkParams& params, long long steps, std::uint64_t seed,
              long long burn_in = -1, bool keep_traces = false);

long long default_burn_in(const NetworkParams& params);

}  // namespace lifstat

#endif
