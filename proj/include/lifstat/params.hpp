#ifndef LIFSTAT_PARAMS_HPP
#define LIFSTAT_PARAMS_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace lifstat {

/// Parameters of a discrete-time noisy leaky integrate-and-fire network.
///
/// The network has N neurons coupled by the synaptic weight matrix W
/// (W(i,j) is the potential increment neuron j's spike adds to neuron i),
/// constant external inputs I, a leak rate gamma in [0,1), a firing
/// threshold theta > 0 and a noise amplitude sigma_B > 0.
struct NetworkParams {
    int n_neurons = 0;
    std::vector<double> weights;  // row-major N x N, weights[i*N + j] = W(i,j)
    std::vector<double> inputs;   // length N
    double leak = 0.0;            // gamma
    double threshold = 1.0;       // theta
    double noise_amp = 1.0;       // sigma_B

    double weight(int i, int j) const { return weights[static_cast<std::size_t>(i) * n_neurons + j]; }
    double& weight(int i, int j) { return weights[static_cast<std::size_t>(i) * n_neurons + j]; }
};

/// Checks every model invariant (0 <= gamma < 1, theta > 0, sigma_B > 0,
/// finite weights and inputs, consistent sizes) and returns the parameters
/// unchanged if all hold. Throws std::invalid_argument whose message lists
/// every violated invariant by field name.
NetworkParams validate_params(NetworkParams candidate);

/// Reads a parameter file: a flat key/value document with sections
/// [network] (n, gamma, theta, sigma_b), [weights] (row-major list of N*N
/// reals) and [inputs] (N reals). The result is validated.
NetworkParams load_params(const std::filesystem::path& file);

/// Writes the parameter file format read by load_params.
void save_params(const NetworkParams& params, const std::filesystem::path& file);

}  // namespace lifstat

#endif
