#include "lifstat/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lifstat {

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

NetworkParams validate_params(NetworkParams candidate) {
    std::vector<std::string> errors;
    const int n = candidate.n_neurons;
    if (n <= 0) errors.push_back("n_neurons must be positive");
    if (!(candidate.leak >= 0.0 && candidate.leak < 1.0)) errors.push_back("leak must be in [0,1): leak must be < 1");
    if (!(candidate.threshold > 0.0)) errors.push_back("threshold must be positive");
    if (!(candidate.noise_amp > 0.0)) errors.push_back("noise_amp must be positive");
    if (n > 0) {
        if (candidate.weights.size() != static_cast<std::size_t>(n) * n)
            errors.push_back("weights must have n_neurons^2 entries");
        else if (!all_finite(candidate.weights))
            errors.push_back("weights must all be finite");
        if (candidate.inputs.size() != static_cast<std::size_t>(n))
            errors.push_back("inputs must have n_neurons entries");
        else if (!all_finite(candidate.inputs))
            errors.push_back("inputs must all be finite");
    }
    if (!std::isfinite(candidate.leak)) errors.push_back("leak must be finite");
    if (!std::isfinite(candidate.threshold)) errors.push_back("threshold must be finite");
    if (!std::isfinite(candidate.noise_amp)) errors.push_back("noise_amp must be finite");
    if (!errors.empty()) {
        std::string msg = "invalid network parameters:";
        for (const auto& e : errors) msg += " " + e + ";";
        msg.pop_back();
        throw std::invalid_argument(msg);
    }
    return candidate;
}

namespace {

// Minimal section/key-value reader for the params file format.
struct ParamsDoc {
    double gamma = 0.0, theta = 1.0, sigma_b = 1.0;
    int n = 0;
    std::vector<double> weights, inputs;
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

NetworkParams load_params(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("params not found: " + file.string());

    ParamsDoc doc;
    std::string section, line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        if (section == "network") {
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("malformed line in [network]: " + line);
            std::string key = trim(line.substr(0, eq));
            std::string val = trim(line.substr(eq + 1));
            if (key == "gamma") doc.gamma = std::stod(val);
            else if (key == "theta") doc.theta = std::stod(val);
            else if (key == "sigma_b") doc.sigma_b = std::stod(val);
            else if (key == "n") doc.n = std::stoi(val);
            else throw std::runtime_error("unknown key in [network]: " + key);
        } else if (section == "weights" || section == "inputs") {
            std::istringstream vals(line);
            double x;
            auto& dst = (section == "weights") ? doc.weights : doc.inputs;
            while (vals >> x) dst.push_back(x);
            if (!vals.eof()) throw std::runtime_error("non-numeric value in [" + section + "]: " + line);
        } else {
            throw std::runtime_error("content outside a known section: " + line);
        }
    }

    NetworkParams p;
    p.n_neurons = doc.n > 0 ? doc.n : static_cast<int>(doc.inputs.size());
    p.leak = doc.gamma;
    p.threshold = doc.theta;
    p.noise_amp = doc.sigma_b;
    p.weights = std::move(doc.weights);
    p.inputs = std::move(doc.inputs);
    return validate_params(std::move(p));
}

void save_params(const NetworkParams& params, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
    out.precision(17);
    out << "[network]\n"
        << "n = " << params.n_neurons << "\n"
        << "gamma = " << params.leak << "\n"
        << "theta = " << params.threshold << "\n"
        << "sigma_b = " << params.noise_amp << "\n\n[weights]\n";
    for (int i = 0; i < params.n_neurons; ++i) {
        for (int j = 0; j < params.n_neurons; ++j)
            out << params.weight(i, j) << (j + 1 < params.n_neurons ? " " : "");
        out << "\n";
    }
    out << "\n[inputs]\n";
    for (int i = 0; i < params.n_neurons; ++i)
        out << params.inputs[i] << (i + 1 < params.n_neurons ? " " : "\n");
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

}  // namespace lifstat
