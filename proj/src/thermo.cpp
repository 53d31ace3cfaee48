#include "fermicycle/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fermicycle/tolerances.hpp"

namespace fermicycle {

namespace {

void require(bool condition, const char* message) {
    if (!condition) throw std::invalid_argument(message);
}

void require_same_dimension(const DiagonalState& state, const LevelSpectrum& spectrum) {
    if (state.size() != spectrum.size())
        throw std::invalid_argument("state and spectrum dimensions do not match");
}

}  // namespace

DiagonalState::DiagonalState(std::vector<double> populations)
    : populations_(std::move(populations)) {
    require(populations_.size() >= 2, "state needs at least two levels");
    double sum = 0.0;
    for (double p : populations_) {
        require(std::isfinite(p), "population must be finite");
        require(p >= 0.0 && p <= 1.0, "population must lie in [0, 1]");
        sum += p;
    }
    require(std::abs(sum - 1.0) <= Tolerances::normalization,
            "populations must sum to 1 within 1e-12");
}

LevelSpectrum::LevelSpectrum(std::vector<double> energies) : energies_(std::move(energies)) {
    require(energies_.size() >= 2, "spectrum needs at least two levels");
    for (double e : energies_) require(std::isfinite(e), "level energy must be finite");
}

Bath::Bath(std::string label, double temperature, double chemical_potential, double coupling)
    : label_(std::move(label)),
      temperature_(temperature),
      chemical_potential_(chemical_potential),
      coupling_(coupling) {
    require(std::isfinite(temperature_) && temperature_ > 0.0,
            "bath temperature must be finite and > 0");
    require(std::isfinite(chemical_potential_), "bath chemical potential must be finite");
    require(std::isfinite(coupling_) && coupling_ > 0.0, "bath coupling must be finite and > 0");
}

double fermi_occupation(double energy, const Bath& bath) {
    const double x = (energy - bath.chemical_potential()) / bath.temperature();
    // 1/(e^x + 1) via the branch whose exponential cannot overflow.
    if (x >= 0.0) {
        const double w = std::exp(-x);
        return w / (1.0 + w);
    }
    return 1.0 / (1.0 + std::exp(x));
}

double shannon_entropy(const DiagonalState& state) {
    double s = 0.0;
    for (double p : state.populations())
        if (p > 0.0) s -= p * std::log(p);
    return s;
}

double mean_energy(const DiagonalState& state, const LevelSpectrum& spectrum) {
    require_same_dimension(state, spectrum);
    double u = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) u += state[i] * spectrum[i];
    return u;
}

double state_hamiltonian_covariance(const DiagonalState& state, const LevelSpectrum& spectrum) {
    require_same_dimension(state, spectrum);
    const double d = static_cast<double>(state.size());
    double mean = 0.0;
    for (double e : spectrum.energies()) mean += e;
    mean /= d;

    double cov = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
        cov += (state[i] - 1.0 / d) * (spectrum[i] - mean);
    return cov;
}

double energy_variance(const DiagonalState& state, const LevelSpectrum& spectrum) {
    require_same_dimension(state, spectrum);
    const double u = mean_energy(state, spectrum);
    double var = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double d = spectrum[i] - u;
        var += state[i] * d * d;
    }
    return var;
}

double relative_entropy(const DiagonalState& state, const DiagonalState& reference) {
    if (state.size() != reference.size())
        throw std::invalid_argument("states have different dimensions");
    double d = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double p = state[i];
        if (p <= 0.0) continue;
        const double q = reference[i];
        if (q <= 0.0)
            throw std::domain_error("relative entropy undefined: reference vanishes on support");
        d += p * std::log(p / q);
    }
    return d;
}

namespace {

std::vector<double> shifted_energies(const LevelSpectrum& spectrum, const Bath& bath,
                                     std::span<const double> occupations) {
    if (!occupations.empty() && occupations.size() != spectrum.size())
        throw std::invalid_argument("occupation numbers and spectrum dimensions do not match");
    std::vector<double> shifted(spectrum.size());
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const double n = occupations.empty() ? 0.0 : occupations[i];
        shifted[i] = spectrum[i] - bath.chemical_potential() * n;
    }
    return shifted;
}

}  // namespace

DiagonalState thermal_state(const LevelSpectrum& spectrum, const Bath& bath) {
    return thermal_state(spectrum, bath, {});
}

DiagonalState thermal_state(const LevelSpectrum& spectrum, const Bath& bath,
                            std::span<const double> occupations) {
    const std::vector<double> shifted = shifted_energies(spectrum, bath, occupations);
    const double lowest = *std::min_element(shifted.begin(), shifted.end());

    std::vector<double> weights(shifted.size());
    double z = 0.0;
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        weights[i] = std::exp(-(shifted[i] - lowest) / bath.temperature());
        z += weights[i];
    }
    for (double& w : weights) w /= z;
    return DiagonalState(std::move(weights));
}

double nonequilibrium_free_energy(const DiagonalState& state, const LevelSpectrum& spectrum,
                                  const Bath& bath) {
    return nonequilibrium_free_energy(state, spectrum, bath, {});
}

double nonequilibrium_free_energy(const DiagonalState& state, const LevelSpectrum& spectrum,
                                  const Bath& bath, std::span<const double> occupations) {
    require_same_dimension(state, spectrum);
    const std::vector<double> shifted = shifted_energies(spectrum, bath, occupations);
    double u = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) u += state[i] * shifted[i];
    return u - bath.temperature() * shannon_entropy(state);
}

DiagonalState dot_state(double occupation) {
    if (!(occupation >= 0.0 && occupation <= 1.0))
        throw std::invalid_argument("dot occupation must lie in [0, 1]");
    return DiagonalState({1.0 - occupation, occupation});
}

LevelSpectrum dot_spectrum(double level_energy) { return LevelSpectrum({0.0, level_energy}); }

DiagonalState dot_thermal_state(double level_energy, const Bath& bath) {
    static constexpr double kDotOccupations[] = {0.0, 1.0};
    return thermal_state(dot_spectrum(level_energy), bath, kDotOccupations);
}

double dot_entropy(double occupation) { return shannon_entropy(dot_state(occupation)); }

}  // namespace fermicycle
