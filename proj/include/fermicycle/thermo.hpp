#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fermicycle {

// Population vector over energy levels, k_B = 1 throughout. Immutable after
// construction; every constructor enforces p_i in [0,1] and normalization.
class DiagonalState {
public:
    explicit DiagonalState(std::vector<double> populations);

    std::size_t size() const noexcept { return populations_.size(); }
    double operator[](std::size_t i) const noexcept { return populations_[i]; }
    const std::vector<double>& populations() const noexcept { return populations_; }

private:
    std::vector<double> populations_;
};

// Energy eigenvalues of the working-medium Hamiltonian (energy units).
class LevelSpectrum {
public:
    explicit LevelSpectrum(std::vector<double> energies);

    std::size_t size() const noexcept { return energies_.size(); }
    double operator[](std::size_t i) const noexcept { return energies_[i]; }
    const std::vector<double>& energies() const noexcept { return energies_; }

private:
    std::vector<double> energies_;
};

// Fermionic reservoir: temperature and chemical potential in energy units,
// coupling rate in inverse-time units.
class Bath {
public:
    Bath(std::string label, double temperature, double chemical_potential, double coupling);

    const std::string& label() const noexcept { return label_; }
    double temperature() const noexcept { return temperature_; }
    double chemical_potential() const noexcept { return chemical_potential_; }
    double coupling() const noexcept { return coupling_; }

private:
    std::string label_;
    double temperature_;
    double chemical_potential_;
    double coupling_;
};

// Equilibrium occupation 1/(exp((energy - mu)/T) + 1). Evaluated on the
// stable branch of the logistic form; saturates cleanly (no overflow, no
// NaN) for |energy - mu|/T as large as 1e6 and beyond.
double fermi_occupation(double energy, const Bath& bath);

// S = -sum p_i ln p_i, with 0 ln 0 = 0. Dimensionless (k_B = 1).
double shannon_entropy(const DiagonalState& state);

// U = sum p_i e_i. Throws std::invalid_argument on dimension mismatch.
double mean_energy(const DiagonalState& state, const LevelSpectrum& spectrum);

// Cov(p, e) = sum_i (p_i - 1/d)(e_i - mean(e)). Measures how populations
// align with the spectrum; vanishes for uniform populations. Algebraically
// equal to mean_energy - mean(e), which tests exploit as a second route.
double state_hamiltonian_covariance(const DiagonalState& state, const LevelSpectrum& spectrum);

// Var(e) under p, computed as sum p_i (e_i - U)^2 so it cannot go negative
// from cancellation.
double energy_variance(const DiagonalState& state, const LevelSpectrum& spectrum);

// D(p||q) = sum p_i ln(p_i / q_i). Throws std::domain_error when q_i = 0
// on the support of p.
double relative_entropy(const DiagonalState& state, const DiagonalState& reference);

// Grand-canonical populations p_i proportional to exp(-(e_i - mu n_i)/T),
// where n_i is the particle number carried by level i. With all n_i = 0
// (the two-argument overload) this is the Gibbs state of the spectrum.
// For the two-level dot use occupations {0, 1}: the result is then the
// Fermi-Dirac pair (1 - f, f).
DiagonalState thermal_state(const LevelSpectrum& spectrum, const Bath& bath);
DiagonalState thermal_state(const LevelSpectrum& spectrum, const Bath& bath,
                            std::span<const double> occupations);

// F(p) = sum p_i (e_i - mu n_i) - T S(p). Satisfies
// F(p) - F(gamma) = T D(p||gamma) against the matching thermal_state.
double nonequilibrium_free_energy(const DiagonalState& state, const LevelSpectrum& spectrum,
                                  const Bath& bath);
double nonequilibrium_free_energy(const DiagonalState& state, const LevelSpectrum& spectrum,
                                  const Bath& bath, std::span<const double> occupations);

// Two-level dot helpers: state (1-p, p) over spectrum (0, e), occupation
// numbers (0, 1).
DiagonalState dot_state(double occupation);
LevelSpectrum dot_spectrum(double level_energy);
DiagonalState dot_thermal_state(double level_energy, const Bath& bath);
double dot_entropy(double occupation);

}  // namespace fermicycle
