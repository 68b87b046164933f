// squid.hpp: rf-SQUID used as the effective two-level system (ETLS).
//
// H = 4E_C·(−d²/dφ²) + U(φ),  U(φ) = E_L (φ − 2π f_rf)²/2 − E_J cos φ,
// discretized on a uniform phase grid. Energies are GHz (E/h).

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <numbers>
#include <vector>

namespace etls {

inline constexpr double kFluxQuantum = 2.067833848e-15;      // Wb
inline constexpr double kPlanck = 6.62607015e-34;            // J·s
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C

struct SquidParams {
    double inductance_ph = 154.0;      // L (pH)
    double critical_current_ua = 4.0;  // Ic (μA)
    double capacitance_ff = 40.0;      // Cj (fF)
    double f_rf = 0.4365;              // flux bias (Φ0)

    /// Ic may be zero (pure LC oscillator); everything else must be positive.
    void validate() const;
    double phase_bias() const;  // 2π f_rf
};

struct SquidEnergies {
    double e_j = 0.0;  // Ic Φ0 / (2π h)
    double e_c = 0.0;  // e² / (2 Cj h)
    double e_l = 0.0;  // (Φ0/2π)² / (L h)
    double beta_l = 0.0;
};

SquidEnergies derived_energies(const SquidParams& params);

/// Uniform grid on [lo, hi] with `points` nodes.
struct PhaseGrid {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t points = 0;

    double spacing() const { return (hi - lo) / static_cast<double>(points - 1); }
    Eigen::VectorXd nodes() const;
    /// Same interval with half the spacing (2·points − 1 nodes).
    PhaseGrid refined() const { return {lo, hi, 2 * points - 1}; }

    /// [2π f_rf − half_width, 2π f_rf + half_width].
    static PhaseGrid centered(const SquidParams& params, std::size_t points = 4001,
                              double half_width = 1.5 * std::numbers::pi);
};

/// Throws std::invalid_argument unless the grid covers 2π f_rf ± π with >= 1000 points.
Eigen::VectorXd potential(const SquidParams& params, const PhaseGrid& grid);

/// Indices of strict local minima / maxima of sampled values.
std::vector<std::size_t> local_minima(const Eigen::VectorXd& values);
std::vector<std::size_t> local_maxima(const Eigen::VectorXd& values);

enum class Stencil { three_point, five_point };

struct SolveOptions {
    Stencil stencil = Stencil::five_point;
    bool check_convergence = true;
    double convergence_tol = 0.1;   // GHz, max shift of any level on halving the spacing
    double degeneracy_tol = 1e-6;   // GHz; doublets closer than this are localized
};

struct EigenSolution {
    Eigen::VectorXd grid;           // φ (rad)
    Eigen::VectorXd energies;       // GHz, nondecreasing
    Eigen::MatrixXd wavefunctions;  // column k: ψ_k on the grid, Σ ψ² Δφ = 1
    double spacing = 0.0;
    double convergence_shift = 0.0;  // GHz, 0 when not checked
};

/// Lowest n_levels eigenpairs. Throws NumericalError when halving the grid
/// spacing moves any level by more than options.convergence_tol.
EigenSolution solve_spectrum(const SquidParams& params, const PhaseGrid& grid, std::size_t n_levels,
                             const SolveOptions& options = {});

struct LevelInfo {
    double energy = 0.0;
    double mean_phase_offset = 0.0;  // ⟨φ⟩ − 2π f_rf
    double left_probability = 0.0;   // weight left of the barrier
    int well = 0;                    // −1 left, +1 right, 0 delocalized
};

struct EtlsCharacterization {
    std::size_t lower = 0;  // index of the lower-energy ETLS level
    std::size_t upper = 0;
    double current_lower_ua = 0.0;
    double current_upper_ua = 0.0;
    double delta_i_ua = 0.0;
    double delta_phi = 0.0;  // ΔI·L in units of Φ0
    double isolation_ghz = 0.0;
    double splitting_ghz = 0.0;
    double barrier_phase = 0.0;
    std::vector<LevelInfo> levels;
};

/// Classifies each level by well (localized: >= 90% weight on one side of the
/// barrier; side from the sign of ⟨φ⟩ − 2π f_rf) and picks the opposite-well
/// pair with the largest gap to every other computed level. Pairs containing
/// the highest computed level are skipped. Throws NumericalError when no pair exists.
EtlsCharacterization characterize_etls(const EigenSolution& solution, const SquidParams& params);

/// Circulating current (μA) for a phase offset ⟨φ − 2π f_rf⟩.
double circulating_current_ua(const SquidParams& params, double phase_offset);

/// exp(−δφ0² / (2⟨φ²⟩)): overlap of ground states displaced by ±δφ0.
double displaced_ground_overlap(double delta_phi0, double var_phi);

}  // namespace etls
