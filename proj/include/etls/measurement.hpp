// measurement.hpp: ETLS projective readout and the switching-histogram detector model.
//
// ETLS 2×2 matrices use the σz order of linalg.hpp: index kEtlsExcited = |1_a⟩,
// index kEtlsGround = |0_a⟩.

#pragma once

#include "etls/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace etls {

/// Two-Gaussian detector output. `sigma` is the variance of each component.
struct HistogramModel {
    double y0 = 0.0;
    double y1 = 1.0;
    double sigma = 1e-4;
    double weight = 0.5;  // |c0|², probability of the y0 component

    void validate() const;
};

struct AccuracySpec {
    double a_m = 0.05;

    void validate() const;
};

/// ρ_a with diagonal (|c0|², |c1|²) and ρ_a(1_a, 0_a) = i c0* c1 · overlap.
Matrix2c etls_density_matrix(cplx c0, cplx c1, double overlap);

struct Projection {
    int outcome = 0;            // 1 for |1_a⟩
    Matrix2c qubit;             // normalized conditional qubit state
    double probability = 0.0;   // probability of the realized outcome
    double p1 = 0.0;            // population of |1_a⟩ before the measurement
};

Projection project_etls(const JointState& state, std::uint64_t seed);
Projection project_etls(const Matrix4c& rho, std::uint64_t seed);

std::size_t required_repetitions_von_neumann(const AccuracySpec& acc);
std::size_t required_repetitions_overlapping(const AccuracySpec& acc, const HistogramModel& model);

std::vector<double> sample_switching(const HistogramModel& model, std::size_t n, std::uint64_t seed);

/// clamp((mean − y1)/(y0 − y1), 0, 1).
double estimate_population(const std::vector<double>& samples, const HistogramModel& model);

struct Readout {
    std::size_t shots = 0;
    std::size_t ones = 0;      // shots that projected onto |1_a⟩
    double estimate = 0.0;     // |c0|² from the detector mean
    double detector_mean = 0.0;
};

/// Repeats project → detect `shots` times on copies of rho. Each detector value is
/// drawn from N(y_outcome, detector.sigma); detector.weight is ignored.
Readout simulate_readout(const Matrix4c& rho, const HistogramModel& detector, std::size_t shots,
                         std::uint64_t seed);

}  // namespace etls
