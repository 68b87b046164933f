#include "etls/model.hpp"

#include <cmath>
#include <stdexcept>

namespace etls {

void SystemParams::validate() const {
    for (double v : {epsilon0, t0, omega_a, t0a, omega_delta}) {
        if (!std::isfinite(v)) throw std::invalid_argument("SystemParams: non-finite energy");
    }
    if (t0 < 0.0) throw std::invalid_argument("SystemParams: t0 must be >= 0");
    if (omega_a <= 0.0) throw std::invalid_argument("SystemParams: omega_a must be > 0");
    if (omega_delta < 0.0) throw std::invalid_argument("SystemParams: omega_delta must be >= 0");
}

Matrix4c DressedStates::basis() const {
    Matrix4c b;
    b.col(0) = g0;
    b.col(1) = g1;
    b.col(2) = e0;
    b.col(3) = e1;
    return b;
}

Vector2c qubit_ground(double theta) {
    return Vector2c(-std::sin(theta / 2.0), std::cos(theta / 2.0));
}

Vector2c qubit_excited(double theta) {
    return Vector2c(std::cos(theta / 2.0), std::sin(theta / 2.0));
}

Matrix4c build_hamiltonian(const SystemParams& p) {
    using namespace pauli;
    const Matrix2c id = identity();
    return 0.5 * p.epsilon0 * kron(z(), id) + 0.5 * p.t0 * kron(x(), id) +
           0.5 * p.omega_a * kron(id, z()) + 0.5 * p.t0a * kron(id, x()) +
           0.5 * p.omega_delta * kron(z(), z());
}

namespace {
void require_storage(const SystemParams& p) {
    p.validate();
    if (p.t0a != 0.0) {
        throw std::invalid_argument("dressed labels undefined: t0a must be 0 (storage configuration)");
    }
}
}  // namespace

DressedSpectrum dressed_spectrum(const SystemParams& p) {
    require_storage(p);
    DressedSpectrum s;
    // ETLS in |0_a⟩ (σz^a = −1) sees bias ε0 − ωΔ; in |1_a⟩ it sees ε0 + ωΔ.
    const double bias = p.epsilon0 - p.omega_delta;
    const double bias_bar = p.epsilon0 + p.omega_delta;
    s.omega_q = std::hypot(bias, p.t0);
    s.omega_q_bar = std::hypot(bias_bar, p.t0);
    s.theta = std::atan2(p.t0, bias);
    s.theta_bar = std::atan2(p.t0, bias_bar);
    s.e_0q0a = -0.5 * p.omega_a - 0.5 * s.omega_q;
    s.e_1q0a = -0.5 * p.omega_a + 0.5 * s.omega_q;
    s.e_0bq1a = 0.5 * p.omega_a - 0.5 * s.omega_q_bar;
    s.e_1bq1a = 0.5 * p.omega_a + 0.5 * s.omega_q_bar;
    s.f_cond_q0 = p.omega_a - 0.5 * (s.omega_q_bar - s.omega_q);
    s.f_cond_q1 = p.omega_a + 0.5 * (s.omega_q_bar - s.omega_q);
    return s;
}

DressedStates dressed_states(const SystemParams& p) {
    const DressedSpectrum s = dressed_spectrum(p);
    Vector2c ground = Vector2c::Zero();
    Vector2c excited = Vector2c::Zero();
    ground(kEtlsGround) = 1.0;
    excited(kEtlsExcited) = 1.0;
    return DressedStates{
        kron(qubit_ground(s.theta), ground),
        kron(qubit_excited(s.theta), ground),
        kron(qubit_ground(s.theta_bar), excited),
        kron(qubit_excited(s.theta_bar), excited),
    };
}

double qubit_overlap(const DressedSpectrum& s) { return std::sin(0.5 * (s.theta_bar - s.theta)); }

double max_level_splitting(const SystemParams& p) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(build_hamiltonian(p), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
}

JointState storage_state(cplx c0, cplx c1, const SystemParams& p) {
    const DressedStates d = dressed_states(p);
    return c0 * d.g0 + c1 * d.g1;
}

}  // namespace etls
