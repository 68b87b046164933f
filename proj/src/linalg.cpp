#include "etls/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace etls {

namespace pauli {
Matrix2c identity() { return Matrix2c::Identity(); }
Matrix2c x() {
    Matrix2c m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}
Matrix2c y() {
    Matrix2c m;
    m << 0.0, -kI, kI, 0.0;
    return m;
}
Matrix2c z() {
    Matrix2c m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}
}  // namespace pauli

Matrix4c kron(const Matrix2c& qubit, const Matrix2c& etls) {
    Matrix4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = qubit(i, j) * etls;
    return out;
}

Vector4c kron(const Vector2c& qubit, const Vector2c& etls) {
    Vector4c out;
    out << qubit(0) * etls(0), qubit(0) * etls(1), qubit(1) * etls(0), qubit(1) * etls(1);
    return out;
}

namespace {
template <typename M>
M hermitian_exp(const M& h, double t) {
    Eigen::SelfAdjointEigenSolver<M> es(h);
    const auto& v = es.eigenvectors();
    typename M::PlainObject phases = M::Zero();
    for (int k = 0; k < h.rows(); ++k) phases(k, k) = std::exp(-kI * es.eigenvalues()(k) * t);
    return v * phases * v.adjoint();
}
}  // namespace

Matrix4c unitary_step(const Matrix4c& hamiltonian, double t) { return hermitian_exp(hamiltonian, t); }
Matrix2c unitary_step(const Matrix2c& hamiltonian, double t) { return hermitian_exp(hamiltonian, t); }

Matrix2c partial_trace_qubit(const Matrix4c& rho) {
    Matrix2c out = Matrix2c::Zero();
    for (int q = 0; q < 2; ++q)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) out(a, b) += rho(2 * q + a, 2 * q + b);
    return out;
}

Matrix2c partial_trace_etls(const Matrix4c& rho) {
    Matrix2c out = Matrix2c::Zero();
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
            for (int a = 0; a < 2; ++a) out(p, q) += rho(2 * p + a, 2 * q + a);
    return out;
}

Matrix4c projector(const Vector4c& psi) { return psi * psi.adjoint(); }

double trace_distance(const Matrix2c& a, const Matrix2c& b) {
    const Matrix2c d = a - b;
    Eigen::SelfAdjointEigenSolver<Matrix2c> es(0.5 * (d + d.adjoint()));
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double overlap_fidelity(const Vector4c& a, const Vector4c& b) { return std::norm(a.dot(b)); }

double hermiticity_error(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Eigen::Ref<const Eigen::MatrixXcd>& hermitian) {
    const Eigen::MatrixXcd sym = 0.5 * (hermitian + hermitian.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace etls
