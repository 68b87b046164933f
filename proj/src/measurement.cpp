#include "etls/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace etls {

namespace {

// Absorbs rounding in expressions such as 1/(2·0.05)² = 100.00000000000001.
constexpr double kCeilSlack = 1e-9;

std::size_t ceil_count(double x) {
    return static_cast<std::size_t>(std::ceil(x * (1.0 - kCeilSlack)));
}

Matrix4c etls_projector(int outcome) {
    Matrix2c p = Matrix2c::Zero();
    const int idx = outcome == 1 ? kEtlsExcited : kEtlsGround;
    p(idx, idx) = 1.0;
    return kron(pauli::identity(), p);
}

}  // namespace

void HistogramModel::validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("HistogramModel: sigma must be > 0");
    if (y0 == y1) throw std::invalid_argument("HistogramModel: y0 and y1 must differ");
    if (!(weight >= 0.0 && weight <= 1.0)) throw std::invalid_argument("HistogramModel: weight must be in [0, 1]");
}

void AccuracySpec::validate() const {
    if (!(a_m > 0.0 && a_m < 1.0)) throw std::invalid_argument("AccuracySpec: A_m must be in (0, 1)");
}

Matrix2c etls_density_matrix(cplx c0, cplx c1, double overlap) {
    if (std::abs(std::norm(c0) + std::norm(c1) - 1.0) > 1e-9) {
        throw std::invalid_argument("etls_density_matrix: |c0|^2 + |c1|^2 must be 1");
    }
    if (std::abs(overlap) > 1.0) throw std::invalid_argument("etls_density_matrix: |overlap| must be <= 1");
    Matrix2c rho;
    rho(kEtlsGround, kEtlsGround) = std::norm(c0);
    rho(kEtlsExcited, kEtlsExcited) = std::norm(c1);
    rho(kEtlsExcited, kEtlsGround) = kI * std::conj(c0) * c1 * overlap;
    rho(kEtlsGround, kEtlsExcited) = std::conj(rho(kEtlsExcited, kEtlsGround));
    return rho;
}

Projection project_etls(const Matrix4c& rho, std::uint64_t seed) {
    if (std::abs(rho.trace().real() - 1.0) > 1e-9) throw std::invalid_argument("project_etls: trace must be 1");
    Projection r;
    r.p1 = std::clamp(partial_trace_qubit(rho)(kEtlsExcited, kEtlsExcited).real(), 0.0, 1.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    r.outcome = uni(rng) < r.p1 ? 1 : 0;
    r.probability = r.outcome == 1 ? r.p1 : 1.0 - r.p1;
    const Matrix4c p = etls_projector(r.outcome);
    r.qubit = partial_trace_etls(p * rho * p) / r.probability;
    return r;
}

Projection project_etls(const JointState& state, std::uint64_t seed) {
    if (std::abs(state.squaredNorm() - 1.0) > 1e-9) throw std::invalid_argument("project_etls: state must be normalized");
    return project_etls(projector(state), seed);
}

std::size_t required_repetitions_von_neumann(const AccuracySpec& acc) {
    acc.validate();
    const double two_a = 2.0 * acc.a_m;
    return ceil_count(1.0 / (two_a * two_a));
}

std::size_t required_repetitions_overlapping(const AccuracySpec& acc, const HistogramModel& model) {
    model.validate();
    const double dy = model.y1 - model.y0;
    const double ratio = 4.0 * model.sigma / (dy * dy);
    return ceil_count(ratio * static_cast<double>(required_repetitions_von_neumann(acc)));
}

std::vector<double> sample_switching(const HistogramModel& model, std::size_t n, std::uint64_t seed) {
    model.validate();
    if (n == 0) throw std::invalid_argument("sample_switching: N must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, std::sqrt(model.sigma));
    std::vector<double> out(n);
    for (auto& y : out) {
        const double centre = uni(rng) < model.weight ? model.y0 : model.y1;
        y = centre + normal(rng);
    }
    return out;
}

double estimate_population(const std::vector<double>& samples, const HistogramModel& model) {
    if (samples.empty()) throw std::invalid_argument("estimate_population: no samples");
    if (model.y0 == model.y1) throw std::invalid_argument("estimate_population: y0 and y1 must differ");
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    return std::clamp((mean - model.y1) / (model.y0 - model.y1), 0.0, 1.0);
}

Readout simulate_readout(const Matrix4c& rho, const HistogramModel& detector, std::size_t shots,
                         std::uint64_t seed) {
    detector.validate();
    if (shots == 0) throw std::invalid_argument("simulate_readout: shots must be >= 1");
    const double p1 = std::clamp(partial_trace_qubit(rho)(kEtlsExcited, kEtlsExcited).real(), 0.0, 1.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, std::sqrt(detector.sigma));
    Readout r;
    r.shots = shots;
    std::vector<double> ys(shots);
    for (auto& y : ys) {
        const bool one = uni(rng) < p1;
        r.ones += one ? 1 : 0;
        y = (one ? detector.y1 : detector.y0) + normal(rng);
    }
    r.detector_mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(shots);
    r.estimate = estimate_population(ys, detector);
    return r;
}

}  // namespace etls
