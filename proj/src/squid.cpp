#include "etls/squid.hpp"

#include "etls/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace etls {

void SquidParams::validate() const {
    if (!(inductance_ph > 0.0)) throw std::invalid_argument("SquidParams: inductance must be > 0");
    if (!(critical_current_ua >= 0.0)) throw std::invalid_argument("SquidParams: critical current must be >= 0");
    if (!(capacitance_ff > 0.0)) throw std::invalid_argument("SquidParams: capacitance must be > 0");
    if (!(f_rf > 0.0) || !std::isfinite(f_rf)) throw std::invalid_argument("SquidParams: f_rf must be > 0");
}

double SquidParams::phase_bias() const { return 2.0 * std::numbers::pi * f_rf; }

SquidEnergies derived_energies(const SquidParams& p) {
    p.validate();
    const double two_pi = 2.0 * std::numbers::pi;
    const double L = p.inductance_ph * 1e-12;
    const double Ic = p.critical_current_ua * 1e-6;
    const double C = p.capacitance_ff * 1e-15;
    const double reduced_flux = kFluxQuantum / two_pi;
    SquidEnergies e;
    e.e_j = Ic * reduced_flux / kPlanck * 1e-9;
    e.e_c = kElementaryCharge * kElementaryCharge / (2.0 * C * kPlanck) * 1e-9;
    e.e_l = reduced_flux * reduced_flux / (L * kPlanck) * 1e-9;
    e.beta_l = two_pi * L * Ic / kFluxQuantum;
    return e;
}

Eigen::VectorXd PhaseGrid::nodes() const { return Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(points), lo, hi); }

PhaseGrid PhaseGrid::centered(const SquidParams& params, std::size_t points, double half_width) {
    const double c = params.phase_bias();
    return {c - half_width, c + half_width, points};
}

Eigen::VectorXd potential(const SquidParams& params, const PhaseGrid& grid) {
    const SquidEnergies e = derived_energies(params);
    const double c = params.phase_bias();
    const double pi = std::numbers::pi;
    if (grid.points < 1000) throw std::invalid_argument("potential: grid needs >= 1000 points");
    if (grid.lo > c - pi + 1e-12 || grid.hi < c + pi - 1e-12) {
        throw std::invalid_argument("potential: grid must cover [2*pi*f_rf - pi, 2*pi*f_rf + pi] to include both wells");
    }
    const Eigen::VectorXd phi = grid.nodes();
    Eigen::VectorXd u(phi.size());
    for (Eigen::Index i = 0; i < phi.size(); ++i) {
        const double x = phi(i) - c;
        u(i) = 0.5 * e.e_l * x * x - e.e_j * std::cos(phi(i));
    }
    return u;
}

std::vector<std::size_t> local_minima(const Eigen::VectorXd& v) {
    std::vector<std::size_t> out;
    for (Eigen::Index i = 1; i + 1 < v.size(); ++i)
        if (v(i) < v(i - 1) && v(i) < v(i + 1)) out.push_back(static_cast<std::size_t>(i));
    return out;
}

std::vector<std::size_t> local_maxima(const Eigen::VectorXd& v) {
    std::vector<std::size_t> out;
    for (Eigen::Index i = 1; i + 1 < v.size(); ++i)
        if (v(i) > v(i - 1) && v(i) > v(i + 1)) out.push_back(static_cast<std::size_t>(i));
    return out;
}

namespace {

/// Symmetric banded Hamiltonian stored as diagonals: band[d][i] = H(i + d, i).
struct BandedHamiltonian {
    int kd = 0;
    std::vector<std::vector<double>> band;
    lapack_int n = 0;
};

BandedHamiltonian assemble(const Eigen::VectorXd& u, double spacing, double e_c, Stencil stencil) {
    BandedHamiltonian h;
    h.n = static_cast<lapack_int>(u.size());
    const double k = 4.0 * e_c / (spacing * spacing);
    std::vector<double> coeffs;  // coefficients of −d²/dφ² · h², offsets 0..kd
    if (stencil == Stencil::three_point) {
        coeffs = {2.0, -1.0};
    } else {
        coeffs = {30.0 / 12.0, -16.0 / 12.0, 1.0 / 12.0};
    }
    h.kd = static_cast<int>(coeffs.size()) - 1;
    h.band.resize(coeffs.size());
    for (std::size_t d = 0; d < coeffs.size(); ++d) {
        h.band[d].assign(static_cast<std::size_t>(h.n) - d, k * coeffs[d]);
    }
    for (lapack_int i = 0; i < h.n; ++i) h.band[0][static_cast<std::size_t>(i)] += u(i);
    return h;
}

Eigen::VectorXd lowest_eigenvalues(const BandedHamiltonian& h, std::size_t count) {
    const lapack_int ldab = h.kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * static_cast<std::size_t>(h.n), 0.0);
    for (int d = 0; d <= h.kd; ++d)
        for (std::size_t j = 0; j < h.band[static_cast<std::size_t>(d)].size(); ++j)
            ab[static_cast<std::size_t>(d) + j * static_cast<std::size_t>(ldab)] = h.band[static_cast<std::size_t>(d)][j];

    std::vector<double> w(static_cast<std::size_t>(h.n));
    std::vector<lapack_int> ifail(static_cast<std::size_t>(h.n));
    double q_dummy = 0.0;
    double z_dummy = 0.0;
    lapack_int found = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info =
        LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'L', h.n, h.kd, ab.data(), ldab, &q_dummy, 1, 0.0, 0.0, 1,
                       static_cast<lapack_int>(count), abstol, &found, w.data(), &z_dummy, 1, ifail.data());
    if (info != 0 || found != static_cast<lapack_int>(count)) {
        throw NumericalError("solve_spectrum: banded eigenvalue solve failed (info = " + std::to_string(info) + ")");
    }
    return Eigen::Map<Eigen::VectorXd>(w.data(), found);
}

/// Inverse iteration on (H − λ) with banded LU; orthogonalized against `previous`.
Eigen::VectorXd inverse_iteration(const BandedHamiltonian& h, double lambda,
                                  const std::vector<Eigen::VectorXd>& previous, unsigned seed) {
    const lapack_int kl = h.kd;
    const lapack_int ku = h.kd;
    const lapack_int ldab = 2 * kl + ku + 1;
    const auto n = static_cast<std::size_t>(h.n);
    std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    const double shift = lambda + 1e-12 * std::max(1.0, std::abs(lambda));
    auto at = [&](std::size_t i, std::size_t j) -> double& {
        return ab[static_cast<std::size_t>(kl + ku) + i - j + j * static_cast<std::size_t>(ldab)];
    };
    for (int d = 0; d <= h.kd; ++d) {
        const auto& diag = h.band[static_cast<std::size_t>(d)];
        for (std::size_t j = 0; j < diag.size(); ++j) {
            const double v = diag[j] - (d == 0 ? shift : 0.0);
            at(j + static_cast<std::size_t>(d), j) = v;
            if (d > 0) at(j, j + static_cast<std::size_t>(d)) = v;
        }
    }
    std::vector<lapack_int> ipiv(n);
    const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, h.n, h.n, kl, ku, ab.data(), ldab, ipiv.data());
    if (info < 0) throw NumericalError("solve_spectrum: banded LU failed");

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd v(h.n);
    for (auto& x : v) x = uni(rng);
    v.normalize();
    for (int iter = 0; iter < 4; ++iter) {
        const lapack_int st = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', h.n, kl, ku, 1, ab.data(), ldab,
                                             ipiv.data(), v.data(), h.n);
        if (st != 0) throw NumericalError("solve_spectrum: banded back-substitution failed");
        for (const auto& p : previous) v -= p.dot(v) * p;
        const double norm = v.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("solve_spectrum: inverse iteration diverged");
        v /= norm;
    }
    for (const auto& p : previous) v -= p.dot(v) * p;
    return v.normalized();
}

/// Rotates near-degenerate groups into eigenstates of the phase operator.
void localize_degenerate(EigenSolution& s, double tol) {
    const Eigen::Index n = s.energies.size();
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && s.energies(end) - s.energies(end - 1) < tol) ++end;
        const Eigen::Index size = end - start;
        if (size > 1) {
            auto block = s.wavefunctions.middleCols(start, size);
            const Eigen::MatrixXd x = block.transpose() * s.grid.asDiagonal() * block * s.spacing;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
            const Eigen::MatrixXd rotated = block * es.eigenvectors();
            block = rotated;
        }
        start = end;
    }
}

std::string describe(const Eigen::VectorXd& v) {
    std::ostringstream os;
    os.precision(6);
    os << '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
    os << ']';
    return os.str();
}

EigenSolution solve_on_grid(const SquidParams& params, const PhaseGrid& grid, std::size_t n_levels,
                            const SolveOptions& options) {
    const SquidEnergies e = derived_energies(params);
    const Eigen::VectorXd u = potential(params, grid);
    const double spacing = grid.spacing();
    const BandedHamiltonian h = assemble(u, spacing, e.e_c, options.stencil);

    EigenSolution s;
    s.grid = grid.nodes();
    s.spacing = spacing;
    s.energies = lowest_eigenvalues(h, n_levels);
    s.wavefunctions.resize(h.n, static_cast<Eigen::Index>(n_levels));

    std::vector<Eigen::VectorXd> found;
    found.reserve(n_levels);
    for (std::size_t k = 0; k < n_levels; ++k) {
        found.push_back(inverse_iteration(h, s.energies(static_cast<Eigen::Index>(k)), found,
                                          static_cast<unsigned>(k + 1)));
    }
    const double scale = 1.0 / std::sqrt(spacing);
    for (std::size_t k = 0; k < n_levels; ++k) s.wavefunctions.col(static_cast<Eigen::Index>(k)) = found[k] * scale;

    localize_degenerate(s, options.degeneracy_tol);
    for (Eigen::Index k = 0; k < s.wavefunctions.cols(); ++k) {
        Eigen::Index imax = 0;
        s.wavefunctions.col(k).cwiseAbs().maxCoeff(&imax);
        if (s.wavefunctions(imax, k) < 0.0) s.wavefunctions.col(k) *= -1.0;
    }
    return s;
}

}  // namespace

EigenSolution solve_spectrum(const SquidParams& params, const PhaseGrid& grid, std::size_t n_levels,
                             const SolveOptions& options) {
    if (n_levels == 0) throw std::invalid_argument("solve_spectrum: n_levels must be >= 1");
    if (n_levels > grid.points / 4) throw std::invalid_argument("solve_spectrum: too many levels for the grid");
    EigenSolution s = solve_on_grid(params, grid, n_levels, options);
    if (options.check_convergence) {
        const EigenSolution fine = solve_on_grid(params, grid.refined(), n_levels, options);
        s.convergence_shift = (fine.energies - s.energies).cwiseAbs().maxCoeff();
        if (s.convergence_shift >= options.convergence_tol) {
            throw NumericalError("solve_spectrum: not grid-converged (max shift " +
                                 std::to_string(s.convergence_shift) + " GHz); coarse " +
                                 describe(s.energies) + " vs fine " + describe(fine.energies));
        }
    }
    return s;
}

double circulating_current_ua(const SquidParams& params, double phase_offset) {
    const double L = params.inductance_ph * 1e-12;
    return kFluxQuantum / (2.0 * std::numbers::pi) * phase_offset / L * 1e6;
}

EtlsCharacterization characterize_etls(const EigenSolution& s, const SquidParams& params) {
    const PhaseGrid grid{s.grid(0), s.grid(s.grid.size() - 1), static_cast<std::size_t>(s.grid.size())};
    const Eigen::VectorXd u = potential(params, grid);
    const double c = params.phase_bias();

    // Barrier: highest interior maximum lying between two minima.
    const auto minima = local_minima(u);
    const auto maxima = local_maxima(u);
    std::ptrdiff_t barrier = -1;
    for (std::size_t m : maxima) {
        const bool has_left = std::any_of(minima.begin(), minima.end(), [&](std::size_t i) { return i < m; });
        const bool has_right = std::any_of(minima.begin(), minima.end(), [&](std::size_t i) { return i > m; });
        if (has_left && has_right && (barrier < 0 || u(m) > u(barrier))) barrier = static_cast<std::ptrdiff_t>(m);
    }
    // Without a barrier every level is delocalized and the pair search below fails.
    EtlsCharacterization out;
    out.barrier_phase = barrier >= 0 ? s.grid(barrier) : std::numeric_limits<double>::quiet_NaN();
    const Eigen::Index n = s.energies.size();
    std::vector<Eigen::Index> left, right, delocalized;
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::VectorXd prob = s.wavefunctions.col(k).array().square() * s.spacing;
        LevelInfo info;
        info.energy = s.energies(k);
        info.mean_phase_offset = prob.dot(s.grid) - c;
        info.left_probability = barrier >= 0 ? prob.head(barrier).sum() : 0.5;
        const bool localized = barrier >= 0 && (info.left_probability >= 0.9 || info.left_probability <= 0.1);
        info.well = localized ? (info.mean_phase_offset < 0.0 ? -1 : 1) : 0;
        (info.well < 0 ? left : info.well > 0 ? right : delocalized).push_back(k);
        out.levels.push_back(info);
    }

    double best = -1.0;
    for (Eigen::Index i : left) {
        for (Eigen::Index j : right) {
            if (i == n - 1 || j == n - 1) continue;
            double isolation = std::numeric_limits<double>::infinity();
            for (Eigen::Index k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                isolation = std::min({isolation, std::abs(s.energies(k) - s.energies(i)),
                                      std::abs(s.energies(k) - s.energies(j))});
            }
            if (isolation > best) {
                best = isolation;
                out.lower = static_cast<std::size_t>(std::min(i, j));
                out.upper = static_cast<std::size_t>(std::max(i, j));
            }
        }
    }
    if (best < 0.0) {
        auto list = [](const std::vector<Eigen::Index>& v) {
            std::ostringstream os;
            os << '[';
            for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
            os << ']';
            return os.str();
        };
        throw NumericalError(std::string("characterize_etls: no opposite-well pair") +
                             (barrier < 0 ? " (single-well potential)" : "") + "; left-well levels " + list(left) +
                             ", right-well levels " + list(right) + ", delocalized " + list(delocalized));
    }

    const auto& lo = out.levels[out.lower];
    const auto& hi = out.levels[out.upper];
    out.current_lower_ua = circulating_current_ua(params, lo.mean_phase_offset);
    out.current_upper_ua = circulating_current_ua(params, hi.mean_phase_offset);
    out.delta_i_ua = std::abs(out.current_upper_ua - out.current_lower_ua);
    out.delta_phi = out.delta_i_ua * 1e-6 * params.inductance_ph * 1e-12 / kFluxQuantum;
    out.isolation_ghz = best;
    out.splitting_ghz = hi.energy - lo.energy;
    return out;
}

double displaced_ground_overlap(double delta_phi0, double var_phi) {
    if (!(var_phi > 0.0)) throw std::invalid_argument("displaced_ground_overlap: variance must be > 0");
    return std::exp(-delta_phi0 * delta_phi0 / (2.0 * var_phi));
}

}  // namespace etls
