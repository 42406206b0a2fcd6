#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qcond/distribution.hpp"
#include "qcond/errors.hpp"
#include "qcond/ledger.hpp"
#include "qcond/numerics.hpp"
#include "qcond/oracle.hpp"
#include "qcond/rng.hpp"
#include "qcond/testers.hpp"

namespace qcond {

/// n-dimensional mixed state: Hermitian, PSD, trace one (all within 1e-10).
class DensityMatrix {
  public:
    explicit DensityMatrix(Eigen::MatrixXcd mat) : mat_(std::move(mat)) {
        if (mat_.rows() != mat_.cols() || mat_.rows() < 1) {
            throw DimensionMismatch("DensityMatrix: must be square, n >= 1");
        }
        if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
            throw InvalidParameter("DensityMatrix: not Hermitian");
        }
        if (std::abs(mat_.trace().real() - 1.0) > 1e-10 || std::abs(mat_.trace().imag()) > 1e-10) {
            throw InvalidParameter("DensityMatrix: trace must be 1");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat_,
                                                               Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -1e-10) {
            throw InvalidParameter("DensityMatrix: negative eigenvalue");
        }
    }

    static DensityMatrix maximally_mixed(int n) {
        return DensityMatrix(Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(n));
    }

    static DensityMatrix pure(int n, int basis_index) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
        m(basis_index, basis_index) = 1.0;
        return DensityMatrix(std::move(m));
    }

    /// Normalized projector onto the first `rank` basis states.
    static DensityMatrix projector_mixture(int n, int rank) {
        if (rank < 1 || rank > n) throw InvalidParameter("projector_mixture: bad rank");
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 0; i < rank; ++i) m(i, i) = 1.0 / static_cast<double>(rank);
        return DensityMatrix(std::move(m));
    }

    static DensityMatrix diagonal(const std::vector<double> &weights) {
        Eigen::MatrixXcd m =
            Eigen::MatrixXcd::Zero(static_cast<int>(weights.size()), static_cast<int>(weights.size()));
        for (std::size_t i = 0; i < weights.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = weights[i];
        return DensityMatrix(std::move(m));
    }

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Eigen::MatrixXcd &mat() const { return mat_; }

  private:
    Eigen::MatrixXcd mat_;
};

/// Orthonormal basis given by the columns of a unitary.
class BasisSpec {
  public:
    explicit BasisSpec(Eigen::MatrixXcd w) : w_(std::move(w)) {
        if (w_.rows() != w_.cols() || w_.rows() < 1) {
            throw DimensionMismatch("BasisSpec: must be square, n >= 1");
        }
        const Eigen::MatrixXcd gram = w_.adjoint() * w_;
        if ((gram - Eigen::MatrixXcd::Identity(w_.rows(), w_.cols())).cwiseAbs().maxCoeff() >
            1e-10) {
            throw InvalidParameter("BasisSpec: matrix is not unitary");
        }
    }

    static BasisSpec computational(int n) {
        return BasisSpec(Eigen::MatrixXcd::Identity(n, n));
    }

    int dim() const { return static_cast<int>(w_.rows()); }
    const Eigen::MatrixXcd &unitary() const { return w_; }
    Eigen::VectorXcd column(int i) const { return w_.col(i); }

  private:
    Eigen::MatrixXcd w_;
};

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phase correction.
inline BasisSpec sample_haar(int n, RngStream &rng) {
    if (n < 1) throw InvalidParameter("sample_haar: n must be >= 1");
    Eigen::MatrixXcd ginibre(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            ginibre(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian()) / std::sqrt(2.0);
        }
    }
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const std::complex<double> rii = r(i, i);
        const double mag = std::abs(rii);
        q.col(i) *= mag > 0.0 ? rii / mag : std::complex<double>(1.0, 0.0);
    }
    return BasisSpec(std::move(q));
}

/// Eigenvalues d_i of rho - 1/n (ascending) and eta = sum |d_i|.
struct SpectralGap {
    std::vector<double> d;
    double eta = 0.0;

    static SpectralGap from_state(const DensityMatrix &rho) {
        const int n = rho.dim();
        const Eigen::MatrixXcd delta =
            rho.mat() - Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(delta, Eigen::EigenvaluesOnly);
        SpectralGap gap;
        gap.d.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
        double total = 0.0;
        for (double x : gap.d) {
            total += x;
            gap.eta += std::abs(x);
        }
        if (std::abs(total) > 1e-10) throw InvalidParameter("SpectralGap: trace(delta) != 0");
        return gap;
    }
};

namespace detail {

inline std::vector<double> measurement_weights(const DensityMatrix &rho, const BasisSpec &basis) {
    if (rho.dim() != basis.dim()) {
        throw DimensionMismatch("state and basis dimensions differ");
    }
    const Eigen::MatrixXcd product = basis.unitary().adjoint() * rho.mat() * basis.unitary();
    std::vector<double> weights(static_cast<std::size_t>(rho.dim()));
    for (int i = 0; i < rho.dim(); ++i) weights[static_cast<std::size_t>(i)] = product(i, i).real();
    return weights;
}

}  // namespace detail

/// Measurement distribution of rho in the given basis, quantized to
/// denominator T before oracle exposure.
inline Distribution induced_distribution(const DensityMatrix &rho, const BasisSpec &basis,
                                         std::uint64_t denominator = 1000000) {
    auto weights = detail::measurement_weights(rho, basis);
    for (double &w : weights) w = std::max(0.0, w);  // clamp eigen round-off
    return rationalize(weights, denominator);
}

/// L1 distance between the basis-measurement distribution of rho and uniform.
inline double spectral_delta(const DensityMatrix &rho, const BasisSpec &basis) {
    const auto weights = detail::measurement_weights(rho, basis);
    const double uniform = 1.0 / static_cast<double>(rho.dim());
    double delta = 0.0;
    for (double w : weights) delta += std::abs(w - uniform);
    return delta;
}

struct SpectrumConstants {
    double k_factor = 32.0;   // bases: ceil(k_factor * sqrt(n))
    double l_factor = 128.0;  // runs per basis: ceil(l_factor * log2(n)), min 2
};

/// Maximally-mixed-state tester: promised ||rho - 1/n||_1 = 0 or >= eps,
/// decides with probability at least 2/3. Draws k Haar bases, runs the
/// uniformity tester l times per basis at distance parameter
/// nu = min(1, eps) / (sqrt(8) n^{1/4}), flags a basis whose Far count
/// reaches l/2, and outputs Far iff some basis is flagged.
inline Verdict maximally_mixed_test(const DensityMatrix &rho, double epsilon,
                                    const SpectrumConstants &constants, const Backend &backend,
                                    RngStream &rng, QueryLedger &ledger,
                                    const UniformityOptions &options = {},
                                    std::uint64_t oracle_denominator = 1000000) {
    const int n = rho.dim();
    if (n % 2 != 0) throw OddDimension("maximally_mixed_test: n must be even");
    if (!(epsilon > 0.0 && epsilon <= 2.0)) {
        throw InvalidParameter("maximally_mixed_test: epsilon must lie in (0, 2]");
    }
    const int k = static_cast<int>(std::ceil(constants.k_factor * std::sqrt(n)));
    const int l = std::max(
        2, static_cast<int>(std::ceil(constants.l_factor * std::log2(static_cast<double>(n)))));
    const double nu =
        std::min(1.0, epsilon) / (std::sqrt(8.0) * std::pow(static_cast<double>(n), 0.25));

    for (int j = 0; j < k; ++j) {
        auto basis_rng = rng.substream(static_cast<std::uint64_t>(j), 0xBA515);
        const BasisSpec basis = sample_haar(n, basis_rng);
        const Distribution induced = induced_distribution(rho, basis, oracle_denominator);
        int far_runs = 0;
        for (int run = 0; run < l; ++run) {
            auto run_rng = rng.substream(static_cast<std::uint64_t>(j), 0x52u,
                                         static_cast<std::uint64_t>(run));
            far_runs += uniformity_test(induced, nu, backend, run_rng, ledger, options) ==
                        Verdict::Far;
        }
        if (2 * far_runs >= l) return Verdict::Far;
    }
    return Verdict::Equal;
}

struct TailReport {
    double empirical_tail = 0.0;
    double bound = 0.0;
    double sigma = 0.0;
    bool pass = false;
};

/// Monte Carlo check of the tail bound P[delta_B >= lambda] >=
/// (E(delta_B) - lambda^2) / eta over Haar-random bases.
inline TailReport delta_tail_check(const DensityMatrix &rho, double lambda, std::uint64_t samples,
                               RngStream &rng) {
    const auto gap = SpectralGap::from_state(rho);
    if (!(gap.eta > 0.0)) throw InvalidParameter("delta_tail_check: eta must be positive");
    if (lambda < 0.0 || lambda > gap.eta) {
        throw InvalidParameter("delta_tail_check: lambda must lie in [0, eta]");
    }
    RunningStat deltas;
    std::uint64_t tail_hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const BasisSpec basis = sample_haar(rho.dim(), rng);
        const double delta = spectral_delta(rho, basis);
        deltas.add(delta);
        tail_hits += delta >= lambda;
    }
    TailReport report;
    report.empirical_tail = static_cast<double>(tail_hits) / static_cast<double>(samples);
    report.bound = (deltas.mean() - lambda * lambda) / gap.eta;
    const double tail_se = std::sqrt(report.empirical_tail * (1.0 - report.empirical_tail) /
                                     static_cast<double>(samples));
    const double bound_se = deltas.std_error() / gap.eta;
    report.sigma = std::sqrt(tail_se * tail_se + bound_se * bound_se);
    report.pass = report.empirical_tail >= report.bound - 3.0 * report.sigma;
    return report;
}

struct MeanReport {
    double mean = 0.0;
    double std_error = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// Monte Carlo check of E(delta_B) >= eta / (4 sqrt(n)) over Haar bases.
inline MeanReport expected_delta_check(const DensityMatrix &rho, std::uint64_t samples,
                                       RngStream &rng) {
    const auto gap = SpectralGap::from_state(rho);
    RunningStat deltas;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const BasisSpec basis = sample_haar(rho.dim(), rng);
        deltas.add(spectral_delta(rho, basis));
    }
    MeanReport report;
    report.mean = deltas.mean();
    report.std_error = deltas.std_error();
    report.bound = gap.eta / (4.0 * std::sqrt(static_cast<double>(rho.dim())));
    report.pass = report.mean >= report.bound - 3.0 * report.std_error;
    return report;
}

inline nlohmann::json to_json(const DensityMatrix &rho) {
    const int n = rho.dim();
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
        nlohmann::json re_row = nlohmann::json::array(), im_row = nlohmann::json::array();
        for (int j = 0; j < n; ++j) {
            re_row.push_back(rho.mat()(i, j).real());
            im_row.push_back(rho.mat()(i, j).imag());
        }
        re.push_back(re_row);
        im.push_back(im_row);
    }
    return nlohmann::json{{"n", n}, {"re", re}, {"im", im}};
}

inline DensityMatrix density_matrix_from_json(const nlohmann::json &j) {
    if (!j.contains("n") || !j.contains("re") || !j.contains("im")) {
        throw ConfigError("density matrix json: need n, re, im");
    }
    const int n = j.at("n").get<int>();
    const auto &re = j.at("re");
    const auto &im = j.at("im");
    if (static_cast<int>(re.size()) != n || static_cast<int>(im.size()) != n) {
        throw ConfigError("density matrix json: row count != n");
    }
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(re[i].size()) != n || static_cast<int>(im[i].size()) != n) {
            throw ConfigError("density matrix json: column count != n");
        }
        for (int k = 0; k < n; ++k) {
            m(i, k) = std::complex<double>(re[i][k].get<double>(), im[i][k].get<double>());
        }
    }
    try {
        return DensityMatrix(std::move(m));
    } catch (const Error &e) {
        throw ConfigError(std::string("density matrix json: ") + e.what());
    }
}

inline DensityMatrix load_density_matrix(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open density matrix file: " + path);
    nlohmann::json j;
    in >> j;
    return density_matrix_from_json(j);
}

}  // namespace qcond
