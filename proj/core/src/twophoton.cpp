/*
 * Copyright 2026 The photonwalk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "photonwalk/twophoton.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "photonwalk/error.hpp"

namespace photonwalk {

namespace {

using cplx = std::complex<double>;

// counts(t) = baseline * (1 - depth * exp(-t^2 / (2 width^2))), parameters (baseline, depth, width).
struct DipModel : Eigen::DenseFunctor<double> {
    DipModel(std::span<const double> t, std::span<const double> c)
        : Eigen::DenseFunctor<double>(3, static_cast<int>(t.size())), t_(t), c_(c) {}

    int operator()(const InputType& x, ValueType& r) const {
        for (std::size_t k = 0; k < t_.size(); ++k) {
            const double g = std::exp(-t_[k] * t_[k] / (2.0 * x(2) * x(2)));
            r(static_cast<Eigen::Index>(k)) = x(0) * (1.0 - x(1) * g) - c_[k];
        }
        return 0;
    }

    int df(const InputType& x, JacobianType& j) const {
        for (std::size_t k = 0; k < t_.size(); ++k) {
            const auto row = static_cast<Eigen::Index>(k);
            const double g = std::exp(-t_[k] * t_[k] / (2.0 * x(2) * x(2)));
            j(row, 0) = 1.0 - x(1) * g;
            j(row, 1) = -x(0) * g;
            j(row, 2) = -x(0) * x(1) * g * t_[k] * t_[k] / (x(2) * x(2) * x(2));
        }
        return 0;
    }

    std::span<const double> t_;
    std::span<const double> c_;
};

void check_inputs(const Propagator& u, std::size_t i, std::size_t j, const char* what) {
    const std::size_t n = u.size();
    if (u.u.rows() != u.u.cols() || n == 0)
        throw InvalidArgument(std::string(what) + ": propagator must be square");
    if (i >= n || j >= n)
        throw OutOfRange(std::string(what) + ": input port out of range for " +
                         std::to_string(n) + " guides");
    if (i == j)
        throw UnsupportedInput(std::string(what) +
                               ": both photons in one guide is not supported (i == j)");
}

// Fills the symmetric matrix from f(k, l) evaluated for k <= l.
template <typename F>
Eigen::MatrixXd symmetric_fill(Eigen::Index n, F&& f) {
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = k; l < n; ++l) {
            const double v = f(k, l) / (k == l ? 2.0 : 1.0);
            m(k, l) = v;
            m(l, k) = v;
        }
    return m;
}

} // namespace

std::string_view to_string(CorrelationKind kind) {
    switch (kind) {
    case CorrelationKind::indistinguishable: return "indistinguishable";
    case CorrelationKind::distinguishable: return "distinguishable";
    case CorrelationKind::difference: return "difference";
    case CorrelationKind::imported: return "imported";
    }
    return "unknown";
}

double CorrelationMatrix::upper_triangle_sum() const {
    return values.triangularView<Eigen::Upper>().toDenseMatrix().sum();
}

void check_probability(const CorrelationMatrix& gamma, double tol) {
    if (gamma.kind == CorrelationKind::difference)
        throw NumericalError("difference matrices are not probability distributions");
    if (gamma.values.rows() != gamma.values.cols())
        throw NumericalError("correlation matrix is not square");
    if (!gamma.values.allFinite()) throw NumericalError("correlation matrix has non-finite entries");
    if ((gamma.values - gamma.values.transpose()).cwiseAbs().maxCoeff() > 0.0)
        throw NumericalError("correlation matrix is not symmetric");
    if (gamma.values.minCoeff() < 0.0)
        throw NumericalError("correlation matrix has negative entries");
    const double total = gamma.upper_triangle_sum();
    if (std::abs(total - 1.0) > tol)
        throw NumericalError("correlation matrix sums to " + std::to_string(total) +
                             " over k <= l, expected 1");
}

CorrelationMatrix gamma_indistinguishable(const Propagator& u, std::size_t i, std::size_t j) {
    check_inputs(u, i, j, "gamma_indistinguishable");
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(j);
    const auto& U = u.u;
    return {symmetric_fill(U.rows(),
                           [&](Eigen::Index k, Eigen::Index l) {
                               return std::norm(U(k, a) * U(l, b) + U(k, b) * U(l, a));
                           }),
            CorrelationKind::indistinguishable};
}

CorrelationMatrix gamma_distinguishable(const Propagator& u, std::size_t i, std::size_t j) {
    check_inputs(u, i, j, "gamma_distinguishable");
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(j);
    const auto& U = u.u;
    return {symmetric_fill(U.rows(),
                           [&](Eigen::Index k, Eigen::Index l) {
                               return std::norm(U(k, a) * U(l, b)) +
                                      std::norm(U(l, a) * U(k, b));
                           }),
            CorrelationKind::distinguishable};
}

CorrelationMatrix quantum_difference(const Propagator& u, std::size_t i, std::size_t j) {
    CorrelationMatrix d = gamma_distinguishable(u, i, j);
    d.values -= gamma_indistinguishable(u, i, j).values;
    d.kind = CorrelationKind::difference;
    return d;
}

CorrelationMatrix fock_oracle(const Propagator& u, std::size_t i, std::size_t j) {
    check_inputs(u, i, j, "fock_oracle");
    const auto n = static_cast<std::size_t>(u.u.rows());
    using Occupation = std::vector<int>;
    using State = std::map<Occupation, cplx>;

    // Apply sum_k U(k, input) b_k^dag with b^dag |.., n_k, ..> = sqrt(n_k + 1) |.., n_k + 1, ..>.
    auto create = [&](const State& in, std::size_t input) {
        State out;
        for (const auto& [occ, amp] : in)
            for (std::size_t k = 0; k < n; ++k) {
                const cplx coeff = u.u(static_cast<Eigen::Index>(k),
                                       static_cast<Eigen::Index>(input));
                if (coeff == cplx{}) continue;
                Occupation next = occ;
                const double boson = std::sqrt(static_cast<double>(next[k] + 1));
                ++next[k];
                out[next] += amp * coeff * boson;
            }
        return out;
    };

    State vacuum{{Occupation(n, 0), cplx{1.0, 0.0}}};
    const State two_photon = create(create(vacuum, j), i);

    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                  static_cast<Eigen::Index>(n));
    for (const auto& [occ, amp] : two_photon) {
        std::vector<Eigen::Index> modes;
        for (std::size_t k = 0; k < n; ++k)
            for (int c = 0; c < occ[k]; ++c) modes.push_back(static_cast<Eigen::Index>(k));
        const double p = std::norm(amp);
        gamma(modes[0], modes[1]) = p;
        gamma(modes[1], modes[0]) = p;
    }
    return {gamma, CorrelationKind::indistinguishable};
}

double mode_overlap(double delay, double coherence_sigma) {
    if (!(coherence_sigma > 0.0))
        throw InvalidArgument("coherence sigma must be positive");
    return std::exp(-delay * delay / (2.0 * coherence_sigma * coherence_sigma));
}

std::vector<double> HomScan::coincidence(std::size_t k, std::size_t l) const {
    const auto n = indistinguishable.size();
    if (k >= n || l >= n) throw OutOfRange("HomScan::coincidence: output port out of range");
    std::vector<double> out;
    out.reserve(coincidences.size());
    for (const auto& c : coincidences)
        out.push_back(c(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)));
    return out;
}

HomScan hom_scan(const Propagator& u, std::size_t i, std::size_t j,
                 std::span<const double> delays, double coherence_sigma) {
    if (!(coherence_sigma > 0.0))
        throw InvalidArgument("hom_scan: coherence sigma must be positive");
    HomScan scan;
    scan.delays.assign(delays.begin(), delays.end());
    scan.coherence_sigma = coherence_sigma;
    scan.indistinguishable = gamma_indistinguishable(u, i, j);
    scan.distinguishable = gamma_distinguishable(u, i, j);
    const Eigen::MatrixXd interference =
        scan.indistinguishable.values - scan.distinguishable.values;
    scan.coincidences.reserve(delays.size());
    for (double d : delays) {
        const double g = mode_overlap(d, coherence_sigma);
        if (g == 1.0)
            scan.coincidences.push_back(scan.indistinguishable.values);
        else
            scan.coincidences.push_back(scan.distinguishable.values + g * interference);
    }
    return scan;
}

GaussianDipFit fit_gaussian_dip(std::span<const double> delays, std::span<const double> counts) {
    if (delays.size() != counts.size())
        throw InvalidArgument("fit_gaussian_dip: delays and counts differ in length");
    if (delays.size() < 3) throw InvalidArgument("fit_gaussian_dip: need at least 3 samples");
    const auto m = static_cast<Eigen::Index>(delays.size());

    // Start from the outermost samples as baseline and the extreme deviation
    // as the dip; width from the second moment of the deviation.
    const auto [lo, hi] = std::minmax_element(delays.begin(), delays.end());
    const auto idx_lo = static_cast<std::size_t>(lo - delays.begin());
    const auto idx_hi = static_cast<std::size_t>(hi - delays.begin());
    double baseline = 0.5 * (counts[idx_lo] + counts[idx_hi]);
    if (!(baseline > 0.0)) baseline = *std::max_element(counts.begin(), counts.end());
    if (!(baseline > 0.0))
        throw UndefinedVisibility("fit_gaussian_dip: all coincidences are zero");
    std::size_t extreme = 0;
    for (std::size_t k = 1; k < counts.size(); ++k)
        if (std::abs(counts[k] - baseline) > std::abs(counts[extreme] - baseline)) extreme = k;
    double depth = 1.0 - counts[extreme] / baseline;
    double wsum = 0.0, w2sum = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const double dev = std::abs(counts[k] - baseline);
        wsum += dev;
        w2sum += dev * delays[k] * delays[k];
    }
    double width = wsum > 0.0 ? std::sqrt(w2sum / wsum) : 0.5 * (*hi - *lo);
    if (!(width > 0.0)) width = 1.0;

    DipModel model(delays, counts);
    Eigen::VectorXd x(3);
    x << baseline, depth, width;
    Eigen::LevenbergMarquardt<DipModel> lm(model);
    lm.setFtol(1e-15);
    lm.setXtol(1e-15);
    lm.setMaxfev(2000);
    const auto status = lm.minimize(x);

    GaussianDipFit fit;
    fit.baseline = x(0);
    fit.depth = x(1);
    fit.width = std::abs(x(2));
    fit.iterations = static_cast<int>(lm.iterations());
    fit.converged = status == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::CosinusTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::FtolTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::XtolTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::GtolTooSmall;
    Eigen::VectorXd r(m);
    model(x, r);
    fit.rms_residual = std::sqrt(r.squaredNorm() / static_cast<double>(m));
    if (!x.allFinite()) throw NumericalError("fit_gaussian_dip: fit diverged");
    return fit;
}

double visibility(std::span<const double> counts) {
    if (counts.empty()) throw InvalidArgument("visibility: empty scan");
    const auto [mn, mx] = std::minmax_element(counts.begin(), counts.end());
    if (!(*mx > 0.0))
        throw UndefinedVisibility("visibility: maximum coincidence is zero");
    return (*mx - *mn) / *mx;
}

double visibility(std::span<const double> delays, std::span<const double> counts,
                  VisibilityMode mode) {
    if (mode == VisibilityMode::raw) return visibility(counts);
    const GaussianDipFit fit = fit_gaussian_dip(delays, counts);
    if (!(fit.baseline > 0.0))
        throw UndefinedVisibility("visibility: fitted baseline is not positive");
    return fit.visibility();
}

double visibility(const HomScan& scan, std::size_t k, std::size_t l, VisibilityMode mode) {
    const auto c = scan.coincidence(k, l);
    return visibility(scan.delays, c, mode);
}

double similarity(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidArgument("similarity: matrices differ in shape");
    if (a.size() == 0) throw InvalidArgument("similarity: empty matrices");
    if (!a.allFinite() || !b.allFinite())
        throw InvalidArgument("similarity: non-finite entries");
    if (a.minCoeff() < 0.0 || b.minCoeff() < 0.0)
        throw InvalidArgument("similarity: entries must be non-negative");
    const double sa = a.sum();
    const double sb = b.sum();
    if (!(sa > 0.0) || !(sb > 0.0))
        throw InvalidArgument("similarity: a matrix sums to zero");
    const double overlap = (a.array() * b.array()).sqrt().sum();
    return overlap * overlap / (sa * sb);
}

} // namespace photonwalk
