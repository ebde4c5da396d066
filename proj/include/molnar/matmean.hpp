#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "molnar/errors.hpp"

namespace molnar {

enum class Definiteness { positive_definite, positive_semidefinite };

/// Hermitian positive-(semi)definite matrix with its eigendecomposition
/// computed once at construction. Immutable; all operations on it are pure.
/// Desk scale by design: everything goes through a full self-adjoint
/// eigensolve, no iterative matrix-function schemes.
class PosDefMatrix {
public:
    explicit PosDefMatrix(Eigen::MatrixXcd entries,
                          Definiteness mode = Definiteness::positive_definite)
        : mode_(mode) {
        if (entries.rows() == 0 || entries.rows() != entries.cols())
            throw domain_error("PosDefMatrix: matrix must be square and nonempty");
        const double scale = std::max(entries.norm(), 1e-300);
        if ((entries - entries.adjoint()).norm() > 1e-13 * scale)
            throw domain_error("PosDefMatrix: matrix is not Hermitian to 1e-13 relative");
        entries_ = 0.5 * (entries + entries.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries_);
        if (es.info() != Eigen::Success)
            throw consistency_error("PosDefMatrix: eigendecomposition failed");
        eigenvalues_ = es.eigenvalues();
        eigenvectors_ = es.eigenvectors();
        const double lo = eigenvalues_(0);
        if (mode == Definiteness::positive_definite) {
            if (!(lo > 0.0))
                throw domain_error("PosDefMatrix: matrix is not strictly positive definite "
                                   "(min eigenvalue " + std::to_string(lo) + ")");
        } else if (lo < -1e-12 * scale) {
            throw domain_error("PosDefMatrix: matrix is not positive semidefinite "
                               "(min eigenvalue " + std::to_string(lo) + ")");
        }
    }

    static PosDefMatrix identity(int n) {
        return PosDefMatrix(Eigen::MatrixXcd::Identity(n, n));
    }

    static PosDefMatrix diagonal(const std::vector<double>& d,
                                 Definiteness mode = Definiteness::positive_definite) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<int>(d.size()),
                                                    static_cast<int>(d.size()));
        for (int i = 0; i < static_cast<int>(d.size()); ++i) m(i, i) = d[static_cast<size_t>(i)];
        return PosDefMatrix(std::move(m), mode);
    }

    int dim() const { return static_cast<int>(entries_.rows()); }
    Definiteness mode() const { return mode_; }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXcd& eigenvectors() const { return eigenvectors_; }

    bool strictly_positive() const { return eigenvalues_(0) > 0.0; }

    /// Spectral norm (largest |eigenvalue|).
    double norm() const {
        return std::max(std::abs(eigenvalues_(0)), std::abs(eigenvalues_(dim() - 1)));
    }

    Eigen::MatrixXcd sqrt() const {
        Eigen::VectorXd s(dim());
        for (int i = 0; i < dim(); ++i) s(i) = std::sqrt(std::max(eigenvalues_(i), 0.0));
        return eigenvectors_ * s.asDiagonal() * eigenvectors_.adjoint();
    }

    Eigen::MatrixXcd inv_sqrt() const {
        if (!strictly_positive())
            throw domain_error("PosDefMatrix::inv_sqrt: matrix is singular");
        Eigen::VectorXd s(dim());
        for (int i = 0; i < dim(); ++i) s(i) = 1.0 / std::sqrt(eigenvalues_(i));
        return eigenvectors_ * s.asDiagonal() * eigenvectors_.adjoint();
    }

    Eigen::MatrixXcd inverse() const {
        if (!strictly_positive())
            throw domain_error("PosDefMatrix::inverse: matrix is singular");
        Eigen::VectorXd s(dim());
        for (int i = 0; i < dim(); ++i) s(i) = 1.0 / eigenvalues_(i);
        return eigenvectors_ * s.asDiagonal() * eigenvectors_.adjoint();
    }

private:
    Definiteness mode_;
    Eigen::MatrixXcd entries_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXcd eigenvectors_;
};

namespace detail {

inline Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& m) {
    return 0.5 * (m + m.adjoint());
}

/// U f(lambda) U^* on an already-extracted spectral pair; eigenvalues are
/// clamped at zero so that roundoff-negative values of semidefinite inputs
/// hit the scalar function inside its domain.
template <class Func>
Eigen::MatrixXcd apply_spectral(Func&& f, const Eigen::VectorXd& evals,
                                const Eigen::MatrixXcd& evecs) {
    Eigen::VectorXd mapped(evals.size());
    for (int i = 0; i < evals.size(); ++i)
        mapped(i) = f(std::max(evals(i), 0.0));
    return evecs * mapped.asDiagonal() * evecs.adjoint();
}

/// Nearest positive semidefinite matrix to the Hermitian part of h. Mean
/// values are PSD in exact arithmetic, but near-singular congruences (the
/// regularization schedule reaches condition numbers ~1e9) leave negative
/// roundoff dust beyond any fixed relative floor.
inline Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(h));
    Eigen::VectorXd evals = es.eigenvalues();
    for (int i = 0; i < evals.size(); ++i) evals(i) = std::max(evals(i), 0.0);
    const Eigen::MatrixXcd m = es.eigenvectors() *
                               evals.cast<std::complex<double>>().asDiagonal() *
                               es.eigenvectors().adjoint();
    return hermitize(m);
}

} // namespace detail

/// Smallest eigenvalue of the Hermitian part of h; the workhorse of every
/// Loewner-order assertion in the test batteries.
inline double min_eigenvalue(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(detail::hermitize(h),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/// Functional calculus f(A) = U f(Lambda) U^* for strictly positive A and a
/// scalar f on (0, inf). Func is anything callable as double -> double,
/// e.g. a representing function.
template <class Func>
PosDefMatrix mat_apply(Func&& f, const PosDefMatrix& a) {
    if (!a.strictly_positive())
        throw domain_error("mat_apply: input must be strictly positive definite");
    Eigen::MatrixXcd r = detail::apply_spectral(f, a.eigenvalues(), a.eigenvectors());
    return PosDefMatrix(detail::hermitize(r), Definiteness::positive_semidefinite);
}

/// The Kubo-Ando mean induced by a representing function f:
///   A sigma B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}.
/// A must be strictly positive; B may be semidefinite. Every intermediate
/// congruence is re-Hermitized before its eigensolve.
template <class Func>
PosDefMatrix kubo_ando_mean(Func&& f, const PosDefMatrix& a, const PosDefMatrix& b) {
    if (a.dim() != b.dim())
        throw domain_error("kubo_ando_mean: dimension mismatch");
    if (!a.strictly_positive())
        throw domain_error("kubo_ando_mean: first argument must be strictly positive definite");
    const Eigen::MatrixXcd a_half = a.sqrt();
    const Eigen::MatrixXcd a_inv_half = a.inv_sqrt();
    const Eigen::MatrixXcd congruence =
        detail::hermitize(a_inv_half * b.entries() * a_inv_half);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(congruence);
    if (es.info() != Eigen::Success)
        throw consistency_error("kubo_ando_mean: eigendecomposition failed");
    const Eigen::MatrixXcd inner =
        detail::apply_spectral(f, es.eigenvalues(), es.eigenvectors());
    return PosDefMatrix(detail::project_psd(a_half * inner * a_half),
                        Definiteness::positive_semidefinite);
}

enum class ClassicalKind { arithmetic, harmonic, geometric, parallel_sum };

/// Closed-form classical means: arithmetic (A+B)/2, harmonic
/// 2(A^{-1}+B^{-1})^{-1}, geometric A^{1/2}(A^{-1/2}BA^{-1/2})^{1/2}A^{1/2},
/// and the parallel sum A:B = (A^{-1}+B^{-1})^{-1}, half the harmonic mean.
inline PosDefMatrix classical_mean(ClassicalKind kind, const PosDefMatrix& a,
                                   const PosDefMatrix& b) {
    if (a.dim() != b.dim())
        throw domain_error("classical_mean: dimension mismatch");
    switch (kind) {
        case ClassicalKind::arithmetic:
            return PosDefMatrix(0.5 * (a.entries() + b.entries()),
                                Definiteness::positive_semidefinite);
        case ClassicalKind::harmonic:
        case ClassicalKind::parallel_sum: {
            if (!a.strictly_positive() || !b.strictly_positive())
                throw domain_error("classical_mean: harmonic/parallel sum needs invertible inputs");
            const Eigen::MatrixXcd sum = a.inverse() + b.inverse();
            const PosDefMatrix s(detail::hermitize(sum));
            const double factor = (kind == ClassicalKind::harmonic) ? 2.0 : 1.0;
            return PosDefMatrix(factor * s.inverse(), Definiteness::positive_semidefinite);
        }
        case ClassicalKind::geometric: {
            if (!a.strictly_positive() || !b.strictly_positive())
                throw domain_error("classical_mean: geometric mean needs invertible inputs");
            return kubo_ando_mean([](double x) { return std::sqrt(x); }, a, b);
        }
    }
    throw domain_error("classical_mean: unknown kind");
}

struct RegularizedMeanResult {
    PosDefMatrix value;
    double cauchy_gap;  ///< Frobenius distance between the last two iterates
    bool converged;     ///< gap <= 1e-6 at the end of the schedule
};

/// Mean of semidefinite inputs by the regularization limit: evaluates
/// (A + eps I) sigma_f (B + eps I) along a decreasing schedule (default
/// eps = 1e-2 * 2^{-k}, k = 0..20) and returns the final iterate together
/// with the Cauchy gap. A large gap is reported, not thrown.
template <class Func>
RegularizedMeanResult regularized_mean(Func&& f, const PosDefMatrix& a, const PosDefMatrix& b,
                                       std::vector<double> eps_schedule = {}) {
    if (a.dim() != b.dim())
        throw domain_error("regularized_mean: dimension mismatch");
    if (eps_schedule.empty())
        for (int k = 0; k <= 20; ++k) eps_schedule.push_back(1e-2 * std::ldexp(1.0, -k));
    for (std::size_t i = 0; i < eps_schedule.size(); ++i)
        if (!(eps_schedule[i] > 0.0) || (i > 0 && eps_schedule[i] >= eps_schedule[i - 1]))
            throw domain_error("regularized_mean: schedule must be positive and decreasing");

    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(a.dim(), a.dim());
    Eigen::MatrixXcd last;
    double gap = 0.0;
    for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
        const double eps = eps_schedule[k];
        const PosDefMatrix ak(a.entries() + eps * id);
        const PosDefMatrix bk(b.entries() + eps * id);
        Eigen::MatrixXcd cur = kubo_ando_mean(f, ak, bk).entries();
        if (k > 0) gap = (cur - last).norm();
        last = std::move(cur);
    }
    return {PosDefMatrix(last, Definiteness::positive_semidefinite), gap, gap <= 1e-6};
}

} // namespace molnar
