#pragma once

#include <cmath>
#include <stdexcept>

#include "ebsim/complex_matrix.hpp"
#include "ebsim/eigen.hpp"

namespace ebsim {

enum class Subsystem { first, second };

// Validated quantum state: Hermitian, unit trace and PSD within tolerance.
// Eigenvalues in [-tol, 0) are clamped to zero and the trace renormalized;
// larger violations are rejected.
class DensityMatrix {
  public:
    explicit DensityMatrix(const ComplexMatrix& m, double tol = 1e-10) : mat_(m.dim()), tol_(tol) {
        if (!is_finite(m)) throw std::invalid_argument("density matrix: non-finite entries");
        if (hermiticity_defect(m) > tol)
            throw std::invalid_argument("density matrix: not Hermitian within tolerance");
        const int n = m.dim();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) mat_(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

        if (std::abs(mat_.trace() - cplx{1.0, 0.0}) > tol)
            throw std::invalid_argument("density matrix: trace differs from one");

        const Eigensystem es = hermitian_eigensystem(mat_);
        const double min_eig = es.values.back();
        if (min_eig < -tol) throw std::invalid_argument("density matrix: negative eigenvalue");
        if (min_eig < 0.0) {
            ComplexMatrix fixed(n);
            double total = 0.0;
            for (int k = 0; k < n; ++k) {
                const double lambda = std::max(0.0, es.values[static_cast<std::size_t>(k)]);
                total += lambda;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        fixed(i, j) += lambda * es.vectors(i, k) * std::conj(es.vectors(j, k));
            }
            mat_ = (1.0 / total) * fixed;
        }
    }

    const ComplexMatrix& mat() const { return mat_; }
    int dim() const { return mat_.dim(); }
    double tolerance() const { return tol_; }

  private:
    ComplexMatrix mat_;
    double tol_;
};

// Transpose of the chosen tensor factor of a two-qubit state. The result is
// Hermitian with the same trace but generally not PSD.
inline ComplexMatrix partial_transpose(const DensityMatrix& rho, Subsystem subsystem) {
    if (rho.dim() != 4) throw std::invalid_argument("partial_transpose: state must be two-qubit");
    const ComplexMatrix& m = rho.mat();
    ComplexMatrix r(4);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l) {
                    if (subsystem == Subsystem::first)
                        r(2 * i + k, 2 * j + l) = m(2 * j + k, 2 * i + l);
                    else
                        r(2 * i + k, 2 * j + l) = m(2 * i + l, 2 * j + k);
                }
    return r;
}

// Reduced state of the kept qubit.
inline DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
    if (rho.dim() != 4) throw std::invalid_argument("partial_trace: state must be two-qubit");
    const ComplexMatrix& m = rho.mat();
    ComplexMatrix r(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                if (keep == Subsystem::first)
                    r(i, j) += m(2 * i + k, 2 * j + k);
                else
                    r(i, j) += m(2 * k + i, 2 * k + j);
            }
    return DensityMatrix(r, rho.tolerance());
}

// (|01> + |10>)/sqrt(2); the probe state channels are applied to one side of.
inline ComplexMatrix bell_psi_plus_projector() {
    const double s = 1.0 / std::sqrt(2.0);
    return outer(std::array<cplx, 4>{cplx{0.0, 0.0}, cplx{s, 0.0}, cplx{s, 0.0}, cplx{0.0, 0.0}});
}

// (|00> + |11>)/sqrt(2).
inline ComplexMatrix bell_phi_plus_projector() {
    const double s = 1.0 / std::sqrt(2.0);
    return outer(std::array<cplx, 4>{cplx{s, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{s, 0.0}});
}

}  // namespace ebsim
