#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "ebsim/channel.hpp"
#include "ebsim/complex_matrix.hpp"
#include "ebsim/density.hpp"
#include "ebsim/eigen.hpp"

namespace ebsim {

// Wootters concurrence of a two-qubit state, via the Hermitian route: the
// spin-flip spectrum is read off sqrt(rho) rho~ sqrt(rho) instead of the
// non-Hermitian product rho rho~.
inline double concurrence(const DensityMatrix& rho) {
    if (rho.dim() != 4) throw std::invalid_argument("concurrence: state must be two-qubit");
    const ComplexMatrix yy = tensor(pauli_y(), pauli_y());
    const ComplexMatrix flipped = yy * conjugate(rho.mat()) * yy;
    const ComplexMatrix root = psd_sqrt(rho.mat());
    const Eigensystem es = hermitian_eigensystem(root * flipped * root);
    // Spectrum values at the rounding shelf are exact zeros of the product;
    // square-rooting the noise instead would cost ~1e-9 per eigenvalue.
    const double shelf = std::max(es.values.front(), 0.0) * 1e-13;
    double lambda[4];
    for (int k = 0; k < 4; ++k) {
        const double v = es.values[static_cast<std::size_t>(k)];
        lambda[k] = v <= shelf ? 0.0 : std::sqrt(v);
    }
    const double c = lambda[0] - lambda[1] - lambda[2] - lambda[3];
    return std::clamp(c, 0.0, 1.0);
}

// Sum of |negative eigenvalues| of the partial transpose; positive exactly
// for entangled two-qubit states.
inline double negativity(const DensityMatrix& rho) {
    if (rho.dim() != 4) throw std::invalid_argument("negativity: state must be two-qubit");
    const Eigensystem es = hermitian_eigensystem(partial_transpose(rho, Subsystem::second));
    double n = 0.0;
    for (double v : es.values)
        if (v < 0.0) n -= v;
    return n;
}

// PPT separability test; necessary and sufficient on two qubits.
inline bool is_separable(const DensityMatrix& rho, double tol = 1e-9) {
    return negativity(rho) <= tol;
}

struct EbVerdict {
    bool is_eb;
    double negativity;
    double choi_concurrence;
    double tolerance;
};

// Entanglement-breaking test: a channel is EB exactly when its Choi state is
// separable.
inline EbVerdict is_eb(const KrausChannel& phi, double tol = 1e-9) {
    const DensityMatrix c = choi(phi);
    const double neg = negativity(c);
    return EbVerdict{neg <= tol, neg, concurrence(c), tol};
}

// Smallest repetition count k <= n_max whose k-fold composition is EB. Every
// k is checked in order; monotonicity in k is not assumed for rotated maps.
inline std::optional<int> eb_order(const KrausChannel& phi, int n_max, double tol = 1e-9) {
    if (n_max < 1) throw std::invalid_argument("eb_order: n_max must be at least 1");
    KrausChannel power = identity_channel();
    for (int k = 1; k <= n_max; ++k) {
        power = compose(phi, power);
        if (is_eb(power, tol).is_eb) return k;
    }
    return std::nullopt;
}

// Mixture of the (|01>+|10>)/sqrt(2) projector with white noise, parametrized
// by its fidelity F to that state; F = 1 is the pure state, F = 0.25 the
// maximally mixed one.
inline DensityMatrix werner_state(double fidelity) {
    if (!(fidelity >= 0.25 && fidelity <= 1.0))
        throw std::invalid_argument("werner_state: fidelity outside [0.25, 1]");
    const double w = (4.0 * fidelity - 1.0) / 3.0;
    const ComplexMatrix m =
        w * bell_psi_plus_projector() + ((1.0 - w) / 4.0) * ComplexMatrix::identity(4);
    return DensityMatrix(m);
}

}  // namespace ebsim
