#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ebsim/complex_matrix.hpp"

namespace ebsim {

struct Eigensystem {
    std::vector<double> values;  // real, sorted descending
    ComplexMatrix vectors;       // orthonormal columns, values[k] <-> column k
};

namespace detail {

// Sum of |a_ij|^2 over i != j.
inline double off_diagonal_mass(const ComplexMatrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

}  // namespace detail

// Hermitian eigendecomposition by cyclic Jacobi rotations. Converges when the
// off-diagonal Frobenius mass drops below 1e-13; gives up after 100 sweeps.
inline Eigensystem hermitian_eigensystem(const ComplexMatrix& h) {
    if (!is_finite(h)) throw std::invalid_argument("eigensystem: non-finite entries");
    if (hermiticity_defect(h) > 1e-10)
        throw std::invalid_argument("eigensystem: input is not Hermitian");

    const int n = h.dim();
    // Work on the symmetrized copy so rounding in the input cannot leak into
    // the rotations.
    ComplexMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    constexpr double off_tol = 1e-13;
    constexpr int max_sweeps = 100;

    int sweep = 0;
    while (detail::off_diagonal_mass(a) > off_tol) {
        if (++sweep > max_sweeps)
            throw std::runtime_error("eigensystem: Jacobi iteration did not converge");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                const cplx phase = apq / r;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
                // small root of t^2 - 2 tau t - 1 = 0
                double t;
                if (std::isinf(tau)) {
                    t = 0.0;
                } else if (tau >= 0.0) {
                    t = -1.0 / (tau + std::sqrt(1.0 + tau * tau));
                } else {
                    t = 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Plane rotation zeroing a(p,q): g(p,p)=c, g(p,q)=-s*phase,
                // g(q,p)=s*conj(phase), g(q,q)=c.
                ComplexMatrix g = ComplexMatrix::identity(n);
                g(p, p) = c;
                g(p, q) = -s * phase;
                g(q, p) = s * std::conj(phase);
                g(q, q) = c;

                a = adjoint(g) * a * g;
                v = v * g;
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&a](int lhs, int rhs) { return a(lhs, lhs).real() > a(rhs, rhs).real(); });

    Eigensystem out{std::vector<double>(static_cast<std::size_t>(n)), ComplexMatrix(n)};
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        out.values[static_cast<std::size_t>(k)] = a(src, src).real();
        for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, src);
    }
    return out;
}

// Hermitian square root of a PSD matrix. Eigenvalues in [-1e-9, 0) are
// treated as rounding and clamped; anything lower is rejected.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    const Eigensystem es = hermitian_eigensystem(m);
    const int n = m.dim();
    ComplexMatrix r(n);
    for (int k = 0; k < n; ++k) {
        double lambda = es.values[static_cast<std::size_t>(k)];
        if (lambda < -1e-9) throw std::invalid_argument("psd_sqrt: matrix is not PSD");
        if (lambda < 0.0) lambda = 0.0;
        const double s = std::sqrt(lambda);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r(i, j) += s * es.vectors(i, k) * std::conj(es.vectors(j, k));
    }
    return r;
}

}  // namespace ebsim
