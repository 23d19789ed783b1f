#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ebsim/channel.hpp"
#include "ebsim/complex_matrix.hpp"
#include "ebsim/density.hpp"

namespace ebtest {

using ebsim::ComplexMatrix;
using ebsim::cplx;

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double real(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    cplx gauss() {
        std::normal_distribution<double> n(0.0, 1.0);
        return cplx{n(engine_), n(engine_)};
    }

  private:
    std::mt19937_64 engine_;
};

inline ComplexMatrix random_ginibre(Rng& rng, int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = rng.gauss();
    return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, int dim) {
    const ComplexMatrix g = random_ginibre(rng, dim);
    return 0.5 * (g + ebsim::adjoint(g));
}

inline ComplexMatrix random_psd(Rng& rng, int dim) {
    const ComplexMatrix g = random_ginibre(rng, dim);
    return g * ebsim::adjoint(g);
}

inline ebsim::DensityMatrix random_state(Rng& rng, int dim) {
    ComplexMatrix m = random_psd(rng, dim);
    m *= cplx{1.0 / m.trace().real(), 0.0};
    return ebsim::DensityMatrix(m);
}

// Haar-ish 2x2 unitary via Gram-Schmidt on a Ginibre sample.
inline ComplexMatrix random_unitary2(Rng& rng) {
    const ComplexMatrix g = random_ginibre(rng, 2);
    std::array<cplx, 2> c0{g(0, 0), g(1, 0)};
    std::array<cplx, 2> c1{g(0, 1), g(1, 1)};
    double n0 = std::sqrt(std::norm(c0[0]) + std::norm(c0[1]));
    c0[0] /= n0;
    c0[1] /= n0;
    const cplx overlap = std::conj(c0[0]) * c1[0] + std::conj(c0[1]) * c1[1];
    c1[0] -= overlap * c0[0];
    c1[1] -= overlap * c0[1];
    const double n1 = std::sqrt(std::norm(c1[0]) + std::norm(c1[1]));
    c1[0] /= n1;
    c1[1] /= n1;
    ComplexMatrix u(2);
    u(0, 0) = c0[0];
    u(1, 0) = c0[1];
    u(0, 1) = c1[0];
    u(1, 1) = c1[1];
    return u;
}

// Random trace-preserving qubit channel from a Stinespring isometry with a
// qubit environment: two orthonormal 4-vectors reshaped into two Kraus
// operators.
inline ebsim::KrausChannel random_tp_channel(Rng& rng) {
    const ComplexMatrix g = random_ginibre(rng, 4);
    std::array<cplx, 4> v0{};
    std::array<cplx, 4> v1{};
    for (int i = 0; i < 4; ++i) {
        v0[static_cast<std::size_t>(i)] = g(i, 0);
        v1[static_cast<std::size_t>(i)] = g(i, 1);
    }
    double n0 = 0.0;
    for (const cplx& c : v0) n0 += std::norm(c);
    n0 = std::sqrt(n0);
    for (cplx& c : v0) c /= n0;
    cplx overlap{0.0, 0.0};
    for (int i = 0; i < 4; ++i)
        overlap += std::conj(v0[static_cast<std::size_t>(i)]) * v1[static_cast<std::size_t>(i)];
    for (int i = 0; i < 4; ++i)
        v1[static_cast<std::size_t>(i)] -= overlap * v0[static_cast<std::size_t>(i)];
    double n1 = 0.0;
    for (const cplx& c : v1) n1 += std::norm(c);
    n1 = std::sqrt(n1);
    for (cplx& c : v1) c /= n1;

    ComplexMatrix k0(2);
    ComplexMatrix k1(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            // row index of the isometry = 2 * system + environment
            k0(i, j) = (j == 0 ? v0 : v1)[static_cast<std::size_t>(2 * i + 0)];
            k1(i, j) = (j == 0 ? v0 : v1)[static_cast<std::size_t>(2 * i + 1)];
        }
    return ebsim::KrausChannel({k0, k1});
}

}  // namespace ebtest
