#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ebsim {

using cplx = std::complex<double>;

// Dense row-major complex matrix of dimension 2 or 4. Value type, cheap to
// copy; all channel and state algebra in this library runs on these.
class ComplexMatrix {
  public:
    explicit ComplexMatrix(int dim) : dim_(checked_dim(dim)) { entries_.fill(cplx{0.0, 0.0}); }

    static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return dim_; }

    cplx& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i * dim_ + j)]; }
    const cplx& operator()(int i, int j) const {
        return entries_[static_cast<std::size_t>(i * dim_ + j)];
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_dim(o);
        for (int k = 0; k < dim_ * dim_; ++k)
            entries_[static_cast<std::size_t>(k)] += o.entries_[static_cast<std::size_t>(k)];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_dim(o);
        for (int k = 0; k < dim_ * dim_; ++k)
            entries_[static_cast<std::size_t>(k)] -= o.entries_[static_cast<std::size_t>(k)];
        return *this;
    }

    ComplexMatrix& operator*=(cplx s) {
        for (int k = 0; k < dim_ * dim_; ++k) entries_[static_cast<std::size_t>(k)] *= s;
        return *this;
    }

    cplx trace() const {
        cplx t{0.0, 0.0};
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (int k = 0; k < dim_ * dim_; ++k) s += std::norm(entries_[static_cast<std::size_t>(k)]);
        return std::sqrt(s);
    }

  private:
    static int checked_dim(int dim) {
        if (dim != 2 && dim != 4) throw std::invalid_argument("matrix dimension must be 2 or 4");
        return dim;
    }

    void require_same_dim(const ComplexMatrix& o) const {
        if (o.dim_ != dim_) throw std::invalid_argument("matrix dimension mismatch");
    }

    int dim_;
    std::array<cplx, 16> entries_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
inline ComplexMatrix operator*(ComplexMatrix m, cplx s) { return m *= s; }
inline ComplexMatrix operator*(double s, ComplexMatrix m) { return m *= cplx{s, 0.0}; }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matrix dimension mismatch");
    const int n = a.dim();
    ComplexMatrix c(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{0.0, 0.0}) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix r(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) r(i, j) = std::conj(m(j, i));
    return r;
}

inline ComplexMatrix transpose(const ComplexMatrix& m) {
    ComplexMatrix r(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) r(i, j) = m(j, i);
    return r;
}

inline ComplexMatrix conjugate(const ComplexMatrix& m) {
    ComplexMatrix r(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) r(i, j) = std::conj(m(i, j));
    return r;
}

inline bool is_finite(const ComplexMatrix& m) {
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).frobenius_norm();
}

// Largest |a_ij - conj(a_ji)| over all pairs; zero for exactly Hermitian input.
inline double hermiticity_defect(const ComplexMatrix& m) {
    double d = 0.0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
    return d;
}

// Kronecker product. Only 2x2 (x) 2x2 is representable; anything larger is
// outside the supported dimensions.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() * b.dim() > 4)
        throw std::invalid_argument("tensor product dimension exceeds 4");
    const int n = a.dim() * b.dim();
    ComplexMatrix r(n);
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            for (int k = 0; k < b.dim(); ++k)
                for (int l = 0; l < b.dim(); ++l)
                    r(i * b.dim() + k, j * b.dim() + l) = a(i, j) * b(k, l);
    return r;
}

inline ComplexMatrix pauli_x() {
    ComplexMatrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

inline ComplexMatrix pauli_y() {
    ComplexMatrix m(2);
    m(0, 1) = cplx{0.0, -1.0};
    m(1, 0) = cplx{0.0, 1.0};
    return m;
}

inline ComplexMatrix pauli_z() {
    ComplexMatrix m(2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

inline ComplexMatrix outer(const std::array<cplx, 2>& v) {
    ComplexMatrix m(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            m(i, j) = v[static_cast<std::size_t>(i)] * std::conj(v[static_cast<std::size_t>(j)]);
    return m;
}

inline ComplexMatrix outer(const std::array<cplx, 4>& v) {
    ComplexMatrix m(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m(i, j) = v[static_cast<std::size_t>(i)] * std::conj(v[static_cast<std::size_t>(j)]);
    return m;
}

}  // namespace ebsim
