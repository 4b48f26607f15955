// rng.hpp — seeded deterministic random draws. Distributions are coded by
// hand (bit-shift uniforms, Box–Muller normals) so streams do not depend on
// the standard library implementation; per-item substreams are derived with
// splitmix64, which keeps parallel suite runs independent of the thread
// partition.

#pragma once

#include "ssf/hermitian.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ssf {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// substream seed for item `index` of a suite seeded by `seed`
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 0x9e3779b97f4a7c15ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    double normal() {
        // Box–Muller; one value per draw keeps the stream simple
        double u = uniform01();
        if (u <= 0.0) u = 0x1.0p-53;
        const double v = uniform01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }
    cplx complex_normal() {
        double u = uniform01();
        if (u <= 0.0) u = 0x1.0p-53;
        const double v = uniform01();
        const double r = std::sqrt(-std::log(u));
        return {r * std::cos(2.0 * std::numbers::pi * v),
                r * std::sin(2.0 * std::numbers::pi * v)};
    }

private:
    std::mt19937_64 engine_;
};

// Unitary drawn from the QR of a complex Gaussian matrix, with the R
// diagonal phases absorbed.
inline Matrix haar_like_unitary(int dim, Rng& rng) {
    Matrix z(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) z(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const cplx d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0.0) ? d / a : cplx(1.0, 0.0);
    }
    return q;
}

// Hermitian matrix with eigenvalues uniform in [-spread, spread] and a
// Haar-like eigenbasis.
inline HermitianOperator random_hermitian(int dim, double spread, Rng& rng) {
    Eigen::VectorXd eigs(dim);
    for (int i = 0; i < dim; ++i) eigs(i) = rng.uniform(-spread, spread);
    const Matrix q = haar_like_unitary(dim, rng);
    const Matrix m = q * eigs.asDiagonal() * q.adjoint();
    return HermitianOperator(0.5 * (m + m.adjoint().eval()));
}

} // namespace ssf
