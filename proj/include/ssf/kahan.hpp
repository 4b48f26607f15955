// kahan.hpp — compensated accumulators for deterministic reductions.
//
// Every multi-term sum in the library goes through one of these, in a fixed
// iteration order, so results are identical run to run and across thread
// counts (parallel callers must partition the index space and merge in a
// fixed order).

#pragma once

#include <Eigen/Dense>

#include <complex>

namespace ssf {

// Kahan–Neumaier running sum for a scalar (double or std::complex<double>).
template <class T>
class KahanSum {
public:
    void add(const T& x) {
        const T y = x - comp_;
        const T t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    T value() const { return sum_; }

private:
    T sum_{};
    T comp_{};
};

// Entrywise-compensated accumulator for complex matrices of a fixed shape.
class KahanMatrixSum {
public:
    KahanMatrixSum(Eigen::Index rows, Eigen::Index cols)
        : sum_(Eigen::MatrixXcd::Zero(rows, cols)),
          comp_(Eigen::MatrixXcd::Zero(rows, cols)) {}

    void add(const Eigen::MatrixXcd& x) {
        const Eigen::MatrixXcd y = x - comp_;
        const Eigen::MatrixXcd t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    const Eigen::MatrixXcd& value() const { return sum_; }

private:
    Eigen::MatrixXcd sum_;
    Eigen::MatrixXcd comp_;
};

} // namespace ssf
