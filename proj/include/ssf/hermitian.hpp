// hermitian.hpp — Hermitian matrices, spectral decompositions with
// multiplicity clustering, projection families and Schatten norms. The
// substrate every other module consumes.

#pragma once

#include "ssf/test_function.hpp"

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace ssf {

using Matrix = Eigen::MatrixXcd;

// Raised when an input matrix fails the conjugate-symmetry check; carries
// the first offending entry so callers can point at it.
class HermiticityError : public std::invalid_argument {
public:
    HermiticityError(int row, int col, double violation)
        : std::invalid_argument("matrix is not Hermitian at entry (" +
                                std::to_string(row) + "," + std::to_string(col) +
                                "), asymmetry " + std::to_string(violation)),
          row_(row), col_(col) {}
    int row() const { return row_; }
    int col() const { return col_; }

private:
    int row_, col_;
};

// A d x d Hermitian matrix. Construction validates conjugate symmetry to
// 1e-12 * max|entry| and stores the exactly symmetrized matrix.
class HermitianOperator {
public:
    explicit HermitianOperator(const Matrix& entries);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& matrix() const { return mat_; }

    HermitianOperator operator+(const HermitianOperator& other) const;
    HermitianOperator scaled(double s) const;

private:
    Matrix mat_;
};

// Eigenvalues clustered to distinct values, one orthogonal projection per
// cluster. All downstream notions of "equal eigenvalue" (confluent divided
// differences, spline knots, measure atoms) refer to this clustering.
class SpectralDecomposition {
public:
    int dim() const { return dim_; }
    double cluster_tolerance() const { return cluster_tol_; }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    const std::vector<Matrix>& projections() const { return projections_; }
    const std::vector<int>& multiplicities() const { return multiplicities_; }
    std::size_t distinct_count() const { return eigenvalues_.size(); }

    double spectrum_min() const { return eigenvalues_.front(); }
    double spectrum_max() const { return eigenvalues_.back(); }

    Matrix reconstruct() const;

    friend SpectralDecomposition decompose(const HermitianOperator&, double);

private:
    int dim_ = 0;
    double cluster_tol_ = 0.0;
    std::vector<double> eigenvalues_;
    std::vector<Matrix> projections_;
    std::vector<int> multiplicities_;
};

// Grid cell family E_{l} = spectral projection onto eigenvalues in
// [l/m, (l+1)/m). Cells with no eigenvalue are absent from the map.
struct GridProjectionFamily {
    int resolution = 1;
    std::map<long, Matrix> cells;
};

// Cluster tolerance used when the caller does not pass one.
double default_cluster_tolerance(const HermitianOperator& op);

SpectralDecomposition decompose(const HermitianOperator& op, double cluster_tol = -1.0);

// sum f(lambda_l) E_l for an arbitrary scalar function.
Matrix apply_scalar(const SpectralDecomposition& dec, const std::function<cplx(double)>& fn);

// sum f^{(order)}(lambda_l) E_l.
Matrix apply_function(const SpectralDecomposition& dec, const SmoothTestFunction& f,
                      int order = 0);

// (sum s_i^p)^{1/p} over singular values; p = infinity gives max s_i.
double schatten_norm(const Matrix& a, double p);

// Number of eigenvalues <= t, counted with multiplicity.
int counting_function(const SpectralDecomposition& dec, double t);

GridProjectionFamily grid_projections(const SpectralDecomposition& dec, int resolution);

} // namespace ssf
