#include "ssf/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ssf {

HermitianOperator::HermitianOperator(const Matrix& entries) {
    if (entries.rows() != entries.cols() || entries.rows() == 0)
        throw std::invalid_argument("HermitianOperator: matrix must be square and nonempty");
    const double scale = entries.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * std::max(scale, 1e-300);
    for (Eigen::Index i = 0; i < entries.rows(); ++i)
        for (Eigen::Index j = i; j < entries.cols(); ++j) {
            const double gap = std::abs(entries(i, j) - std::conj(entries(j, i)));
            if (gap > tol)
                throw HermiticityError(static_cast<int>(i), static_cast<int>(j), gap);
        }
    mat_ = 0.5 * (entries + entries.adjoint().eval());
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
    if (other.dim() != dim())
        throw std::invalid_argument("HermitianOperator: dimension mismatch");
    return HermitianOperator(mat_ + other.mat_);
}

HermitianOperator HermitianOperator::scaled(double s) const {
    return HermitianOperator(mat_ * s);
}

Matrix SpectralDecomposition::reconstruct() const {
    Matrix sum = Matrix::Zero(dim_, dim_);
    for (std::size_t l = 0; l < eigenvalues_.size(); ++l)
        sum += eigenvalues_[l] * projections_[l];
    return sum;
}

double default_cluster_tolerance(const HermitianOperator& op) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix(), Eigen::EigenvaluesOnly);
    const double radius =
        solver.info() == Eigen::Success ? solver.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
    return 1e-10 * (1.0 + radius);
}

SpectralDecomposition decompose(const HermitianOperator& op, double cluster_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix());
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("decompose: eigensolver did not converge");
    if (cluster_tol < 0.0)
        cluster_tol = 1e-10 * (1.0 + solver.eigenvalues().cwiseAbs().maxCoeff());

    SpectralDecomposition dec;
    dec.dim_ = op.dim();
    dec.cluster_tol_ = cluster_tol;

    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    Eigen::Index i = 0;
    while (i < vals.size()) {
        Eigen::Index j = i + 1;
        while (j < vals.size() && vals(j) - vals(j - 1) <= cluster_tol) ++j;
        double mean = 0.0;
        Matrix proj = Matrix::Zero(op.dim(), op.dim());
        for (Eigen::Index k = i; k < j; ++k) {
            mean += vals(k);
            proj += vecs.col(k) * vecs.col(k).adjoint();
        }
        mean /= static_cast<double>(j - i);
        dec.eigenvalues_.push_back(mean);
        dec.projections_.push_back(std::move(proj));
        dec.multiplicities_.push_back(static_cast<int>(j - i));
        i = j;
    }
    return dec;
}

Matrix apply_scalar(const SpectralDecomposition& dec, const std::function<cplx(double)>& fn) {
    Matrix out = Matrix::Zero(dec.dim(), dec.dim());
    for (std::size_t l = 0; l < dec.distinct_count(); ++l)
        out += fn(dec.eigenvalues()[l]) * dec.projections()[l];
    return out;
}

Matrix apply_function(const SpectralDecomposition& dec, const SmoothTestFunction& f,
                      int order) {
    return apply_scalar(dec, [&](double t) { return f.derivative(order, t); });
}

double schatten_norm(const Matrix& a, double p) {
    if (p < 1.0) throw std::invalid_argument("schatten_norm: p must be >= 1");
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& sv = svd.singularValues();
    if (std::isinf(p)) return sv.size() ? sv.maxCoeff() : 0.0;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        sum += std::pow(sv(i), p);
    return std::pow(sum, 1.0 / p);
}

int counting_function(const SpectralDecomposition& dec, double t) {
    int count = 0;
    for (std::size_t l = 0; l < dec.distinct_count(); ++l)
        if (dec.eigenvalues()[l] <= t) count += dec.multiplicities()[l];
    return count;
}

GridProjectionFamily grid_projections(const SpectralDecomposition& dec, int resolution) {
    if (resolution < 1)
        throw std::invalid_argument("grid_projections: resolution must be >= 1");
    GridProjectionFamily family;
    family.resolution = resolution;
    for (std::size_t l = 0; l < dec.distinct_count(); ++l) {
        const long cell =
            static_cast<long>(std::floor(dec.eigenvalues()[l] * resolution));
        auto [it, fresh] = family.cells.try_emplace(cell, dec.projections()[l]);
        if (!fresh) it->second += dec.projections()[l];
    }
    return family;
}

} // namespace ssf
