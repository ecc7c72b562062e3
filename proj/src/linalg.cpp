#include "framekit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "framekit/error.hpp"

namespace framekit::linalg {

void TolerancePolicy::validate() const {
    if (!(eig_tol > 0.0 && eig_tol <= rank_tol_rel && rank_tol_rel < 1.0))
        throw Error(ErrorCode::invalid_input,
                    "tolerance policy requires 0 < eig_tol <= rank_tol_rel < 1 (got eig_tol=" +
                        std::to_string(eig_tol) + ", rank_tol_rel=" + std::to_string(rank_tol_rel) + ")");
}

Matrix gram(const FrameFamily& vectors) {
    const Matrix& f = vectors.matrix();
    Matrix g = f.transpose() * f;
    // Exact symmetry; the product is symmetric only up to rounding.
    return (0.5 * (g + g.transpose())).eval();
}

void require_symmetric(const Matrix& m) {
    if (m.rows() != m.cols())
        throw Error(ErrorCode::invalid_input, "matrix is " + std::to_string(m.rows()) + "x" +
                                                  std::to_string(m.cols()) + ", expected square");
    const double scale = std::max(1.0, m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff());
    const double asym = m.size() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        throw Error(ErrorCode::invalid_input,
                    "matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
}

std::vector<double> sym_eigenvalues(const Matrix& m) {
    require_symmetric(m);
    if (m.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::degenerate_input, "symmetric eigensolver did not converge");
    const Vector& values = solver.eigenvalues();
    return {values.data(), values.data() + values.size()};
}

std::vector<double> singular_values(const Matrix& m) {
    if (m.size() == 0) return {};
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& values = svd.singularValues();
    return {values.data(), values.data() + values.size()};
}

std::size_t numerical_rank(const std::vector<double>& singular_values_desc, const TolerancePolicy& tol) {
    if (singular_values_desc.empty()) return 0;
    const double cutoff = tol.rank_tol_rel * singular_values_desc.front();
    return static_cast<std::size_t>(std::count_if(singular_values_desc.begin(), singular_values_desc.end(),
                                                  [&](double s) { return s > cutoff; }));
}

Orthonormalized orthonormalize(const FrameFamily& vectors, const TolerancePolicy& tol) {
    if (vectors.empty()) throw Error(ErrorCode::invalid_input, "orthonormalize needs a nonempty family");
    const double threshold = tol.rank_tol_rel * vectors.max_norm();
    const auto dim = static_cast<Eigen::Index>(vectors.dim());

    Matrix q(dim, std::min<Eigen::Index>(dim, static_cast<Eigen::Index>(vectors.size())));
    Eigen::Index rank = 0;
    std::vector<std::size_t> selected;
    std::vector<std::string> labels;

    if (vectors.max_norm() > 0.0) {
        for (std::size_t i = 0; i < vectors.size() && rank < dim; ++i) {
            Vector r = vectors.matrix().col(static_cast<Eigen::Index>(i));
            for (int pass = 0; pass < 2; ++pass)
                for (Eigen::Index j = 0; j < rank; ++j) r -= q.col(j).dot(r) * q.col(j);
            const double residual = r.norm();
            if (residual > threshold) {
                q.col(rank++) = r / residual;
                selected.push_back(i);
                labels.push_back(vectors.label(i));
            }
        }
    }
    return {FrameFamily(q.leftCols(rank), std::move(labels)), std::move(selected)};
}

}  // namespace framekit::linalg
