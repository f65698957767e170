#include "tsreason/numerics/linreg.hpp"

#include <Eigen/Dense>

#include "tsreason/core/error.hpp"

namespace tsreason::numerics {

LstsqResult lstsq(const Matrix& X, const std::vector<double>& y, double lambda,
                  bool allow_rank_deficient) {
    if (X.rows == 0 || X.cols == 0 || X.rows != y.size())
        fail("ShapeMismatch", "lstsq: design is " + std::to_string(X.rows) + "x" +
                                  std::to_string(X.cols) + " for " + std::to_string(y.size()) +
                                  " targets");
    if (X.rows < X.cols)
        fail("SingularRegression", "lstsq: fewer rows (" + std::to_string(X.rows) +
                                       ") than coefficients (" + std::to_string(X.cols) + ")");

    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMat> A(X.data.data(), static_cast<Eigen::Index>(X.rows),
                                     static_cast<Eigen::Index>(X.cols));
    const Eigen::Map<const Eigen::VectorXd> b(y.data(), static_cast<Eigen::Index>(y.size()));

    LstsqResult result;
    Eigen::VectorXd beta;
    if (lambda > 0.0) {
        Eigen::MatrixXd gram = A.transpose() * A;
        for (Eigen::Index j = 1; j < gram.rows(); ++j) gram(j, j) += lambda;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
        if (ldlt.info() != Eigen::Success)
            fail("SingularRegression", "ridge normal equations are not solvable");
        beta = ldlt.solve(A.transpose() * b);
        result.rank = static_cast<long>(X.cols);
    } else {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
        result.rank = static_cast<long>(cod.rank());
        if (result.rank < static_cast<long>(X.cols) && !allow_rank_deficient)
            fail("SingularRegression", "design matrix is rank deficient (rank " +
                                           std::to_string(result.rank) + " of " +
                                           std::to_string(X.cols) + ")");
        beta = cod.solve(b);
    }

    result.beta.assign(beta.data(), beta.data() + beta.size());
    result.rss = (b - A * beta).squaredNorm();

    if (lambda == 0.0 && result.rank == static_cast<long>(X.cols) && X.rows > X.cols) {
        const double sigma2 = result.rss / static_cast<double>(X.rows - X.cols);
        const Eigen::MatrixXd gram_inv =
            (A.transpose() * A).ldlt().solve(Eigen::MatrixXd::Identity(
                static_cast<Eigen::Index>(X.cols), static_cast<Eigen::Index>(X.cols)));
        result.std_errors.resize(X.cols);
        for (std::size_t j = 0; j < X.cols; ++j)
            result.std_errors[j] = std::sqrt(sigma2 * gram_inv(static_cast<Eigen::Index>(j),
                                                               static_cast<Eigen::Index>(j)));
    }
    return result;
}

}  // namespace tsreason::numerics
