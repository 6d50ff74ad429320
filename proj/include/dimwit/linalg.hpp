#ifndef DIMWIT_LINALG_HPP_
#define DIMWIT_LINALG_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "dimwit/errors.hpp"

namespace dimwit
{

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Largest |A_ij - conj(A_ji)| over all entries.
inline double hermiticity_defect(const CMatrix& a)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = i; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    return worst;
}

/// Frobenius norm of the strictly off-diagonal part.
inline double off_diagonal_norm(const CMatrix& a)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (i != j)
                s += std::norm(a(i, j));
    return std::sqrt(s);
}

/// Eigenpairs of a Hermitian matrix, eigenvalues in non-increasing order.
/// Column i of `vectors` is the unit eigenvector for `values[i]`.
struct HermitianEigen
{
    Eigen::VectorXd values;
    CMatrix vectors;
    int sweeps = 0;
};

/** @brief Cyclic Jacobi eigensolver for small dense Hermitian matrices.
 *
 *  Each rotation first removes the phase of the pivot A_pq, then applies the
 *  real symmetric Jacobi rotation to the (p,q) plane. Sweeps continue until
 *  the off-diagonal Frobenius norm drops below `off_tol`.
 *
 *  Ties in the eigenvalue ordering keep the original basis order, so a
 *  diagonal (or zero) input returns basis vectors in index order.
 */
inline HermitianEigen hermitian_eigen(const CMatrix& input,
                                      double off_tol = 1e-13,
                                      int max_sweeps = 100)
{
    if (input.rows() != input.cols())
        throw ShapeError("hermitian_eigen: matrix is not square");
    const Eigen::Index n = input.rows();
    const double scale = std::max(1.0, input.cwiseAbs().maxCoeff());
    if (hermiticity_defect(input) > 1e-12 * scale)
        throw NumericError("hermitian_eigen: input is not Hermitian");

    CMatrix a = input;
    for (Eigen::Index i = 0; i < n; ++i)
        a(i, i) = a(i, i).real();
    CMatrix v = CMatrix::Identity(n, n);

    int sweep = 0;
    while (off_diagonal_norm(a) >= off_tol)
    {
        if (sweep == max_sweeps)
            throw NumericError("hermitian_eigen: no convergence");
        ++sweep;
        for (Eigen::Index p = 0; p < n - 1; ++p)
        {
            for (Eigen::Index q = p + 1; q < n; ++q)
            {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0)
                    continue;
                const Complex phase = a(p, q) / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // U on the (p,q) plane: [[c, s], [-s conj(phase), c conj(phase)]]
                const Complex upp = c;
                const Complex upq = s;
                const Complex uqp = -s * std::conj(phase);
                const Complex uqq = c * std::conj(phase);

                for (Eigen::Index k = 0; k < n; ++k)
                {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * upp + akq * uqp;
                    a(k, q) = akp * upq + akq * uqq;
                }
                for (Eigen::Index k = 0; k < n; ++k)
                {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
                    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k)
                {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * upp + vkq * uqp;
                    v(k, q) = vkp * upq + vkq * uqq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return a(i, i).real() > a(j, j).real();
    });

    HermitianEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    out.sweeps = sweep;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]).real();
        out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

/// Haar-ish random unitary: Gram-Schmidt on a matrix of complex Gaussians.
template <typename Rng>
CMatrix random_unitary(Eigen::Index d, Rng& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix g(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i)
        {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex(re, im);
        }

    for (Eigen::Index j = 0; j < d; ++j)
    {
        // two passes of modified Gram-Schmidt keep orthogonality near machine precision
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index i = 0; i < j; ++i)
                g.col(j) -= g.col(i).dot(g.col(j)) * g.col(i);
        const double nrm = g.col(j).norm();
        if (nrm < 1e-12)
            throw NumericError("random_unitary: degenerate Gaussian sample");
        g.col(j) /= nrm;
    }
    return g;
}

} // namespace dimwit

#endif // DIMWIT_LINALG_HPP_
