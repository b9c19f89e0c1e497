#include "akgraph/spectral.hpp"

#include "akgraph/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace akgraph {

namespace {

// Applies the rotation in the (p, q) plane that annihilates a(p, q),
// accumulating it into v.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
    const std::size_t n = a.rows();
    const double apq = a(p, q);
    const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
    double t;
    if (std::abs(tau) > 1e150)
        t = 0.5 / tau;
    else
        t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    for (std::size_t k = 0; k < n; ++k) {
        const double akp = a(k, p), akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double apk = a(p, k), aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double vkp = v(k, p), vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
    }
}

} // namespace

SpectralDecomposition eig_symmetric(const Matrix& m, const JacobiOptions& opts) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw ValidationError("eig_symmetric: matrix is not square");
    const double scale = frobenius_norm(m);
    if (!std::isfinite(scale)) throw ValidationError("eig_symmetric: non-finite entry");
    if (asymmetry(m) > 1e-12 * std::max(1.0, scale)) throw ValidationError("eig_symmetric: matrix is not symmetric");

    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
    Matrix v = Matrix::identity(n);

    const double threshold = opts.tolerance * scale;
    bool converged = false;
    for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(a(p, q)) > threshold) {
                    rotate(a, v, p, q);
                    rotated = true;
                }
        converged = !rotated;
    }
    if (!converged) {
        std::ostringstream os;
        os << "eig_symmetric: no convergence after " << opts.max_sweeps << " sweeps";
        throw NumericError(os.str());
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&a](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    SpectralDecomposition dec;
    dec.eigenvalues.resize(n);
    dec.eigenvectors = Matrix(n, n);
    for (std::size_t m_idx = 0; m_idx < n; ++m_idx) {
        const std::size_t src = order[m_idx];
        dec.eigenvalues[m_idx] = a(src, src);
        Vector col = v.column(src);
        std::size_t big = 0;
        for (std::size_t k = 1; k < n; ++k)
            if (std::abs(col[k]) > std::abs(col[big])) big = k;
        if (col[big] < 0.0)
            for (double& x : col) x = -x;
        dec.eigenvectors.set_column(m_idx, col);
    }
    return dec;
}

FrobeniusPair frobenius_pair(const SpectralDecomposition& dec, std::span<const double> technology) {
    const std::size_t n = dec.size();
    if (n == 0) throw ValidationError("frobenius_pair: empty decomposition");
    FrobeniusPair fp;
    fp.lambda0 = dec.eigenvalues[0];
    fp.b0 = dec.eigenvector(0);
    if (n > 1 && !(fp.lambda0 - dec.eigenvalues[1] > 1e-12)) {
        std::ostringstream os;
        os << "frobenius_pair: top eigenvalue is not simple (gap " << fp.lambda0 - dec.eigenvalues[1] << ")";
        throw NumericError(os.str());
    }
    // The sign convention already makes the dominant entry positive, so a
    // Perron vector arrives positive; anything else is reducible or noise.
    for (std::size_t i = 0; i < n; ++i)
        if (!(fp.b0[i] > 1e-10)) {
            std::ostringstream os;
            os << "frobenius_pair: eigenvector component " << i + 1 << " is not strictly positive (" << fp.b0[i]
               << "); matrix reducible?";
            throw NumericError(os.str());
        }
    const double nrm = norm2(fp.b0);
    for (double& x : fp.b0) x /= nrm;

    if (!technology.empty()) {
        const auto [lo, hi] = std::minmax_element(technology.begin(), technology.end());
        const double slack = 1e-12 * std::max(1.0, std::abs(fp.lambda0));
        if (fp.lambda0 < *lo - slack || fp.lambda0 > *hi + slack) {
            std::ostringstream os;
            os << "frobenius_pair: lambda0 = " << fp.lambda0 << " outside [min A, max A] = [" << *lo << ", " << *hi
               << "]";
            throw AssumptionError(os.str());
        }
    }
    return fp;
}

TwoNodeSpectrum two_node_closed_form(double a1, double a2, double w) {
    if (!(w >= 0.0)) throw DomainError("two_node_closed_form: negative weight");
    if (!(a1 > 0.0) || !(a2 > 0.0)) throw DomainError("two_node_closed_form: technology must be positive");
    const double mean = 0.5 * (a1 + a2);
    const double d = 0.5 * (a1 - a2);
    const double s = std::hypot(w, d);
    TwoNodeSpectrum out;
    // -w + sqrt(w^2 + d^2) rewritten to avoid cancellation for large w.
    out.lambda0 = (s + w > 0.0) ? mean + d * d / (s + w) : mean;
    // (A1 - w - lambda0) b1 + w b2 = 0 gives b2/b1 = (s - d)/w = w/(s + d).
    if (d == 0.0)
        out.ratio = 1.0;
    else if (d < 0.0)
        out.ratio = (w > 0.0) ? (s - d) / w : std::numeric_limits<double>::infinity();
    else
        out.ratio = w / (s + d);
    return out;
}

} // namespace akgraph
