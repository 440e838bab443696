#include "wh/classify.hpp"

#include "wh/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace wh {

namespace {

double mat_max(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Orthonormal basis of the columns keeping singular values above tol.
Eigen::MatrixXd span_abs(const Eigen::MatrixXd& columns, double tol)
{
    if (columns.cols() == 0 || columns.rows() == 0) return Eigen::MatrixXd(columns.rows(), 0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns, Eigen::ComputeThinU);
    int rank = 0;
    while (rank < svd.singularValues().size() && svd.singularValues()[rank] > tol) ++rank;
    return svd.matrixU().leftCols(rank);
}

// Orthonormal basis of {c : |m c| small}, singular values at or below tol.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double tol)
{
    const auto cols = m.cols();
    if (cols == 0) return Eigen::MatrixXd(0, 0);
    if (m.rows() == 0) return Eigen::MatrixXd::Identity(cols, cols);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    int rank = 0;
    while (rank < sv.size() && sv[rank] > tol) ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

// Least-squares (minimum norm) solution of Y = M C for M.
Eigen::MatrixXd fit_linear(const Eigen::MatrixXd& y, const Eigen::MatrixXd& c)
{
    if (c.rows() == 0) return Eigen::MatrixXd::Zero(y.rows(), 0);
    const Eigen::MatrixXd mt = c.transpose().completeOrthogonalDecomposition().solve(y.transpose());
    return mt.transpose();
}

int count_above(const Eigen::MatrixXd& m, double tol)
{
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    int r = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()[k] > tol) ++r;
    return r;
}

}  // namespace

std::string to_string(HolonomyType t)
{
    switch (t) {
    case HolonomyType::Type1: return "1";
    case HolonomyType::Type2: return "2";
    case HolonomyType::Type3: return "3";
    case HolonomyType::Type4: return "4";
    case HolonomyType::Indeterminate: break;
    }
    return "indeterminate";
}

double default_tolerance(double fallback)
{
    if (const char* env = std::getenv("WH_TOL"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
            throw DomainError(std::string("WH_TOL is not a positive number: ") + env);
        return v;
    }
    return fallback;
}

HolonomyReport classify(const AlgebraBasis& basis, int n, double tol)
{
    const int m = n * (n - 1) / 2;
    const int vdim = LorentzBlockElement::vector_dim(n);
    HolonomyReport rep;
    rep.n = n;

    for (const auto& e : basis.elements)
        if (e.n() != n || (e.A + e.A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, e.norm()))
            throw DomainError("basis element is not of block form");

    Eigen::MatrixXd raw(vdim, basis.dim());
    for (int k = 0; k < basis.dim(); ++k) raw.col(k) = basis.elements[static_cast<size_t>(k)].to_vector();
    const Eigen::MatrixXd b = orthonormal_span(raw, tol);
    rep.algebra_dim = static_cast<int>(b.cols());
    if (b.cols() == 0) {
        rep.reason = "holonomy algebra is trivial";
        return rep;
    }

    const Eigen::RowVectorXd a_row = b.row(0);
    const Eigen::MatrixXd xs = b.middleRows(1, n);
    const Eigen::MatrixXd as = b.bottomRows(m);

    // Bracket-closure of the orthogonal part, its derived algebra and centre.
    Eigen::MatrixXd h = span_abs(as, tol);
    for (int round = 0; round < 10 && h.cols() > 1; ++round) {
        Eigen::MatrixXd cols(m, h.cols() + h.cols() * (h.cols() - 1) / 2);
        cols.leftCols(h.cols()) = h;
        int c = static_cast<int>(h.cols());
        for (int i = 0; i < h.cols(); ++i)
            for (int j = i + 1; j < h.cols(); ++j) {
                const Eigen::MatrixXd hi = so_from_vector(h.col(i), n), hj = so_from_vector(h.col(j), n);
                cols.col(c++) = so_to_vector(hi * hj - hj * hi);
            }
        const Eigen::MatrixXd next = span_abs(cols, tol);
        if (next.cols() == h.cols()) break;
        h = next;
    }
    const int hdim = static_cast<int>(h.cols());
    std::vector<Eigen::MatrixXd> hm;
    for (int i = 0; i < hdim; ++i) hm.push_back(so_from_vector(h.col(i), n));
    rep.h_basis = hm;

    Eigen::MatrixXd derived(m, hdim * std::max(0, hdim - 1) / 2);
    int c = 0;
    for (int i = 0; i < hdim; ++i)
        for (int j = i + 1; j < hdim; ++j) derived.col(c++) = so_to_vector(hm[i] * hm[j] - hm[j] * hm[i]);
    const Eigen::MatrixXd h_prime = span_abs(derived, tol);
    rep.h_prime_dim = static_cast<int>(h_prime.cols());

    Eigen::MatrixXd ad(static_cast<Eigen::Index>(hdim) * m, hdim);
    for (int j = 0; j < hdim; ++j)
        for (int i = 0; i < hdim; ++i) ad.block(i * m, j, m, 1) = so_to_vector(hm[j] * hm[i] - hm[i] * hm[j]);
    rep.center_dim = hdim == 0 ? 0 : static_cast<int>(null_space(ad, tol).cols());

    rep.weakly_irreducible = span_abs(xs, tol).cols() == n;
    if (!rep.weakly_irreducible) {
        rep.reason = "x-rows do not span the screen (not weakly irreducible)";
        return rep;
    }

    // Translations: x-rows of combinations with vanishing orthogonal part.
    const Eigen::MatrixXd pure = null_space(as, tol);
    const Eigen::MatrixXd v1 = span_abs(xs * pure, tol);
    const Eigen::MatrixXd coords = h.transpose() * as;  // A in the h basis

    rep.residuals["a_norm"] = a_row.cwiseAbs().maxCoeff();
    if (a_row.cwiseAbs().maxCoeff() <= tol) {
        if (v1.cols() == n) {
            rep.type = HolonomyType::Type2;
            return rep;
        }
        const Eigen::MatrixXd q2 = null_space(v1.transpose(), 0.5);
        rep.n1 = static_cast<int>(v1.cols());
        rep.n2 = static_cast<int>(q2.cols());
        double kill = 0.0;
        for (const auto& hi : hm) kill = std::max(kill, mat_max(hi * q2));
        rep.residuals["h_on_complement"] = kill;
        const Eigen::MatrixXd target = q2.transpose() * xs;
        const Eigen::MatrixXd psi = fit_linear(target, coords);
        const double fit = mat_max(target - psi * coords);
        const double on_derived = h_prime.cols() == 0 ? 0.0 : mat_max(psi * h.transpose() * h_prime);
        const int psi_rank = count_above(psi, tol);
        rep.residuals["psi_fit"] = fit;
        rep.residuals["psi_on_derived"] = on_derived;
        rep.split = q2;
        rep.psi = psi * h.transpose();
        if (kill > tol) rep.reason = "orthogonal part does not annihilate the complement of the translations";
        else if (fit > tol) rep.reason = "x-rows are not a linear function of the orthogonal part";
        else if (on_derived > tol) rep.reason = "psi does not vanish on the derived algebra";
        else if (psi_rank < rep.n2) rep.reason = "psi is not surjective";
        else rep.type = HolonomyType::Type4;
        return rep;
    }

    rep.residuals["translations"] = static_cast<double>(n - v1.cols());
    if (v1.cols() != n) {
        rep.reason = "boost part present but the translations do not fill the screen";
        return rep;
    }
    const Eigen::VectorXd unit = Eigen::VectorXd::Unit(vdim, 0);
    const double boost = (unit - b * (b.transpose() * unit)).norm();
    rep.residuals["pure_boost"] = boost;
    if (boost <= tol) {
        rep.type = HolonomyType::Type1;
        return rep;
    }
    const Eigen::MatrixXd phi = fit_linear(a_row, coords);
    const double fit = mat_max(a_row - phi * coords);
    const double on_derived = h_prime.cols() == 0 ? 0.0 : mat_max(phi * h.transpose() * h_prime);
    rep.residuals["phi_fit"] = fit;
    rep.residuals["phi_on_derived"] = on_derived;
    rep.phi = (phi * h.transpose()).transpose();
    if (fit > tol) rep.reason = "boost part is not a linear function of the orthogonal part";
    else if (on_derived > tol) rep.reason = "phi does not vanish on the derived algebra";
    else rep.type = HolonomyType::Type3;
    return rep;
}

HolonomyReport classify_elements(const std::vector<LorentzBlockElement>& elements, int n, double tol)
{
    return classify(lie_closure(elements, tol, n), n, tol);
}

}  // namespace wh
