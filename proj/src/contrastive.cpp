#include "sgcl/contrastive.hpp"

#include <cmath>

#include "sgcl/errors.hpp"

namespace sgcl {

namespace {

// Logits S_ij = tau * u_i . v_j; reductions below run in fixed index order so
// results are bit-reproducible.
Matrix logits(const Matrix& U, const Matrix& V, double tau) {
    const Eigen::Index n = U.rows();
    const Eigen::Index t = V.rows();
    Matrix S(n, t);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < t; ++j) S(i, j) = tau * U.row(i).dot(V.row(j));
    return S;
}

double logsumexp_row(const Matrix& S, Eigen::Index i) {
    double hi = S(i, 0);
    for (Eigen::Index j = 1; j < S.cols(); ++j) hi = std::max(hi, S(i, j));
    double sum = 0.0;
    for (Eigen::Index j = 0; j < S.cols(); ++j) sum += std::exp(S(i, j) - hi);
    return hi + std::log(sum);
}

double logsumexp_col(const Matrix& S, Eigen::Index j) {
    double hi = S(0, j);
    for (Eigen::Index i = 1; i < S.rows(); ++i) hi = std::max(hi, S(i, j));
    double sum = 0.0;
    for (Eigen::Index i = 0; i < S.rows(); ++i) sum += std::exp(S(i, j) - hi);
    return hi + std::log(sum);
}

// Fill gradients from the matrix A = dL/dS.
LossResult assemble(double value, const Matrix& A, const Matrix& S, const Matrix& U,
                    const Matrix& V, double tau) {
    LossResult res;
    res.value = value;
    res.grad_images = tau * (A * V);
    res.grad_texts = tau * (A.transpose() * U);
    res.grad_log_tau = A.cwiseProduct(S).sum();  // = tau * dL/dtau
    return res;
}

}  // namespace

Vector normalize(const Vector& v) {
    const double norm = v.norm();
    if (norm <= 0.0 || !std::isfinite(norm)) throw ZeroVector("cannot normalize zero vector");
    return v / norm;
}

LossResult clip_loss(const Matrix& U, const Matrix& V, double tau) {
    if (U.rows() != V.rows() || U.cols() != V.cols())
        throw ShapeMismatch("clip_loss requires U and V of equal shape");
    if (U.rows() < 1) throw ShapeMismatch("clip_loss requires n >= 1");
    const Eigen::Index n = U.rows();
    const double inv_n = 1.0 / static_cast<double>(n);

    const Matrix S = logits(U, V, tau);
    double value = 0.0;
    Matrix A = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {  // image-to-text direction
        const double lse = logsumexp_row(S, i);
        value += 0.5 * inv_n * (lse - S(i, i));
        for (Eigen::Index j = 0; j < n; ++j)
            A(i, j) += 0.5 * inv_n * (std::exp(S(i, j) - lse) - (i == j ? 1.0 : 0.0));
    }
    for (Eigen::Index j = 0; j < n; ++j) {  // text-to-image direction
        const double lse = logsumexp_col(S, j);
        value += 0.5 * inv_n * (lse - S(j, j));
        for (Eigen::Index i = 0; i < n; ++i)
            A(i, j) += 0.5 * inv_n * (std::exp(S(i, j) - lse) - (i == j ? 1.0 : 0.0));
    }
    return assemble(value, A, S, U, V, tau);
}

LossResult multi_positive_i2t(const Matrix& U, const Matrix& V,
                              const std::vector<std::vector<int>>& pos_sets, double tau) {
    if (U.cols() != V.cols()) throw ShapeMismatch("embedding dimensions differ");
    if (static_cast<Eigen::Index>(pos_sets.size()) != U.rows())
        throw ShapeMismatch("pos_sets size must equal image count");
    const Eigen::Index n = U.rows();
    const Eigen::Index t = V.rows();

    const Matrix S = logits(U, V, tau);
    double value = 0.0;
    Matrix A = Matrix::Zero(n, t);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& set = pos_sets[i];
        if (set.empty()) throw EmptyPositiveSet("image " + std::to_string(i) + " has no positives");
        const double inv_p = 1.0 / static_cast<double>(set.size());
        const double lse = logsumexp_row(S, i);
        for (int k : set) {
            if (k < 0 || k >= t) throw ShapeMismatch("positive index out of range");
            value += inv_p * (lse - S(i, k));
            A(i, k) -= inv_p;
        }
        for (Eigen::Index j = 0; j < t; ++j) A(i, j) += std::exp(S(i, j) - lse);
    }
    return assemble(value, A, S, U, V, tau);
}

LossResult multi_positive_t2i(const Matrix& U, const Matrix& V,
                              const std::vector<int>& pos_owner, int n_pos, double tau) {
    if (U.cols() != V.cols()) throw ShapeMismatch("embedding dimensions differ");
    if (n_pos > V.rows()) throw ShapeMismatch("n_pos exceeds text count");
    if (static_cast<int>(pos_owner.size()) < n_pos)
        throw ShapeMismatch("pos_owner shorter than n_pos");
    const Eigen::Index n = U.rows();
    const Eigen::Index t = V.rows();

    const Matrix S = logits(U, V, tau);
    double value = 0.0;
    Matrix A = Matrix::Zero(n, t);  // columns j >= n_pos stay zero
    for (int j = 0; j < n_pos; ++j) {
        const int owner = pos_owner[j];
        if (owner < 0 || owner >= n) throw ShapeMismatch("pos_owner out of range");
        const double lse = logsumexp_col(S, j);
        value += lse - S(owner, j);
        for (Eigen::Index i = 0; i < n; ++i)
            A(i, j) += std::exp(S(i, j) - lse) - (i == owner ? 1.0 : 0.0);
    }
    return assemble(value, A, S, U, V, tau);
}

LossResult multi_positive_loss(const Matrix& U, const Matrix& V,
                               const std::vector<std::vector<int>>& pos_sets,
                               const std::vector<int>& pos_owner, int n_pos, double tau) {
    LossResult i2t = multi_positive_i2t(U, V, pos_sets, tau);
    LossResult t2i = multi_positive_t2i(U, V, pos_owner, n_pos, tau);
    LossResult res;
    res.value = 0.5 * (i2t.value + t2i.value);
    res.grad_images = 0.5 * (i2t.grad_images + t2i.grad_images);
    res.grad_texts = 0.5 * (i2t.grad_texts + t2i.grad_texts);
    res.grad_log_tau = 0.5 * (i2t.grad_log_tau + t2i.grad_log_tau);
    return res;
}

double check_gradients(const LossFn& fn, const Matrix& U, const Matrix& V, double log_tau,
                       double h) {
    if (h <= 0.0) throw NonFiniteLoss("finite-difference step must be positive");
    const LossResult analytic = fn(U, V, log_tau);
    if (!std::isfinite(analytic.value)) throw NonFiniteLoss("loss is not finite");

    double worst = 0.0;
    auto update = [&](double grad, double plus, double minus) {
        if (!std::isfinite(plus) || !std::isfinite(minus))
            throw NonFiniteLoss("perturbed loss is not finite");
        const double numeric = (plus - minus) / (2.0 * h);
        const double err = std::abs(grad - numeric) / std::max(1.0, std::abs(numeric));
        worst = std::max(worst, err);
    };

    Matrix Up = U;
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
        for (Eigen::Index j = 0; j < U.cols(); ++j) {
            Up(i, j) = U(i, j) + h;
            const double plus = fn(Up, V, log_tau).value;
            Up(i, j) = U(i, j) - h;
            const double minus = fn(Up, V, log_tau).value;
            Up(i, j) = U(i, j);
            update(analytic.grad_images(i, j), plus, minus);
        }
    }
    Matrix Vp = V;
    for (Eigen::Index i = 0; i < V.rows(); ++i) {
        for (Eigen::Index j = 0; j < V.cols(); ++j) {
            Vp(i, j) = V(i, j) + h;
            const double plus = fn(U, Vp, log_tau).value;
            Vp(i, j) = V(i, j) - h;
            const double minus = fn(U, Vp, log_tau).value;
            Vp(i, j) = V(i, j);
            update(analytic.grad_texts(i, j), plus, minus);
        }
    }
    update(analytic.grad_log_tau, fn(U, V, log_tau + h).value, fn(U, V, log_tau - h).value);
    return worst;
}

}  // namespace sgcl
