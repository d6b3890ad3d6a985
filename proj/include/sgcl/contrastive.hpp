#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace sgcl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Trainable temperature, parameterized as log_tau; logits are tau * u.v.
struct Temperature {
    double log_tau = std::log(14.2857);  // standard 1/0.07 initialization
    bool trainable = true;
    double clamp_max = 100.0;

    double tau() const { return std::exp(log_tau); }
    void clamp() {
        const double limit = std::log(clamp_max);
        if (log_tau > limit) log_tau = limit;
    }
};

// Loss value plus analytic gradients w.r.t. the NORMALIZED embedding rows and
// log_tau. Backprop through the normalization is the caller's job.
struct LossResult {
    double value = 0.0;
    Matrix grad_images;     // n x d
    Matrix grad_texts;      // (m+r) x d
    double grad_log_tau = 0.0;
};

Vector normalize(const Vector& v);  // throws ZeroVector

// Symmetric CLIP loss over n aligned pairs, with the 1/n factor on each
// direction. Rows of U and V are unit-norm embeddings.
LossResult clip_loss(const Matrix& U, const Matrix& V, double tau);

// Image-to-text loss with multiple positives per image: texts = [m positives;
// r negatives], pos_sets[i] lists the positive text indices of image i, the
// softmax denominator runs over all m+r texts.
LossResult multi_positive_i2t(const Matrix& U, const Matrix& V,
                              const std::vector<std::vector<int>>& pos_sets, double tau);

// Text-to-image loss computed for positive texts only; pos_owner[j] is the
// owning image of text j < n_pos.
LossResult multi_positive_t2i(const Matrix& U, const Matrix& V,
                              const std::vector<int>& pos_owner, int n_pos, double tau);

// (i2t + t2i) / 2
LossResult multi_positive_loss(const Matrix& U, const Matrix& V,
                               const std::vector<std::vector<int>>& pos_sets,
                               const std::vector<int>& pos_owner, int n_pos, double tau);

// Central finite differences at step h over every coordinate of U, V and
// log_tau; returns max over coordinates of |analytic - numeric| / max(1, |numeric|).
using LossFn = std::function<LossResult(const Matrix&, const Matrix&, double /*log_tau*/)>;
double check_gradients(const LossFn& fn, const Matrix& U, const Matrix& V, double log_tau,
                       double h);

}  // namespace sgcl
