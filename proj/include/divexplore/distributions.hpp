#pragma once

#include <Eigen/Dense>

namespace divexplore {

/// Numerically stable softmax (max subtraction). Rejects empty input.
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

/// Row-wise softmax over a batch of logit rows.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

/// KL(p || q) with 0*log(0/q) = 0 and q floored at 1e-10.
double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// Shannon entropy -sum p log p, in nats.
double entropy(const Eigen::VectorXd& p);

double mse(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double mse(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace divexplore
