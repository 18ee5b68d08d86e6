#include "divexplore/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace divexplore {

namespace {
constexpr double kQFloor = 1e-10;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  if (logits.size() == 0) throw std::invalid_argument("softmax: empty input");
  const double m = logits.maxCoeff();
  Eigen::ArrayXd e = (logits.array() - m).exp();
  return (e / e.sum()).matrix();
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  if (logits.cols() == 0) throw std::invalid_argument("softmax: empty input");
  Eigen::ArrayXXd shifted =
      logits.array().colwise() - logits.rowwise().maxCoeff().array();
  Eigen::ArrayXXd e = shifted.exp();
  return (e.colwise() / e.rowwise().sum()).matrix();
}

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("kl_divergence: length mismatch");
  double kl = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) <= 0.0) continue;  // 0 log(0/q) = 0
    kl += p(i) * std::log(p(i) / std::max(q(i), kQFloor));
  }
  return kl;
}

double entropy(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > 0.0) h -= p(i) * std::log(p(i));
  return h;
}

double mse(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw std::invalid_argument("mse: shape mismatch");
  if (a.size() == 0) throw std::invalid_argument("mse: empty input");
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

double mse(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("mse: shape mismatch");
  if (a.size() == 0) throw std::invalid_argument("mse: empty input");
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

}  // namespace divexplore
