#include "divexplore/mlp.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace divexplore {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
    case Activation::Identity: return "identity";
  }
  return "?";
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::Relu;
  if (name == "identity") return Activation::Identity;
  throw std::invalid_argument("unknown activation: " + name);
}

namespace {

Eigen::MatrixXd apply_activation(Activation act, const Eigen::MatrixXd& z) {
  switch (act) {
    case Activation::Tanh: return z.array().tanh();
    case Activation::Relu: return z.array().max(0.0);
    case Activation::Identity: return z;
  }
  return z;
}

// Derivative of the activation given pre- and post-activation values,
// applied elementwise to dy.
Eigen::MatrixXd chain_activation(Activation act, const Eigen::MatrixXd& pre,
                                 const Eigen::MatrixXd& post,
                                 const Eigen::MatrixXd& dy) {
  switch (act) {
    case Activation::Tanh:
      return dy.array() * (1.0 - post.array().square());
    case Activation::Relu:
      return dy.array() * (pre.array() > 0.0).cast<double>();
    case Activation::Identity:
      return dy;
  }
  return dy;
}

}  // namespace

Mlp::Mlp(const std::vector<int>& dims, const std::vector<Activation>& acts,
         std::uint64_t seed) {
  if (dims.size() < 2) throw std::invalid_argument("Mlp needs >= 2 dims");
  if (acts.size() != dims.size() - 1)
    throw std::invalid_argument("Mlp: acts must have dims.size()-1 entries");
  for (int d : dims)
    if (d <= 0) throw std::invalid_argument("Mlp: dims must be positive");

  std::mt19937_64 rng(seed);
  layers_.reserve(acts.size());
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    const int in = dims[k];
    const int out = dims[k + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Layer layer;
    layer.weight.resize(out, in);
    for (int i = 0; i < out; ++i)
      for (int j = 0; j < in; ++j) layer.weight(i, j) = dist(rng);
    layer.bias = Eigen::VectorXd::Zero(out);
    layer.act = acts[k];
    layers_.push_back(std::move(layer));
  }
  input_dim_ = dims.front();
  output_dim_ = dims.back();
}

void Mlp::check_input(const Eigen::MatrixXd& x) const {
  if (x.cols() != input_dim_) {
    std::ostringstream msg;
    msg << "Mlp::forward: input has " << x.cols() << " columns, expected "
        << input_dim_;
    throw std::invalid_argument(msg.str());
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  check_input(x);
  Eigen::MatrixXd h = x;
  for (const Layer& layer : layers_) {
    Eigen::MatrixXd z = (h * layer.weight.transpose()).rowwise() + layer.bias.transpose();
    h = apply_activation(layer.act, z);
  }
  return h;
}

Eigen::VectorXd Mlp::forward_vec(const Eigen::VectorXd& x) const {
  return forward(x.transpose()).row(0).transpose();
}

ForwardTrace Mlp::forward_cached(const Eigen::MatrixXd& x) const {
  check_input(x);
  ForwardTrace trace;
  trace.input = x;
  trace.pre.reserve(layers_.size());
  trace.post.reserve(layers_.size());
  Eigen::MatrixXd h = x;
  for (const Layer& layer : layers_) {
    Eigen::MatrixXd z = (h * layer.weight.transpose()).rowwise() + layer.bias.transpose();
    h = apply_activation(layer.act, z);
    trace.pre.push_back(std::move(z));
    trace.post.push_back(h);
  }
  return trace;
}

Gradients Mlp::backward(const ForwardTrace& trace, const Eigen::MatrixXd& dy,
                        Eigen::MatrixXd* dinput) const {
  if (trace.post.size() != layers_.size())
    throw std::logic_error("Mlp::backward: trace does not match network");
  if (dy.rows() != trace.input.rows() || dy.cols() != output_dim_)
    throw std::invalid_argument("Mlp::backward: dy shape mismatch");

  Gradients grads = zero_gradients();
  Eigen::MatrixXd delta = dy;
  for (int k = static_cast<int>(layers_.size()) - 1; k >= 0; --k) {
    const Layer& layer = layers_[k];
    delta = chain_activation(layer.act, trace.pre[k], trace.post[k], delta);
    const Eigen::MatrixXd& below =
        (k == 0) ? trace.input : trace.post[k - 1];
    grads.weight[k] = delta.transpose() * below;
    grads.bias[k] = delta.colwise().sum().transpose();
    if (k > 0 || dinput != nullptr) {
      Eigen::MatrixXd next_delta = delta * layer.weight;
      if (k == 0 && dinput != nullptr) *dinput = next_delta;
      delta = std::move(next_delta);
    }
  }
  return grads;
}

Gradients Mlp::zero_gradients() const {
  Gradients g;
  g.weight.reserve(layers_.size());
  g.bias.reserve(layers_.size());
  for (const Layer& layer : layers_) {
    g.weight.push_back(Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()));
    g.bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  return g;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& layer : layers_)
    n += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
  return n;
}

Eigen::VectorXd Mlp::flatten() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index pos = 0;
  for (const Layer& layer : layers_) {
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j)
        flat(pos++) = layer.weight(i, j);
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i)
      flat(pos++) = layer.bias(i);
  }
  return flat;
}

void Mlp::set_from_flat(const Eigen::VectorXd& flat) {
  if (flat.size() != static_cast<Eigen::Index>(parameter_count()))
    throw std::invalid_argument("set_from_flat: size mismatch");
  Eigen::Index pos = 0;
  for (Layer& layer : layers_) {
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j)
        layer.weight(i, j) = flat(pos++);
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i)
      layer.bias(i) = flat(pos++);
  }
}

void Mlp::save(std::ostream& out) const {
  out << "divexplore-mlp 1\n";
  out << layers_.size() << "\n";
  out << std::hexfloat;
  for (const Layer& layer : layers_) {
    out << layer.weight.rows() << " " << layer.weight.cols() << " "
        << activation_name(layer.act) << "\n";
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) {
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j)
        out << layer.weight(i, j) << " ";
      out << "\n";
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i)
      out << layer.bias(i) << " ";
    out << "\n";
  }
}

void Mlp::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open checkpoint for write: " + path);
  save(out);
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

namespace {
double read_double(std::istream& in) {
  std::string token;
  if (!(in >> token)) throw std::runtime_error("mlp checkpoint: truncated");
  return std::strtod(token.c_str(), nullptr);  // handles hexfloat
}
}  // namespace

Mlp Mlp::load(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "divexplore-mlp" || version != 1)
    throw std::runtime_error("mlp checkpoint: bad header");
  std::size_t n_layers = 0;
  if (!(in >> n_layers)) throw std::runtime_error("mlp checkpoint: bad layer count");

  Mlp net;
  for (std::size_t k = 0; k < n_layers; ++k) {
    Eigen::Index rows = 0, cols = 0;
    std::string act_name;
    if (!(in >> rows >> cols >> act_name))
      throw std::runtime_error("mlp checkpoint: bad layer header");
    Layer layer;
    layer.act = activation_from_name(act_name);
    layer.weight.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) layer.weight(i, j) = read_double(in);
    layer.bias.resize(rows);
    for (Eigen::Index i = 0; i < rows; ++i) layer.bias(i) = read_double(in);
    if (!net.layers_.empty() && net.layers_.back().weight.rows() != cols)
      throw std::runtime_error("mlp checkpoint: layer dims do not chain");
    net.layers_.push_back(std::move(layer));
  }
  if (net.layers_.empty()) throw std::runtime_error("mlp checkpoint: no layers");
  net.input_dim_ = static_cast<int>(net.layers_.front().weight.cols());
  net.output_dim_ = static_cast<int>(net.layers_.back().weight.rows());
  return net;
}

Mlp Mlp::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  return load(in);
}

double gradient_check(const Mlp& net, const Eigen::MatrixXd& input,
                      const OutputLoss& loss) {
  Mlp probe = net;
  const ForwardTrace trace = probe.forward_cached(input);
  Eigen::MatrixXd grad_out(input.rows(), probe.output_dim());
  loss(trace.post.empty() ? input : trace.post.back(), &grad_out);
  const Gradients analytic_grads = probe.backward(trace, grad_out);

  // Flatten analytic gradients in the same order as Mlp::flatten.
  Eigen::VectorXd analytic(probe.parameter_count());
  Eigen::Index pos = 0;
  for (std::size_t k = 0; k < analytic_grads.weight.size(); ++k) {
    const auto& w = analytic_grads.weight[k];
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) analytic(pos++) = w(i, j);
    const auto& b = analytic_grads.bias[k];
    for (Eigen::Index i = 0; i < b.size(); ++i) analytic(pos++) = b(i);
  }

  const double h = 1e-5;
  Eigen::VectorXd flat = probe.flatten();
  double max_rel = 0.0;
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    const double saved = flat(i);
    flat(i) = saved + h;
    probe.set_from_flat(flat);
    const double up = loss(probe.forward(input), nullptr);
    flat(i) = saved - h;
    probe.set_from_flat(flat);
    const double down = loss(probe.forward(input), nullptr);
    flat(i) = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(analytic(i)), std::abs(numeric), 1e-8});
    max_rel = std::max(max_rel, std::abs(analytic(i) - numeric) / denom);
  }
  probe.set_from_flat(flat);
  return max_rel;
}

}  // namespace divexplore
