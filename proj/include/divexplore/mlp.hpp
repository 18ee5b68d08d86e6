#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace divexplore {

enum class Activation { Tanh, Relu, Identity };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

/// One dense layer: y = act(x * W^T + b).
struct Layer {
  Eigen::MatrixXd weight;  // out_dim x in_dim
  Eigen::VectorXd bias;    // out_dim
  Activation act = Activation::Identity;
};

/// Per-layer parameter gradients, congruent to Mlp::layers().
struct Gradients {
  std::vector<Eigen::MatrixXd> weight;
  std::vector<Eigen::VectorXd> bias;
};

/// Activations cached by forward_cached, consumed by backward.
struct ForwardTrace {
  Eigen::MatrixXd input;              // batch x in_dim
  std::vector<Eigen::MatrixXd> pre;   // pre-activation, batch x out_dim
  std::vector<Eigen::MatrixXd> post;  // post-activation, batch x out_dim
};

/// Fixed-topology multilayer perceptron with analytic backprop.
/// Batches are row-major: one sample per row. All math in doubles.
class Mlp {
 public:
  Mlp() = default;

  /// dims = {in, h1, ..., out}; acts has dims.size()-1 entries.
  /// Weights uniform in +/- 1/sqrt(fan_in), biases zero.
  Mlp(const std::vector<int>& dims, const std::vector<Activation>& acts,
      std::uint64_t seed);

  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& layers() { return layers_; }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd forward_vec(const Eigen::VectorXd& x) const;
  ForwardTrace forward_cached(const Eigen::MatrixXd& x) const;

  /// dy is dLoss/d(output) at the post-activation output of the last layer.
  /// Returns exact parameter gradients; fills *dinput with dLoss/d(input)
  /// when requested (used to chain the critic into the actor).
  Gradients backward(const ForwardTrace& trace, const Eigen::MatrixXd& dy,
                     Eigen::MatrixXd* dinput = nullptr) const;

  Gradients zero_gradients() const;
  std::size_t parameter_count() const;

  /// Row-major flattening of all weights then biases, layer by layer.
  Eigen::VectorXd flatten() const;
  void set_from_flat(const Eigen::VectorXd& flat);

  /// Versioned text checkpoint; hexfloat payload so round-trips are exact.
  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static Mlp load(std::istream& in);
  static Mlp load_file(const std::string& path);

 private:
  void check_input(const Eigen::MatrixXd& x) const;

  std::vector<Layer> layers_;
  int input_dim_ = 0;
  int output_dim_ = 0;
};

/// Scalar loss over the network output. Returns the loss value and, when
/// grad_out is non-null, fills dLoss/d(output).
using OutputLoss =
    std::function<double(const Eigen::MatrixXd& output, Eigen::MatrixXd* grad_out)>;

/// Central finite differences (h = 1e-5) over every parameter against the
/// analytic backward pass. Returns max |analytic - numeric| /
/// max(|analytic|, |numeric|, 1e-8).
double gradient_check(const Mlp& net, const Eigen::MatrixXd& input,
                      const OutputLoss& loss);

}  // namespace divexplore
