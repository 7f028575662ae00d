#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>
#include <stdexcept>
#include <vector>

#include "uasguide/rng.hpp"

namespace uasguide {

// Fully-connected tanh network: linear layers with tanh on every hidden layer
// and a linear output. Batches are column-major: an input matrix is
// (input_dim x n), one sample per column, so a layer is one GEMM.
class Mlp {
 public:
  Mlp() = default;

  Mlp(int input_dim, std::vector<int> hidden, int output_dim) {
    if (input_dim <= 0 || output_dim <= 0)
      throw std::invalid_argument("Mlp: dimensions must be positive");
    dims_.push_back(input_dim);
    for (const int h : hidden) {
      if (h <= 0) throw std::invalid_argument("Mlp: dimensions must be positive");
      dims_.push_back(h);
    }
    dims_.push_back(output_dim);
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
      weights.emplace_back(Eigen::MatrixXd::Zero(dims_[l + 1], dims_[l]));
      biases.emplace_back(Eigen::VectorXd::Zero(dims_[l + 1]));
    }
  }

  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  const std::vector<int>& dims() const { return dims_; }
  std::vector<int> hidden_dims() const {
    return std::vector<int>(dims_.begin() + 1, dims_.end() - 1);
  }
  std::size_t layer_count() const { return weights.size(); }

  // Orthogonal weight init (QR of a Gaussian matrix, sign-fixed so the
  // factorization is unique), scaled by `gain`; biases zero. The output layer
  // gets its own gain — small for a policy head, 1 for a value head.
  static Mlp orthogonal_init(int input_dim, std::vector<int> hidden, int output_dim,
                             Rng& rng, double hidden_gain, double output_gain) {
    Mlp net(input_dim, std::move(hidden), output_dim);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      const double gain = (l + 1 == net.weights.size()) ? output_gain : hidden_gain;
      net.weights[l] = orthogonal_matrix(net.weights[l].rows(), net.weights[l].cols(),
                                         rng) * gain;
    }
    return net;
  }

  struct Cache {
    Eigen::MatrixXd input;                      // (in x n)
    std::vector<Eigen::MatrixXd> activations;   // tanh outputs, one per hidden layer
  };

  struct Gradients {
    std::vector<Eigen::MatrixXd> w;
    std::vector<Eigen::VectorXd> b;

    void set_zero() {
      for (auto& m : w) m.setZero();
      for (auto& v : b) v.setZero();
    }
  };

  Gradients zero_gradients() const {
    Gradients g;
    for (std::size_t l = 0; l < weights.size(); ++l) {
      g.w.emplace_back(Eigen::MatrixXd::Zero(weights[l].rows(), weights[l].cols()));
      g.b.emplace_back(Eigen::VectorXd::Zero(biases[l].size()));
    }
    return g;
  }

  // Batched forward. Pass a cache to enable backward().
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache* cache = nullptr) const {
    if (x.rows() != input_dim())
      throw std::invalid_argument("Mlp::forward: input dimension mismatch");
    if (cache) {
      cache->input = x;
      cache->activations.clear();
    }
    Eigen::MatrixXd h = x;
    for (std::size_t l = 0; l < weights.size(); ++l) {
      Eigen::MatrixXd z = (weights[l] * h).colwise() + biases[l];
      if (l + 1 < weights.size()) {
        h = z.array().tanh().matrix();
        if (cache) cache->activations.push_back(h);
      } else {
        h = std::move(z);
      }
    }
    return h;
  }

  // Single-sample convenience.
  Eigen::VectorXd forward(const Eigen::VectorXd& x) const {
    return forward(Eigen::MatrixXd(x), nullptr).col(0);
  }

  // Backpropagation from d(loss)/d(output), accumulating parameter gradients
  // into `grads` (caller zeroes them). Returns d(loss)/d(input).
  Eigen::MatrixXd backward(const Eigen::MatrixXd& d_out, const Cache& cache,
                           Gradients& grads) const {
    if (grads.w.size() != weights.size()) grads = zero_gradients();
    Eigen::MatrixXd delta = d_out;  // gradient wrt pre-activation of layer l
    for (std::size_t l = weights.size(); l-- > 0;) {
      const Eigen::MatrixXd& below =
          l == 0 ? cache.input : cache.activations[l - 1];
      grads.w[l].noalias() += delta * below.transpose();
      grads.b[l].noalias() += delta.rowwise().sum();
      if (l > 0) {
        // d tanh(z) = 1 - tanh(z)^2, and activations hold tanh(z).
        Eigen::MatrixXd d_h = weights[l].transpose() * delta;
        delta = (d_h.array() * (1.0 - cache.activations[l - 1].array().square())).matrix();
      } else {
        return weights[0].transpose() * delta;
      }
    }
    return {};
  }

  // Flat parameter count (weights + biases).
  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
      n += static_cast<std::size_t>(weights[l].size()) +
           static_cast<std::size_t>(biases[l].size());
    }
    return n;
  }

  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

 private:
  // Orthogonal (rows x cols) matrix from the QR factorization of a Gaussian
  // draw. For wide matrices the transpose is factorized so the rows end up
  // orthonormal.
  static Eigen::MatrixXd orthogonal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    const Eigen::Index big = std::max(rows, cols);
    const Eigen::Index small = std::min(rows, cols);
    Eigen::MatrixXd a(big, small);
    for (Eigen::Index j = 0; j < small; ++j) {
      for (Eigen::Index i = 0; i < big; ++i) {
        a(i, j) = rng.normal();
      }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(small).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < small; ++j) {
      if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return rows >= cols ? q : Eigen::MatrixXd(q.transpose());
  }

  std::vector<int> dims_;
};

}  // namespace uasguide
