#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "radau/autodiff.hpp"

namespace radau {

enum class Activation { sigmoid, sin, tanh };

Activation activation_from_string(const std::string& s);
std::string to_string(Activation a);

// Gated-residual network with two encoder streams and a trainable activation
// slope. Forward pass, with phi the activation and d = depth:
//   u = phi(x W_u + b_u)
//   r = phi(x W_r + b_r)
//   h1 = phi(eta * l * (x W_in) + b_in)
//   for k = 1..d:  m = phi(h W_k + b_k);  h = (1 - m) .* u + m .* r
//   out = h W_out + b_out
// The slope l is a trained parameter; eta is a fixed hyper-parameter and only
// the product eta*l enters the stem.
struct NetworkLayout {
  int in_dim = 0;
  int out_dim = 0;
  int width = 1;
  int depth = 1;  // number of gated mixing layers
  Activation activation = Activation::sigmoid;
  double eta = 5.0;

  bool operator==(const NetworkLayout&) const = default;
};

struct TensorEntry {
  std::string name;
  int offset = 0;
  int rows = 0;
  int cols = 0;  // 1 for vectors and the slope scalar
  int size() const { return rows * cols; }
};

// Flat parameter inventory, in storage order: w_enc_u, b_enc_u, w_enc_r,
// b_enc_r, w_in, b_in, (w_mix_k, b_mix_k) for k = 1..depth, w_out, b_out,
// slope. Matrices are row-major with rows = input dimension of the product.
std::vector<TensorEntry> tensor_layout(const NetworkLayout& layout);
int parameter_count(const NetworkLayout& layout);

struct NetworkParameters {
  NetworkLayout layout;
  std::vector<double> data;

  double slope() const { return data.back(); }
  double& slope() { return data.back(); }
};

// Glorot-uniform weights, zero biases, slope = 1/eta (initial effective
// slope eta*l exactly 1). Deterministic per seed.
NetworkParameters init_network(const NetworkLayout& layout, std::uint64_t seed);

std::vector<double> forward(const NetworkParameters& params, std::span<const double> x);

// Same computation recorded on a tape; the parameters must already live on
// the tape as a contiguous leaf block starting at param_base, in the
// tensor_layout order.
std::vector<ad::Var> forward_record(ad::Tape& tape, const NetworkLayout& layout, int param_base,
                                    std::span<const ad::Var> x);

// Lossless JSON checkpoint keyed by tensor name.
std::string checkpoint_to_json(const NetworkParameters& params);
NetworkParameters checkpoint_from_json(const std::string& text);

}  // namespace radau
