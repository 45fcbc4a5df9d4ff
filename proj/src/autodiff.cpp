#include "radau/autodiff.hpp"

#include <cmath>
#include <stdexcept>

namespace radau::ad {

int Tape::push(Node n, double value) {
  nodes_.push_back(n);
  val_.push_back(value);
  return static_cast<int>(nodes_.size()) - 1;
}

int Tape::leaf(double v) { return push({}, v); }

int Tape::leaf_block(std::span<const double> v) {
  const int first = static_cast<int>(nodes_.size());
  nodes_.resize(nodes_.size() + v.size());
  val_.insert(val_.end(), v.begin(), v.end());
  return first;
}

int Tape::add(int a, int b) { return push({a, b, -1, Op::add, 1.0, 1.0}, val_[a] + val_[b]); }
int Tape::sub(int a, int b) { return push({a, b, -1, Op::sub, 1.0, -1.0}, val_[a] - val_[b]); }
int Tape::mul(int a, int b) { return push({a, b, -1, Op::mul, val_[b], val_[a]}, val_[a] * val_[b]); }

int Tape::div(int a, int b) {
  const double q = val_[a] / val_[b];
  return push({a, b, -1, Op::div, 1.0 / val_[b], -q / val_[b]}, q);
}

int Tape::fma(int a, int b, int c) {
  return push({a, b, c, Op::fma, val_[b], val_[a]}, val_[a] * val_[b] + val_[c]);
}

int Tape::neg(int a) { return push({a, -1, -1, Op::unary, -1.0, 0.0}, -val_[a]); }
int Tape::scale(int a, double k) { return push({a, -1, -1, Op::unary, k, 0.0}, k * val_[a]); }
int Tape::add_const(int a, double k) { return push({a, -1, -1, Op::unary, 1.0, 0.0}, val_[a] + k); }
int Tape::sub_from_const(double k, int a) { return push({a, -1, -1, Op::unary, -1.0, 0.0}, k - val_[a]); }
int Tape::div_const(int a, double k) { return push({a, -1, -1, Op::unary, 1.0 / k, 0.0}, val_[a] / k); }

int Tape::square(int a) { return push({a, -1, -1, Op::unary, 2.0 * val_[a], 0.0}, val_[a] * val_[a]); }
int Tape::sin(int a) { return push({a, -1, -1, Op::unary, std::cos(val_[a]), 0.0}, std::sin(val_[a])); }
int Tape::cos(int a) { return push({a, -1, -1, Op::unary, -std::sin(val_[a]), 0.0}, std::cos(val_[a])); }

int Tape::exp(int a) {
  const double e = std::exp(val_[a]);
  return push({a, -1, -1, Op::unary, e, 0.0}, e);
}

int Tape::tanh(int a) {
  const double t = std::tanh(val_[a]);
  return push({a, -1, -1, Op::unary, 1.0 - t * t, 0.0}, t);
}

int Tape::sigmoid(int a) {
  const double s = 1.0 / (1.0 + std::exp(-val_[a]));
  return push({a, -1, -1, Op::unary, s * (1.0 - s), 0.0}, s);
}

void Tape::backward(int root) {
  if (root < 0 || root >= static_cast<int>(nodes_.size()))
    throw std::invalid_argument("Tape::backward: root out of range");
  adj_.assign(val_.size(), 0.0);
  adj_[static_cast<std::size_t>(root)] = 1.0;
  for (int i = root; i >= 0; --i) {
    const double g = adj_[static_cast<std::size_t>(i)];
    if (g == 0.0) continue;
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    switch (n.op) {
      case Op::leaf:
        break;
      case Op::unary:
        adj_[n.a] += n.pa * g;
        break;
      case Op::fma:
        adj_[n.a] += n.pa * g;
        adj_[n.b] += n.pb * g;
        adj_[n.c] += g;
        break;
      default:  // add, sub, mul, div
        adj_[n.a] += n.pa * g;
        adj_[n.b] += n.pb * g;
        break;
    }
  }
}

void Tape::rewind() {
  nodes_.clear();
  val_.clear();
}

void Tape::reserve(std::size_t nodes) {
  nodes_.reserve(nodes);
  val_.reserve(nodes);
  adj_.reserve(nodes);
}

}  // namespace radau::ad
