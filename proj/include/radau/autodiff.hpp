#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace radau::ad {

// Reverse-mode tape. Each recorded node stores its parent indices and the
// local partial derivatives, evaluated eagerly at record time, so the
// backward pass is a single reverse sweep of multiply-accumulates. Node
// indices are strictly increasing along data dependencies.
//
// The tape is rebuilt every optimizer iteration; rewind() keeps the
// allocated capacity so steady-state training does not touch the allocator.
class Tape {
 public:
  int leaf(double v);
  int leaf_block(std::span<const double> v);

  int add(int a, int b);
  int sub(int a, int b);
  int mul(int a, int b);
  int div(int a, int b);
  int fma(int a, int b, int c);  // a*b + c

  int neg(int a);
  int scale(int a, double k);            // k * a
  int add_const(int a, double k);        // a + k
  int sub_from_const(double k, int a);   // k - a
  int div_const(int a, double k);        // a / k

  int square(int a);
  int sin(int a);
  int cos(int a);
  int exp(int a);
  int tanh(int a);
  int sigmoid(int a);

  double value(int i) const { return val_[static_cast<std::size_t>(i)]; }

  // Seeds d(root)/d(root) = 1 and accumulates adjoints for every node.
  void backward(int root);
  double adjoint(int i) const { return adj_[static_cast<std::size_t>(i)]; }

  void rewind();
  void reserve(std::size_t nodes);
  std::size_t size() const { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    leaf, add, sub, mul, div, fma,
    unary,  // any single-parent op: the stored partial is all backward needs
  };

  struct Node {
    std::int32_t a = -1, b = -1, c = -1;
    Op op = Op::leaf;
    double pa = 0.0, pb = 0.0;  // partials w.r.t. a and b (fma: d/dc == 1)
  };

  int push(Node n, double value);

  std::vector<Node> nodes_;
  std::vector<double> val_;
  std::vector<double> adj_;
};

// Value handle used to write expressions naturally while recording.
struct Var {
  Tape* tape = nullptr;
  std::int32_t id = -1;

  double value() const { return tape->value(id); }
  double adjoint() const { return tape->adjoint(id); }
};

inline Var make_var(Tape& t, double v) { return {&t, t.leaf(v)}; }

inline Var operator+(Var a, Var b) { return {a.tape, a.tape->add(a.id, b.id)}; }
inline Var operator-(Var a, Var b) { return {a.tape, a.tape->sub(a.id, b.id)}; }
inline Var operator*(Var a, Var b) { return {a.tape, a.tape->mul(a.id, b.id)}; }
inline Var operator/(Var a, Var b) { return {a.tape, a.tape->div(a.id, b.id)}; }
inline Var operator-(Var a) { return {a.tape, a.tape->neg(a.id)}; }

inline Var operator+(Var a, double k) { return {a.tape, a.tape->add_const(a.id, k)}; }
inline Var operator+(double k, Var a) { return a + k; }
inline Var operator-(Var a, double k) { return {a.tape, a.tape->add_const(a.id, -k)}; }
inline Var operator-(double k, Var a) { return {a.tape, a.tape->sub_from_const(k, a.id)}; }
inline Var operator*(Var a, double k) { return {a.tape, a.tape->scale(a.id, k)}; }
inline Var operator*(double k, Var a) { return a * k; }
inline Var operator/(Var a, double k) { return {a.tape, a.tape->div_const(a.id, k)}; }

inline Var fmadd(Var a, Var b, Var c) { return {a.tape, a.tape->fma(a.id, b.id, c.id)}; }
inline Var square(Var a) { return {a.tape, a.tape->square(a.id)}; }
inline Var sin(Var a) { return {a.tape, a.tape->sin(a.id)}; }
inline Var cos(Var a) { return {a.tape, a.tape->cos(a.id)}; }
inline Var exp(Var a) { return {a.tape, a.tape->exp(a.id)}; }
inline Var tanh(Var a) { return {a.tape, a.tape->tanh(a.id)}; }
inline Var sigmoid(Var a) { return {a.tape, a.tape->sigmoid(a.id)}; }

}  // namespace radau::ad
