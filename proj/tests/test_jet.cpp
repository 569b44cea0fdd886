#include <cmath>

#include "doctest.h"
#include "shocktrack/jet.hpp"
#include "shocktrack/mlp.hpp"

using namespace shocktrack;

TEST_CASE("double jets propagate exact partial derivatives") {
  // f(x,t) = x^2 t + tanh(x) - t / (x + 3)
  const double x = 0.8, t = 0.4;
  auto X = jet_input<2>(x, 0);
  auto T = jet_input<2>(t, 1);
  auto f = X * X * T + tanh(X) - T / (X + jet_const<2>(3.0));

  const double sech2 = 1.0 - std::tanh(x) * std::tanh(x);
  CHECK(f.v == doctest::Approx(x * x * t + std::tanh(x) - t / (x + 3)).epsilon(1e-15));
  CHECK(f.d[0] == doctest::Approx(2 * x * t + sech2 + t / ((x + 3) * (x + 3))).epsilon(1e-14));
  CHECK(f.d[1] == doctest::Approx(x * x - 1.0 / (x + 3)).epsilon(1e-14));
}

TEST_CASE("Var jets make the propagated derivative differentiable") {
  // g(a) = d/dx [ a * x^2 ] at x = 1.5 equals 2 a x; its a-gradient is 2 x.
  ad::Tape tape;
  ad::Var a = tape.leaf(0.7);
  const double x = 1.5;
  auto X = jet_input<1, ad::Var>(tape.constant(x), 0);
  auto A = jet_const<1, ad::Var>(a);
  auto g = A * X * X;
  tape.forward();
  CHECK(tape.value(g.d[0]) == doctest::Approx(2 * 0.7 * x).epsilon(1e-14));
  tape.backward(g.d[0]);
  CHECK(tape.leaf_adjoint(0) == doctest::Approx(2 * x).epsilon(1e-14));
}

TEST_CASE("network space-time derivatives match finite differences") {
  Architecture arch;
  arch.sizes = {2, 7, 4, 1};
  MlpParams net = MlpParams::init(arch, 99);
  // biases start at zero; perturb them so derivatives are nontrivial
  for (int l = 1; l <= 3; ++l)
    for (int j = 0; j < arch.sizes[std::size_t(l)]; ++j) net.bias(l, j) += 0.05 * (j + 1);

  const double x = 0.3, t = 0.6, h = 1e-6;
  const FieldJet f = eval_field(net, x, t);
  const double fdx =
      (eval_field(net, x + h, t).value[0] - eval_field(net, x - h, t).value[0]) / (2 * h);
  const double fdt =
      (eval_field(net, x, t + h).value[0] - eval_field(net, x, t - h).value[0]) / (2 * h);
  CHECK(f.dx[0] == doctest::Approx(fdx).epsilon(1e-7));
  CHECK(f.dt[0] == doctest::Approx(fdt).epsilon(1e-7));
}
