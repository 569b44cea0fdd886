#include <cmath>

#include "doctest.h"
#include "shocktrack/mlp.hpp"
#include "shocktrack/tape.hpp"

using namespace shocktrack;

TEST_CASE("parameter count and flat indexing") {
  Architecture arch;
  arch.sizes = {2, 5, 1};
  CHECK(arch.param_count() == 5 * 3 + 1 * 6);  // 21
  CHECK(arch.inputs() == 2);
  CHECK(arch.outputs() == 1);

  MlpParams m = MlpParams::init(arch, 0);
  REQUIRE(int(m.flat.size()) == arch.param_count());
  // biases start at zero, weights inside the uniform bound
  for (int j = 0; j < 5; ++j) CHECK(m.bias(1, j) == 0.0);
  CHECK(m.bias(2, 0) == 0.0);
  const double bound1 = std::sqrt(6.0 / (2 + 5));
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 2; ++i) {
      CHECK(m.weight(1, j, i) <= bound1);
      CHECK(m.weight(1, j, i) >= -bound1);
    }
}

TEST_CASE("initialization is deterministic in the seed") {
  Architecture arch;
  arch.sizes = {2, 8, 8, 3};
  const MlpParams a = MlpParams::init(arch, 1234);
  const MlpParams b = MlpParams::init(arch, 1234);
  const MlpParams c = MlpParams::init(arch, 1235);
  CHECK(a.flat == b.flat);
  CHECK(a.flat != c.flat);
}

TEST_CASE("taped evaluation equals the double path") {
  Architecture arch;
  arch.sizes = {2, 6, 2};
  MlpParams m = MlpParams::init(arch, 5);
  for (int j = 0; j < 6; ++j) m.bias(1, j) = 0.01 * j;

  ad::Tape tape;
  TapedNet taped = bind(tape, m);
  const double x = -0.4, t = 0.9;
  const std::array<Jet<ad::Var, 2>, 2> in{jet_input<2>(tape.constant(x), 0),
                                          jet_input<2>(tape.constant(t), 1)};
  const auto out = net_eval(taped.view(), in);
  tape.forward();

  const FieldJet ref = eval_field(m, x, t);
  for (std::size_t c = 0; c < ref.value.size(); ++c) {
    CHECK(tape.value(out[c].v) == doctest::Approx(ref.value[c]).epsilon(1e-14));
    CHECK(tape.value(out[c].d[0]) == doctest::Approx(ref.dx[c]).epsilon(1e-14));
    CHECK(tape.value(out[c].d[1]) == doctest::Approx(ref.dt[c]).epsilon(1e-14));
  }
}

TEST_CASE("bound nets follow leaf updates") {
  Architecture arch;
  arch.sizes = {2, 3, 1};
  MlpParams m = MlpParams::init(arch, 11);
  ad::Tape tape;
  TapedNet taped = bind(tape, m);
  const std::array<Jet<ad::Var, 2>, 2> in{jet_input<2>(tape.constant(0.2), 0),
                                          jet_input<2>(tape.constant(0.1), 1)};
  const auto out = net_eval(taped.view(), in);

  MlpParams shifted = m;
  for (double& w : shifted.flat) w += 0.1;
  for (std::size_t i = 0; i < shifted.flat.size(); ++i)
    tape.set_leaf(taped.slot_base + i, shifted.flat[i]);
  tape.forward();
  CHECK(tape.value(out[0].v) == doctest::Approx(eval_field(shifted, 0.2, 0.1).value[0]).epsilon(1e-14));
}
