// Copyright 2026 The mixent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>

#include "mixent/common/error.hpp"
#include "mixent/common/rng.hpp"
#include "mixent/nn/adam.hpp"
#include "mixent/nn/checkpoint.hpp"
#include "mixent/nn/graph.hpp"
#include "mixent/nn/mlp.hpp"
#include "mixent/simd/kernels.hpp"
#include "test_util.hpp"

namespace mixent::nn {
namespace {

using test::max_rel_error;

TEST(Tensor, ShapeAndAccess) {
  Tensor t = Tensor::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
  EXPECT_EQ(t(1, 2), 6.0);
  EXPECT_EQ(t.transposed()(2, 1), 6.0);
  EXPECT_THROW(Tensor({2, 2}, std::vector<double>{1, 2, 3}), DimensionError);
  EXPECT_THROW((void)t.item(), DimensionError);
}

TEST(Graph, SquareDerivative) {
  Graph g;
  Var x = g.parameter(Tensor::scalar(3.0));
  auto grads = g.backward(g.square(x));
  EXPECT_DOUBLE_EQ(grads.at(x).item(), 6.0);
}

TEST(Graph, TanhDerivativeAtZero) {
  Graph g;
  Var x = g.parameter(Tensor::scalar(0.0));
  auto grads = g.backward(g.tanh(x));
  EXPECT_DOUBLE_EQ(grads.at(x).item(), 1.0);
}

TEST(Graph, BackwardNeedsScalar) {
  Graph g;
  Var x = g.parameter(Tensor::matrix(2, 2, 1.0));
  EXPECT_THROW(g.backward(g.tanh(x)), ContractError);
}

TEST(Graph, ConstantsGetNoGradient) {
  Graph g;
  Var c = g.constant(Tensor::scalar(2.0));
  Var x = g.parameter(Tensor::scalar(1.5));
  auto grads = g.backward(g.mul(c, x));
  EXPECT_FALSE(grads.contains(c));
  EXPECT_THROW(grads.at(c), ContractError);
  EXPECT_DOUBLE_EQ(grads.at(x).item(), 2.0);
}

TEST(Graph, NonFiniteForwardThrows) {
  Graph g;
  Var x = g.parameter(Tensor::scalar(-1.0));
  EXPECT_THROW(g.log(x), NonFiniteError);
  Graph h;
  Var y = h.parameter(Tensor::scalar(1000.0));
  EXPECT_THROW(h.exp(y), NonFiniteError);
}

TEST(Graph, LogSumExpIsOverflowSafe) {
  Graph g;
  Var x = g.parameter(Tensor::from_rows({{1000.0, 1000.0}}));
  Var y = g.logsumexp_cols(x);
  EXPECT_NEAR(g.value(y).item(), 1000.0 + std::log(2.0), 1e-12);
  auto grads = g.backward(g.sum(y));
  EXPECT_NEAR(grads.at(x)(0, 0), 0.5, 1e-12);
}

TEST(Graph, Log1mTanh2StableForLargeInputs) {
  Graph g;
  Var x = g.parameter(Tensor::from_rows({{0.0, 30.0, -30.0}}));
  Var y = g.log1m_tanh2(x);
  const auto& v = g.value(y);
  EXPECT_NEAR(v(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(v(0, 1), 2.0 * (std::log(2.0) - 30.0), 1e-12);
  EXPECT_NEAR(v(0, 2), 2.0 * (std::log(2.0) - 30.0), 1e-12);
}

// Every differentiable op against central differences on a small input.
TEST(Graph, OpsMatchFiniteDifferences) {
  Rng rng(7);
  const Tensor a0 = test::random_tensor(3, 4, rng);
  const Tensor b0 = test::random_tensor(4, 2, rng);
  const Tensor c0 = test::random_tensor(3, 4, rng);
  const Tensor r0 = test::random_tensor(1, 4, rng);

  using Build = std::function<Var(Graph&, Var, Var, Var, Var)>;
  const std::vector<std::pair<const char*, Build>> cases = {
      {"matmul", [](Graph& g, Var a, Var b, Var, Var) { return g.matmul(a, b); }},
      {"add_broadcast", [](Graph& g, Var a, Var, Var, Var r) { return g.add(a, r); }},
      {"sub", [](Graph& g, Var a, Var, Var c, Var) { return g.sub(a, c); }},
      {"mul", [](Graph& g, Var a, Var, Var c, Var) { return g.mul(a, c); }},
      {"scale", [](Graph& g, Var a, Var, Var, Var) { return g.scale(a, -1.7); }},
      {"add_scalar", [](Graph& g, Var a, Var, Var, Var) { return g.add_scalar(a, 0.3); }},
      {"relu", [](Graph& g, Var a, Var, Var, Var) { return g.relu(a); }},
      {"tanh", [](Graph& g, Var a, Var, Var, Var) { return g.tanh(a); }},
      {"exp", [](Graph& g, Var a, Var, Var, Var) { return g.exp(a); }},
      {"log", [](Graph& g, Var a, Var, Var, Var) { return g.log(g.add_scalar(g.square(a), 0.5)); }},
      {"log1m_tanh2", [](Graph& g, Var a, Var, Var, Var) { return g.log1m_tanh2(a); }},
      {"clamp", [](Graph& g, Var a, Var, Var, Var) { return g.clamp(a, -0.5, 0.5); }},
      {"slice_cols", [](Graph& g, Var a, Var, Var, Var) { return g.slice_cols(a, 1, 3); }},
      {"slice_rows", [](Graph& g, Var a, Var, Var, Var) { return g.slice_rows(a, 1, 3); }},
      {"concat_cols", [](Graph& g, Var a, Var, Var c, Var) { return g.concat_cols({a, g.tanh(c)}); }},
      {"concat_rows", [](Graph& g, Var a, Var, Var c, Var) { return g.concat_rows({a, g.square(c)}); }},
      {"sum_cols", [](Graph& g, Var a, Var, Var, Var) { return g.sum_cols(a); }},
      {"mean", [](Graph& g, Var a, Var, Var, Var) { return g.mean(a); }},
      {"logsumexp_cols", [](Graph& g, Var a, Var, Var, Var) { return g.logsumexp_cols(a); }},
  };

  for (const auto& [name, build] : cases) {
    // Weight the output by fixed coefficients so every element contributes.
    auto loss = [&](Graph& g, Var a, Var b, Var c, Var r) {
      Var y = build(g, a, b, c, r);
      const Tensor& v = g.value(y);
      Tensor coef(v.shape());
      for (std::size_t k = 0; k < coef.size(); ++k) coef[k] = 0.3 + 0.1 * static_cast<double>(k % 5);
      return g.sum(g.mul(y, g.constant(coef)));
    };
    std::vector<Tensor> inputs{a0, b0, c0, r0};
    Graph g;
    std::vector<Var> vars;
    for (const auto& t : inputs) vars.push_back(g.parameter(t));
    const Var out = loss(g, vars[0], vars[1], vars[2], vars[3]);
    const auto grads = g.backward(out);

    auto eval = [&](const std::vector<Tensor>& in) {
      Graph h;
      std::vector<Var> v;
      for (const auto& t : in) v.push_back(h.constant(t));
      return h.value(loss(h, v[0], v[1], v[2], v[3])).item();
    };
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      const Tensor numeric = test::central_difference(inputs, k, eval, 1e-6);
      if (!grads.contains(vars[k])) {
        for (double x : numeric.data()) EXPECT_NEAR(x, 0.0, 1e-8) << name << " input " << k;
        continue;
      }
      EXPECT_LE(max_rel_error(grads.at(vars[k]), numeric), 1e-6) << name << " input " << k;
    }
  }
}

TEST(Mlp, IdentityLayer) {
  Mlp net({Layer{Tensor::from_rows({{1.0}}), Tensor::from_rows({{0.0}}), Activation::kIdentity}});
  EXPECT_DOUBLE_EQ(net.predict(Tensor::from_rows({{3.0}})).item(), 3.0);
}

TEST(Mlp, ReluClampsNegative) {
  Mlp net({Layer{Tensor::from_rows({{-1.0}}), Tensor::from_rows({{0.0}}), Activation::kRelu}});
  EXPECT_DOUBLE_EQ(net.predict(Tensor::from_rows({{2.0}})).item(), 0.0);
}

Mlp oracle_net(Activation hidden) {
  return Mlp({Layer{Tensor::from_rows({{0.5, -0.25, 0.1}, {0.3, 0.8, -0.6}}),
                    Tensor::from_rows({{0.1, -0.2, 0.05}}), hidden},
              Layer{Tensor::from_rows({{0.7}, {-0.4}, {0.9}}), Tensor::from_rows({{0.3}}),
                    Activation::kIdentity}});
}

TEST(Mlp, TwoLayerMatchesIndependentForwardPass) {
  const Tensor x = Tensor::from_rows({{1.5, -0.5}, {0.2, 0.4}});
  const Tensor yt = oracle_net(Activation::kTanh).predict(x);
  EXPECT_NEAR(yt(0, 0), 1.4393201989660902, 1e-14);
  EXPECT_NEAR(yt(1, 0), 0.3371575474385421, 1e-14);
  const Tensor yr = oracle_net(Activation::kRelu).predict(x);
  EXPECT_NEAR(yr(0, 0), 1.24, 1e-14);
  EXPECT_NEAR(yr(1, 0), 0.496, 1e-14);

  Graph g;
  const Var y = oracle_net(Activation::kTanh).forward(g, g.constant(x));
  EXPECT_EQ(g.value(y).data()[0], yt.data()[0]);
  EXPECT_EQ(g.value(y).data()[1], yt.data()[1]);
}

TEST(Mlp, InputWidthMismatchThrows) {
  Graph g;
  EXPECT_THROW(oracle_net(Activation::kTanh).forward(g, g.constant(Tensor::matrix(1, 3))),
               DimensionError);
}

TEST(Mlp, InitWithinFanInBound) {
  Rng rng(3);
  const Mlp net = Mlp::make({5, 7, 2}, Activation::kRelu, Activation::kIdentity, rng);
  for (const auto& layer : net.layers()) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.weight.rows()));
    for (double w : layer.weight.data()) EXPECT_LE(std::abs(w), bound);
    for (double b : layer.bias.data()) EXPECT_LE(std::abs(b), bound);
  }
  EXPECT_EQ(net.parameter_count(), 5u * 7 + 7 + 7 * 2 + 2);
}

// Gradient check on 100 random small networks.
TEST(Mlp, RandomNetworkGradientsMatchFiniteDifferences) {
  Rng rng(11);
  const Activation acts[] = {Activation::kTanh, Activation::kRelu, Activation::kIdentity};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> widths;
    const std::size_t depth = 1 + rng.index(3);
    for (std::size_t l = 0; l <= depth; ++l) widths.push_back(1 + rng.index(8));
    Mlp net = Mlp::make(widths, acts[rng.index(3)], acts[rng.index(3)], rng);
    const Tensor x = test::random_tensor(1 + rng.index(4), widths.front(), rng);
    const Tensor target = test::random_tensor(x.rows(), widths.back(), rng);

    auto loss_of = [&](const Mlp& m, Graph& g, Binding* b) {
      const Var y = m.forward(g, g.constant(x), ParamMode::kTrainable, b);
      return g.mean(g.square(g.sub(y, g.constant(target))));
    };
    Graph g;
    Binding binding;
    const auto grads = g.backward(loss_of(net, g, &binding));

    auto params = net.parameters();
    for (std::size_t p = 0; p < params.size(); ++p) {
      Tensor numeric(params[p]->shape());
      for (std::size_t k = 0; k < params[p]->size(); ++k) {
        const double saved = (*params[p])[k];
        const double h = 1e-5;
        (*params[p])[k] = saved + h;
        const double up = [&] { Graph t; return t.value(loss_of(net, t, nullptr)).item(); }();
        (*params[p])[k] = saved - h;
        const double down = [&] { Graph t; return t.value(loss_of(net, t, nullptr)).item(); }();
        (*params[p])[k] = saved;
        numeric[k] = (up - down) / (2 * h);
      }
      const Var v = binding.params[p];
      // A relu layer that is dead on this batch records no adjoint.
      const Tensor analytic = grads.contains(v) ? grads.at(v) : Tensor(params[p]->shape());
      EXPECT_LE(max_rel_error(analytic, numeric), 1e-6) << "trial " << trial << " param " << p;
    }
  }
}

TEST(Mlp, FrozenParametersGetNoGradient) {
  Graph g;
  Binding b;
  const Mlp net = oracle_net(Activation::kTanh);
  const Var x = g.parameter(Tensor::from_rows({{1.0, 2.0}}));
  const Var y = net.forward(g, x, ParamMode::kFrozen, &b);
  const auto grads = g.backward(g.sum(y));
  for (const Var& p : b.params) EXPECT_FALSE(grads.contains(p));
  EXPECT_TRUE(grads.contains(x));
}

TEST(Adam, ZeroGradientLeavesParameters) {
  Tensor p = Tensor::scalar(1.25);
  Adam opt({&p}, {"p"});
  const Tensor g = Tensor::scalar(0.0);
  for (int i = 0; i < 5; ++i) opt.step({&g});
  EXPECT_EQ(p.item(), 1.25);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Tensor p = Tensor::scalar(1.0);
  Adam opt({&p}, {"p"}, AdamConfig{0.0003, 0.9, 0.999, 1e-8});
  const Tensor g = Tensor::scalar(1.0);
  opt.step({&g});
  EXPECT_NEAR(p.item(), 0.999700000003, 1e-15);
}

TEST(Adam, ConstantGradientMovesMonotonically) {
  Tensor p = Tensor::scalar(0.0);
  Adam opt({&p}, {"p"}, AdamConfig{0.01});
  const Tensor g = Tensor::scalar(2.0);
  double last = p.item();
  for (int i = 0; i < 100; ++i) {
    opt.step({&g});
    EXPECT_LT(p.item(), last);
    last = p.item();
  }
}

TEST(Adam, NonFiniteGradientNamesParameterAndLeavesState) {
  Tensor a = Tensor::scalar(1.0);
  Tensor b = Tensor::scalar(2.0);
  Adam opt({&a, &b}, {"alpha", "beta"});
  const Tensor ga = Tensor::scalar(1.0);
  const Tensor gb = Tensor::scalar(std::numeric_limits<double>::quiet_NaN());
  try {
    opt.step({&ga, &gb});
    FAIL() << "expected OptimizerError";
  } catch (const OptimizerError& e) {
    EXPECT_NE(std::string(e.what()).find("beta"), std::string::npos);
  }
  EXPECT_EQ(a.item(), 1.0);
  EXPECT_EQ(b.item(), 2.0);
  EXPECT_EQ(opt.step_count(), 0);
}

TEST(Adam, ShapeMismatchThrows) {
  Tensor a = Tensor::matrix(2, 2);
  Adam opt({&a}, {"a"});
  const Tensor g = Tensor::matrix(1, 2);
  EXPECT_THROW(opt.step({&g}), DimensionError);
}

std::vector<double> train_trajectory(std::uint64_t seed) {
  Rng rng(seed);
  Mlp net = Mlp::make({3, 6, 1}, Activation::kTanh, Activation::kIdentity, rng);
  Adam opt(net.parameters(), net.parameter_names("net"), AdamConfig{0.01});
  const Tensor x = test::random_tensor(8, 3, rng);
  const Tensor y = test::random_tensor(8, 1, rng);
  std::vector<double> out;
  for (int step = 0; step < 20; ++step) {
    Graph g;
    Binding b;
    const Var loss = g.mean(g.square(g.sub(net.forward(g, g.constant(x), ParamMode::kTrainable, &b), g.constant(y))));
    const auto grads = g.backward(loss);
    std::vector<const Tensor*> gp;
    for (const Var& v : b.params) gp.push_back(grads.contains(v) ? &grads.at(v) : nullptr);
    opt.step(gp);
    for (const Tensor* p : net.parameters()) out.insert(out.end(), p->data().begin(), p->data().end());
  }
  return out;
}

TEST(Determinism, SameSeedGivesBitIdenticalTrajectory) {
  EXPECT_EQ(train_trajectory(5), train_trajectory(5));
  EXPECT_NE(train_trajectory(5), train_trajectory(6));
}

TEST(Checkpoint, RoundTripIsExact) {
  Rng rng(2);
  const Mlp net = Mlp::make({4, 5, 3}, Activation::kRelu, Activation::kTanh, rng);
  Checkpoint ck;
  ck.step = 1234;
  ck.meta["note"] = "x";
  ck.add_mlp("policy", net);
  ck.add("log_alpha", Tensor::scalar(-0.1));

  const auto path = std::filesystem::temp_directory_path() / "mixent_ckpt_test.ckpt";
  ck.save(path);
  const Checkpoint back = Checkpoint::load(path);
  std::filesystem::remove(path);

  EXPECT_EQ(back.step, 1234);
  EXPECT_EQ(back.meta["note"], "x");
  EXPECT_EQ(back.get("log_alpha").item(), -0.1);
  const Mlp net2 = back.mlp("policy");
  const Tensor x = test::random_tensor(3, 4, rng);
  const Tensor a = net.predict(x);
  const Tensor b = net2.predict(x);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]);
  EXPECT_EQ(net2.layers()[1].activation, Activation::kTanh);
  EXPECT_THROW(back.get("missing"), ContractError);
}

TEST(Checkpoint, CorruptBytesRejected) {
  EXPECT_ANY_THROW(Checkpoint::deserialize("not a checkpoint"));
}

// Scalar reference kernels against the runtime-selected AVX2 variants.
class SimdEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!simd::backend_available(simd::Backend::kAvx2)) GTEST_SKIP() << "AVX2 not available";
  }
};

TEST_F(SimdEquivalence, KernelsAgree) {
#if defined(MIXENT_HAVE_AVX2)
  const auto& s = simd::scalar_table();
  const auto& v = simd::avx2_table();
  Rng rng(9);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 17u, 64u, 129u}) {
    const auto x = rng.normal_vector(n);
    const auto y = rng.normal_vector(n);
    EXPECT_NEAR(s.dot(x.data(), y.data(), n), v.dot(x.data(), y.data(), n), 1e-12 * (1 + n));

    auto ys = y;
    auto yv = y;
    s.axpy(0.7, x.data(), ys.data(), n);
    v.axpy(0.7, x.data(), yv.data(), n);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(ys[k], yv[k], 1e-14);

    ys = y;
    yv = y;
    s.blend(0.005, x.data(), ys.data(), n);
    v.blend(0.005, x.data(), yv.data(), n);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(ys[k], yv[k], 1e-15);

    auto ps = x, pv = x, ms = y, mv = y;
    std::vector<double> vs(n, 0.3), vv(n, 0.3);
    const simd::AdamCoefficients c{1e-3, 0.9, 0.999, 1e-8, 0.1, 0.001};
    s.adam(c, ps.data(), y.data(), ms.data(), vs.data(), n);
    v.adam(c, pv.data(), y.data(), mv.data(), vv.data(), n);
    for (std::size_t k = 0; k < n; ++k) {
      EXPECT_NEAR(ps[k], pv[k], 1e-14);
      EXPECT_NEAR(ms[k], mv[k], 1e-15);
      EXPECT_NEAR(vs[k], vv[k], 1e-15);
    }
  }
  for (auto [m, k, n] : {std::array<std::size_t, 3>{1, 1, 1}, {3, 5, 7}, {8, 4, 16}, {5, 9, 13}}) {
    const auto a = rng.normal_vector(m * k);
    const auto b = rng.normal_vector(k * n);
    std::vector<double> cs(m * n, 0.5), cv(m * n, 0.5);
    s.gemm_acc(a.data(), b.data(), cs.data(), m, k, n);
    v.gemm_acc(a.data(), b.data(), cv.data(), m, k, n);
    for (std::size_t q = 0; q < m * n; ++q) EXPECT_NEAR(cs[q], cv[q], 1e-12);
  }
#endif
}

TEST_F(SimdEquivalence, TrainingAgreesAcrossBackends) {
  const auto saved = simd::active_backend();
  simd::set_backend(simd::Backend::kScalar);
  const auto scalar = train_trajectory(4);
  simd::set_backend(simd::Backend::kAvx2);
  const auto avx = train_trajectory(4);
  simd::set_backend(saved);
  ASSERT_EQ(scalar.size(), avx.size());
  for (std::size_t k = 0; k < scalar.size(); ++k) EXPECT_NEAR(scalar[k], avx[k], 1e-10);
}

}  // namespace
}  // namespace mixent::nn
