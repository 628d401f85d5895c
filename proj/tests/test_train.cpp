#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "gplp/checkpoint.hpp"
#include "gplp/synth.hpp"
#include "gplp/train.hpp"

using namespace gplp;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("gplp_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct SmallRun {
  EdgeList data;
  InteractionMatrix matrix;
  Split split;
};

SmallRun small_benchmark() {
  SmallRun r;
  r.data = generate_block_model({40, 30, 2, 0.5, 0.03, 1.0, 3});
  r.split = split_train_test(r.data.records, {0.8, 3, false});
  r.matrix = build_matrix(r.data.num_attackers, r.data.num_targets, r.split.train);
  return r;
}

}  // namespace

TEST(Fit, ToyLossDecreases) {
  std::vector<EdgeRecord> recs{{0, 0, 1}, {1, 1, 0}};
  auto m = build_matrix(2, 2, recs);
  TrainConfig tc;
  tc.epochs = 200;
  tc.seed = 1;
  auto res = fit(m, recs, {}, fixture::small_config(), tc);
  ASSERT_EQ(res.history.size(), 200u);
  EXPECT_LT(res.history.back().train_loss, res.history.front().train_loss);
  EXPECT_FALSE(res.final_report.has_value());
}

TEST(Fit, SeparableSetIsLearned) {
  // Two planted blocks: a short run already ranks held-out pairs well.
  auto r = small_benchmark();
  ModelConfig mc = fixture::small_config();
  mc.hidden_dim = 16;
  TrainConfig tc;
  tc.epochs = 20;
  tc.batch_size = 32;
  tc.optimizer.lr = 0.005;
  tc.eval_every = 10;
  auto res = fit(r.matrix, r.split.train, r.split.test, mc, tc);
  ASSERT_TRUE(res.final_report.has_value());
  EXPECT_LT(res.history.back().train_loss, res.history.front().train_loss);
  EXPECT_GT(res.final_report->auroc_pos, 0.75);
  for (std::size_t e = 0; e < res.history.size(); ++e)
    EXPECT_EQ(res.history[e].test_auroc.has_value(), (e + 1) % 10 == 0);
  EXPECT_EQ(res.history.back().test_auroc, res.final_report->auroc_harmonic);
}

TEST(Fit, SameSeedSameTrajectory) {
  auto r = small_benchmark();
  TrainConfig tc;
  tc.epochs = 3;
  tc.batch_size = 64;
  tc.seed = 5;
  auto a = fit(r.matrix, r.split.train, r.split.test, fixture::small_config(), tc);
  auto b = fit(r.matrix, r.split.train, r.split.test, fixture::small_config(), tc);
  EXPECT_EQ(a.params, b.params);
  std::ostringstream ha, hb;
  write_history(ha, a.history);
  write_history(hb, b.history);
  EXPECT_EQ(ha.str(), hb.str());
  tc.seed = 6;
  EXPECT_NE(fit(r.matrix, r.split.train, r.split.test, fixture::small_config(), tc).params, a.params);
}

TEST(Fit, Errors) {
  std::vector<EdgeRecord> one_class{{0, 0, 1}, {1, 1, 1}};
  auto m = build_matrix(2, 2, one_class);
  TrainConfig tc;
  tc.epochs = 1;
  try {
    fit(m, one_class, {}, fixture::small_config(), tc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingleClass);
  }
  EXPECT_THROW(fit(m, {}, {}, fixture::small_config(), tc), Error);
  tc.batch_size = 0;
  std::vector<EdgeRecord> both{{0, 0, 1}, {1, 1, 0}};
  EXPECT_THROW(fit(m, both, {}, fixture::small_config(), tc), Error);
}

TEST(Fit, TransformIsApplied) {
  auto r = small_benchmark();
  TrainConfig tc;
  tc.epochs = 1;
  std::size_t calls = 0;
  FitOptions opts;
  opts.train_transform = [&](const SubgraphPair& p, std::size_t) {
    ++calls;
    return p;
  };
  fit(r.matrix, r.split.train, {}, fixture::small_config(), tc, opts);
  EXPECT_EQ(calls, rebalance_indices(r.split.train, 0).size());
}

TEST(History, Format) {
  std::vector<EpochStats> h{{0, 0.5, std::nullopt, std::nullopt}, {1, 0.25, 0.75, 0.625}};
  std::ostringstream os;
  write_history(os, h);
  EXPECT_EQ(os.str(), "epoch\ttrain_loss\ttest_auroc\ttest_aupr\n0\t0.5\tNA\tNA\n1\t0.25\t0.75\t0.625\n");
}

TEST(Checkpoint, RoundTripIsByteIdentical) {
  ModelConfig cfg;
  cfg.readout = Readout::PerStarConcat;
  auto params = init_params(cfg, 17);
  const auto path = temp_path("roundtrip.ckpt");
  save_checkpoint(params, cfg, path);
  auto [p2, c2] = load_checkpoint(path);
  EXPECT_EQ(c2, cfg);
  EXPECT_EQ(p2, params);
  const auto path2 = temp_path("roundtrip2.ckpt");
  save_checkpoint(p2, c2, path2);
  EXPECT_EQ(slurp(path), slurp(path2));

  auto graphs = fixture::small_graphs(2, 5, cfg.features);
  EXPECT_EQ(predict(params, cfg, graphs), predict(p2, c2, graphs));
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST(Checkpoint, CorruptInputs) {
  ModelConfig cfg;
  auto bytes = encode_checkpoint(init_params(cfg, 1), cfg);
  auto kind = [](const std::string& b) {
    try {
      decode_checkpoint(b);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::BadParameter;
  };
  EXPECT_EQ(kind(bytes.substr(0, bytes.size() - 3)), ErrorKind::FormatError);
  EXPECT_EQ(kind(bytes.substr(0, 7)), ErrorKind::FormatError);
  EXPECT_EQ(kind("GPLQ" + bytes.substr(4)), ErrorKind::FormatError);
  EXPECT_EQ(kind(bytes + "x"), ErrorKind::FormatError);
  auto bad_manifest = bytes;
  bad_manifest[9] = 7;  // input_dim 7 does not match the feature mode
  EXPECT_EQ(kind(bad_manifest), ErrorKind::FormatError);
  try {
    load_checkpoint(temp_path("does_not_exist.ckpt"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
}
