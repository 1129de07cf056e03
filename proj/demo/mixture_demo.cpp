// Copyright 2026 The oodkit Authors
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

// Synthetic end-to-end run: Gaussian-mixture in-distribution data, uniform
// noise outliers, autoencoder features, all five scorers, AUC per scorer.
//
//   mixture_demo [seed]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "oodkit/oodkit.hpp"

int main(int argc, char ** argv)
{
  using namespace oodkit;
  constexpr std::size_t dim = 16;
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 7;

  const auto layout = random_mixture_layout(dim, 3, 0, 0.05, seed);
  auto with_counts = [&](std::size_t total) {
    auto comps = layout;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      comps[c].count = total / comps.size() + (c < total % comps.size() ? 1 : 0);
    }
    return comps;
  };
  const auto train_set = synth_gaussian_mixture(with_counts(2000), seed + 1);
  const auto test_in = synth_gaussian_mixture(with_counts(500), seed + 2);
  const auto noise = synth_outliers({OutlierKind::uniform_noise, 500, seed + 3, {}}, OutlierShape::flat(dim));
  const auto test = vstack(test_in, noise);
  std::vector<std::uint8_t> labels(test.rows(), 0);
  std::fill(labels.begin() + static_cast<std::ptrdiff_t>(test_in.rows()), labels.end(), 1);

  const auto t0 = std::chrono::steady_clock::now();
  TrainConfig cfg;
  cfg.seed = seed;
  const auto layers = default_layers(dim);
  const auto trained = train(init_model(dim, layers, seed), train_set, cfg);
  std::printf("layers %s, %zu epochs, loss %.6g -> %.6g\n", format_layers(layers).c_str(), cfg.epochs,
              trained.loss_history.front(), trained.loss_history.back());
  const auto ftrain = encode(trained.model, train_set);
  const auto ftest = encode(trained.model, test);

  for (auto kind : kAllScorerKinds) {
    const auto latent = roc_curve(score(fit_scorer(kind, ftrain), ftest).scores, labels);
    const auto raw = roc_curve(score(fit_scorer(kind, train_set), test).scores, labels);
    std::printf("%-4s auc=%.6f  (raw features %.6f)\n", std::string(to_string(kind)).c_str(), latent.auc, raw.auc);
  }
  const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("elapsed %.2fs\n", secs);
  return 0;
}
