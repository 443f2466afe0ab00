// Copyright 2026 The DRIP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>

#include <benchmark/benchmark.h>

#include "drip/config.h"
#include "drip/dataset.h"
#include "drip/random.h"
#include "drip/synth.h"
#include "drip/trainer.h"

namespace drip {
namespace {

TrainingData BlobTrainingData() {
  RandomSource rng(7);
  const SynthTable synth = *SynthBlobs(rng, BlobOptions{});
  IngestOptions ingest;
  ingest.private_column = "s";
  const Dataset d = *IngestTable(synth.table, synth.schema, ingest);
  return ToTrainingData(d, d.encoding.train);
}

void BM_AlternatingStep(benchmark::State& state) {
  static const TrainingData data = BlobTrainingData();
  TradeoffConfig config;
  config.privacy = static_cast<PrivacyMetric>(state.range(0));
  config.utility = UtilityKind::kReconstruction;
  config.lambda1 = 1.0;
  TrainState train = *InitTrainState(config, data);
  for (auto _ : state) {
    benchmark::DoNotOptimize(AlternatingStep(train, config, data));
  }
  state.SetLabel(std::string(PrivacyMetricName(config.privacy)));
}
BENCHMARK(BM_AlternatingStep)
    ->DenseRange(0, 2)
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace drip

BENCHMARK_MAIN();
