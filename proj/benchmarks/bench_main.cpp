// Copyright 2026 The tsebench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "tse/audio/synth.hpp"
#include "tse/common/rng.hpp"
#include "tse/frontend/stft.hpp"
#include "tse/nn/lstm.hpp"
#include "tse/speaker/mhfa.hpp"
#include "tse/upstream/toy_upstream.hpp"

namespace {

using namespace tse;

Mat random_mat(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

AudioSignal seconds_of_speech(double s) { return synth_utterance(make_speaker_profiles(1, 1)[0], s, 7); }

void BM_StftRoundTrip(benchmark::State& state) {
  const AudioSignal x = seconds_of_speech(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    const AudioSignal y = istft_decode(stft_encode(x.view()), x.size());
    benchmark::DoNotOptimize(y.samples.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_StftRoundTrip)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

// One BLSTM layer over T frames, forward and backward.
void BM_Blstm(benchmark::State& state) {
  const int in = 192, hidden = static_cast<int>(state.range(0));
  Rng rng(1);
  const BlstmParams p = BlstmParams::init(in, hidden, rng);
  const Mat x = random_mat(rng, 150, in);
  BlstmParams grads = p;
  for (auto _ : state) {
    BlstmCache cache;
    const Mat h = blstm_forward(p, x, cache);
    const Mat g = blstm_backward(p, x, cache, h, grads);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_Blstm)->Arg(96)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_MhfaEmbed(benchmark::State& state) {
  Rng rng(2);
  const int heads = static_cast<int>(state.range(0));
  const MhfaParams p = MhfaParams::init({5, 192, heads, 128, 256}, rng);
  const ToyUpstream up({1234, 4, 192});
  const FeatureStack s = up.extract(seconds_of_speech(3.0));
  for (auto _ : state) benchmark::DoNotOptimize(mhfa_embed(s, p).data());
}
BENCHMARK(BM_MhfaEmbed)->Arg(4)->Arg(32)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
