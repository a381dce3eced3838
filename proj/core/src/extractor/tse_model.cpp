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

#include "tse/extractor/tse_model.hpp"

#include <algorithm>

#include "tse/common/error.hpp"
#include "tse/audio/mixing.hpp"
#include "tse/audio/synth.hpp"
#include "tse/common/rng.hpp"

namespace tse {

std::string_view to_string(EncoderKind k) { return k == EncoderKind::kStft ? "stft" : "learnable"; }
std::string_view to_string(FeatureSource k) { return k == FeatureSource::kSsl ? "ssl" : "stft"; }
std::string_view to_string(SpkEncKind k) { return k == SpkEncKind::kMhfa ? "mhfa" : "stft_blstm"; }

EncoderKind encoder_kind_from_string(std::string_view s) {
  if (s == "stft") return EncoderKind::kStft;
  if (s == "learnable") return EncoderKind::kLearnable;
  throw ConfigError("unknown encoder kind \"" + std::string(s) + "\"");
}
FeatureSource feature_source_from_string(std::string_view s) {
  if (s == "ssl") return FeatureSource::kSsl;
  if (s == "stft") return FeatureSource::kStft;
  throw ConfigError("unknown feature source \"" + std::string(s) + "\"");
}
SpkEncKind spk_enc_kind_from_string(std::string_view s) {
  if (s == "mhfa") return SpkEncKind::kMhfa;
  if (s == "stft_blstm") return SpkEncKind::kStftBlstm;
  throw ConfigError("unknown speaker encoder kind \"" + std::string(s) + "\"");
}

void ModelConfig::validate() const {
  if (encoder == EncoderKind::kLearnable && mask != MaskKind::kEncoder)
    throw ConfigError("the learnable encoder requires the encoder-domain mask");
  if (encoder == EncoderKind::kStft && mask == MaskKind::kEncoder)
    throw ConfigError("the encoder-domain mask requires the learnable encoder");
  for (int v : {blstm_hidden, spk_blstm_hidden, spk_blstm_layers, embed, mhfa_heads, mhfa_compress, conv_filters})
    if (v < 1) throw ConfigError("model dimensions must be positive");
  if (needs_upstream() && (upstream_layers < 2 || upstream_dim < 1))
    throw ConfigError("upstream must provide at least 2 layers of positive dimension");
}

std::vector<AudioSignal> calibration_mixtures(std::uint64_t seed) {
  constexpr int kCount = 48;
  const auto speakers = make_speaker_profiles(kCount, seed);
  std::vector<AudioSignal> out;
  for (int i = 0; i < kCount; ++i) {
    const AudioSignal a = synth_utterance(speakers[i], 1.5, Rng::derive(seed, 1, i));
    const AudioSignal b = synth_utterance(speakers[(i + 1) % kCount], 1.5, Rng::derive(seed, 2, i));
    out.push_back(mix_min(a, b, 0.0).mixture);
  }
  return out;
}

TseModel TseModel::init(const ModelConfig& c, std::uint64_t seed, bool fit_decoder) {
  c.validate();
  Rng rng(Rng::derive(seed, 0x30de1));
  TseModel m;
  m.config = c;
  if (c.spk_enc == SpkEncKind::kMhfa) {
    m.mhfa = MhfaParams::init({c.upstream_layers, c.upstream_dim, c.mhfa_heads, c.mhfa_compress, c.embed}, rng);
  } else {
    m.stft_spkenc = StftSpkEncParams::init(kNumBins, c.spk_blstm_hidden, c.spk_blstm_layers, c.embed, rng);
  }
  ExtractorConfig ec;
  ec.input_dim = c.extractor_input == FeatureSource::kSsl ? c.upstream_dim : kNumBins;
  ec.hidden = c.blstm_hidden;
  ec.embed = c.embed;
  ec.fusion = c.fusion;
  ec.mask = c.mask;
  ec.mask_width = c.mask == MaskKind::kEncoder ? c.conv_filters : kNumBins;
  m.extractor = ExtractorParams::init(ec, rng);
  if (c.extractor_input == FeatureSource::kSsl) m.extractor_weights = LayerWeights::zeros(c.upstream_layers);
  if (c.encoder == EncoderKind::kLearnable) {
    m.conv = ConvFrontendParams::init(c.conv_filters, rng);
    // Sign-paired filters keep a linear view of every projection through
    // the ReLU, which lets the fitted decoder start near pass-through.
    const Eigen::Index half = c.conv_filters / 2;
    m.conv.encoder.middleCols(half, half) = -m.conv.encoder.leftCols(half);
    if (fit_decoder) m.conv.fit_decoder(calibration_mixtures(Rng::derive(seed, 0xca1)), 1e-2);
  }
  return m;
}

SpeakerEmbedding TseModel::embed_enrollment(const TseInputs& in, TseForwardCache* cache) const {
  if (config.spk_enc == SpkEncKind::kMhfa) {
    if (!in.enrollment_features) throw ConfigError("MHFA speaker encoder needs enrollment features");
    return mhfa_embed(*in.enrollment_features, mhfa, cache ? &cache->mhfa : nullptr);
  }
  return stft_spkenc_embed(stft_encode(in.enrollment), stft_spkenc, cache ? &cache->stft_spkenc : nullptr);
}

AudioSignal TseModel::forward(const TseInputs& in, TseForwardCache* cache, const ForwardOptions& options) const {
  TseForwardCache local;
  TseForwardCache& c = cache ? *cache : local;
  c.length = in.mixture.size();
  c.embedding = embed_enrollment(in, &c);

  // Encoder domain and frame count.
  Eigen::Index frames = 0;
  if (config.encoder == EncoderKind::kStft) {
    c.mixture_spec = stft_encode(in.mixture);
    frames = c.mixture_spec.num_frames();
  } else {
    c.mixture_frames = frame_signal(in.mixture);
    c.mixture_encoded = (c.mixture_frames * conv.encoder).cwiseMax(0.0);
    frames = c.mixture_encoded.rows();
  }

  // Extractor input, truncated to the encoder's frame count.
  if (config.extractor_input == FeatureSource::kSsl) {
    if (!in.mixture_features) throw ConfigError("extractor needs mixture features");
    if (in.mixture_features->dim() != config.upstream_dim ||
        in.mixture_features->num_layers() != config.upstream_layers)
      throw ConfigError("upstream features do not match the model's upstream dimensions");
    const Mat h = weighted_layer_sum(*in.mixture_features, extractor_weights);
    frames = std::min(frames, h.rows());
    c.extractor_input = h.topRows(frames);
  } else {
    const Spectrogram& spec = config.encoder == EncoderKind::kStft ? c.mixture_spec : (c.mixture_spec = stft_encode(in.mixture));
    frames = std::min(frames, spec.num_frames());
    c.extractor_input = log_magnitude(spec).topRows(frames);
  }
  c.frames = frames;

  c.mask = estimate_mask(c.extractor_input, c.embedding, extractor, &c.extractor);
  if (options.force_unit_mask) c.mask = MaskTensor::ones(c.mask.kind, c.mask.real.rows(), c.mask.real.cols());

  if (config.encoder == EncoderKind::kStft) {
    Spectrogram zy = c.mixture_spec;
    zy.frames = c.mixture_spec.frames.topRows(frames);
    return istft_decode(apply_mask(zy, c.mask), c.length);
  }
  c.masked_encoded = c.mixture_encoded.topRows(frames).cwiseProduct(c.mask.real);
  return deconv_decode(c.masked_encoded, conv.decoder, c.length);
}

void TseModel::backward(const TseInputs& in, const TseForwardCache& c, std::span<const double> grad_estimate,
                        TseModel& g) const {
  MaskTensor gm;
  gm.kind = c.mask.kind;
  if (config.encoder == EncoderKind::kStft) {
    const CMat gz = istft_backward(grad_estimate, c.frames);
    const CMat zy = c.mixture_spec.frames.topRows(c.frames);
    if (c.mask.kind == MaskKind::kMagnitude) {
      // Z_s = M Z_y with real M: dL/dM = Re(conj(Z_y) G).
      gm.real = (zy.conjugate().array() * gz.array()).real().matrix();
    } else {
      // Z_s = (Mr + i Mi) Z_y.
      gm.real = (zy.real().array() * gz.real().array() + zy.imag().array() * gz.imag().array()).matrix();
      gm.imag = (zy.real().array() * gz.imag().array() - zy.imag().array() * gz.real().array()).matrix();
    }
  } else {
    const Mat gs = deconv_decode_backward(c.masked_encoded, conv.decoder, grad_estimate, g.conv.decoder);
    const Mat zy = c.mixture_encoded.topRows(c.frames);
    gm.real = gs.cwiseProduct(zy);
    Mat gzy = Mat::Zero(c.mixture_encoded.rows(), c.mixture_encoded.cols());
    gzy.topRows(c.frames) = gs.cwiseProduct(c.mask.real);
    conv_encode_backward(c.mixture_frames, c.mixture_encoded, gzy, g.conv.encoder);
  }
  backward_from_mask(in, c, gm, g);
}

void TseModel::backward_from_mask(const TseInputs& in, const TseForwardCache& c, const MaskTensor& gm,
                                  TseModel& g) const {
  Mat gfeat, ge;
  estimate_mask_backward(c.embedding, extractor, c.extractor, gm, g.extractor, gfeat, ge);
  if (config.extractor_input == FeatureSource::kSsl) {
    const FeatureStack& stack = *in.mixture_features;
    Mat gh = Mat::Zero(stack.frames(), stack.dim());
    gh.topRows(c.frames) = gfeat;
    weighted_layer_sum_backward(stack, extractor_weights, gh, g.extractor_weights.logits);
  }
  if (config.spk_enc == SpkEncKind::kMhfa)
    mhfa_backward(*in.enrollment_features, mhfa, c.mhfa, ge, g.mhfa);
  else
    stft_spkenc_backward(stft_spkenc, c.stft_spkenc, ge, g.stft_spkenc);
}

AudioSignal tse_forward(const TseModel& model, const TseInputs& in) { return model.forward(in); }

}  // namespace tse
