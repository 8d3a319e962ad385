#include "aec/expansion.hpp"

#include <algorithm>

#include "aec/errors.hpp"

namespace aec {

ExpandedReference expand_reference(std::span<const double> x, int order) {
  if (order < 1) throw ConfigError("expansion order P must be >= 1");
  ExpandedReference ref;
  ref.order = order;
  ref.channels.resize(order);
  ref.channels[0].assign(x.begin(), x.end());
  for (int p = 1; p < order; ++p) {
    ref.channels[p].resize(x.size());
    const auto& prev = ref.channels[p - 1];
    for (size_t t = 0; t < x.size(); ++t)
      ref.channels[p][t] = prev[t] * x[t] * x[t];  // x^(2p+1)
  }
  return ref;
}

StackedObservation stack_observation(const Spectrogram& mic,
                                     std::span<const Spectrogram> refs, int bin, int frame,
                                     int ctf_len) {
  for (const Spectrogram& r : refs)
    if (r.n_bins != mic.n_bins || r.n_frames != mic.n_frames)
      throw DataError("stack_observation: spectrogram dimensions differ");
  if (bin < 0 || bin >= mic.n_bins || frame < 0 || frame >= mic.n_frames)
    throw DataError("stack_observation: bin/frame out of range");

  const int order = static_cast<int>(refs.size());
  StackedObservation obs;
  obs.y.assign(static_cast<size_t>(order) * ctf_len + 1, cpx{});
  obs.y[0] = mic.at(bin, frame);
  for (int p = 0; p < order; ++p)
    for (int l = 0; l < ctf_len; ++l)
      if (frame - l >= 0) obs.y[stack_index(p, l, ctf_len)] = refs[p].at(bin, frame - l);
  return obs;
}

RefHistory::RefHistory(int order, int ctf_len, int n_bins)
    : order_(order), ctf_len_(ctf_len), n_bins_(n_bins),
      buf_(static_cast<size_t>(order) * ctf_len * n_bins, cpx{}) {}

void RefHistory::push(std::span<const std::span<const cpx>> channel_bins) {
  if (static_cast<int>(channel_bins.size()) != order_)
    throw DataError("RefHistory: wrong channel count");
  pos_ = (pos_ + 1) % ctf_len_;
  for (int p = 0; p < order_; ++p) {
    if (static_cast<int>(channel_bins[p].size()) != n_bins_)
      throw DataError("RefHistory: wrong bin count");
    cpx* dst = buf_.data() + (static_cast<size_t>(p) * ctf_len_ + pos_) * n_bins_;
    std::copy(channel_bins[p].begin(), channel_bins[p].end(), dst);
  }
  filled_ = std::min(filled_ + 1, ctf_len_);
}

void RefHistory::gather(int bin, std::span<cpx> out) const {
  for (int p = 0; p < order_; ++p) {
    for (int l = 0; l < ctf_len_; ++l) {
      cpx v{};
      if (l < filled_) {
        const int slot = (pos_ - l + ctf_len_) % ctf_len_;
        v = buf_[(static_cast<size_t>(p) * ctf_len_ + slot) * n_bins_ + bin];
      }
      out[stack_index(p, l, ctf_len_)] = v;
    }
  }
}

void RefHistory::reset() {
  std::fill(buf_.begin(), buf_.end(), cpx{});
  pos_ = 0;
  filled_ = 0;
}

}  // namespace aec
