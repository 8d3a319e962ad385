#include "aec/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "aec/errors.hpp"
#include "aec/solver_eiss.hpp"
#include "aec/solver_ip.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aec {

AecState::AecState(const AecConfig& cfg)
    : config(cfg), history(cfg.order, cfg.ctf_len, cfg.bins()) {
  config.validate();
  const int n = config.taps();
  const int bins = config.bins();
  cov.reserve(bins);
  filters.reserve(bins);
  for (int i = 0; i < bins; ++i) {
    cov.push_back(WeightedCovariance::scaled_identity(n, config.v_init_scale));
    filters.push_back(ExtractionFilter::identity(n));
  }
  trace.n_bins = bins;
  trace.n_taps = n;
  stacked.assign(static_cast<size_t>(bins) * n, cpx{});
  prior_power.assign(bins, 0.0);
}

void solver_step(Solver solver, const WeightedCovariance& V, ExtractionFilter& filter,
                 int eiss_sweeps) {
  if (solver == Solver::IP) {
    static thread_local std::vector<cpx> w;
    try {
      ip_solve_regularized(V, w);
      normalize_in_place(w);
      filter.w.swap(w);
    } catch (const NumericError&) {
      // keep the previous filter
    }
  } else {
    filter = eiss_update(std::move(filter), V, {eiss_sweeps, false});
  }
}

namespace {

// Everything one bin does after the shared weight is known. Identical code on
// the serial and OpenMP paths, so results do not depend on the thread count.
inline cpx update_bin(AecState& state, int i, std::span<const cpx> y, double phi) {
  const AecConfig& cfg = state.config;
  update_covariance(state.cov[i], y, phi, cfg.alpha);
  solver_step(cfg.solver, state.cov[i], state.filters[i], cfg.eiss_sweeps);
  return filter_output(state.filters[i].w, y);
}

}  // namespace

std::vector<cpx> process_frame(AecState& state, std::span<const cpx> mic_bins,
                               std::span<const std::span<const cpx>> ref_bins) {
  const AecConfig& cfg = state.config;
  const int bins = cfg.bins();
  const int n = cfg.taps();
  if (static_cast<int>(mic_bins.size()) != bins)
    throw DataError("process_frame: mic bin count mismatch");
  if (static_cast<int>(ref_bins.size()) != cfg.order)
    throw DataError("process_frame: expected one reference column per channel");

  state.history.push(ref_bins);

  auto stack_and_prior = [&](int i) {
    std::span<cpx> y{state.stacked.data() + static_cast<size_t>(i) * n,
                     static_cast<size_t>(n)};
    y[0] = mic_bins[i];
    state.history.gather(i, y);
    state.prior_power[i] = std::norm(filter_output(state.filters[i].w, y));
  };

  std::vector<cpx> out(bins);
  auto run_bin = [&](int i, double phi) {
    std::span<const cpx> y{state.stacked.data() + static_cast<size_t>(i) * n,
                           static_cast<size_t>(n)};
    out[i] = update_bin(state, i, y, phi);
  };

#ifdef _OPENMP
  const bool parallel = cfg.threads != 1;
  const int nthreads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#else
  const bool parallel = false;
#endif

  if (!parallel) {
    for (int i = 0; i < bins; ++i) stack_and_prior(i);
  } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (int i = 0; i < bins; ++i) stack_and_prior(i);
#endif
  }

  // The auxiliary norm couples all bins; summed serially in bin order so the
  // result is independent of the parallel schedule.
  double sum = 0.0;
  for (int i = 0; i < bins; ++i) sum += state.prior_power[i];
  const double r = std::sqrt(sum);
  const double phi = weight(r, cfg.beta, cfg.r_floor);
  if (!std::isfinite(phi)) throw NumericError("process_frame: non-finite weight");

  if (!parallel) {
    for (int i = 0; i < bins; ++i) run_bin(i, phi);
  } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (int i = 0; i < bins; ++i) run_bin(i, phi);
#endif
  }

  if (state.record_trace) {
    std::vector<std::complex<float>> snap(static_cast<size_t>(bins) * n);
    for (int i = 0; i < bins; ++i)
      for (int t = 0; t < n; ++t)
        snap[static_cast<size_t>(i) * n + t] =
            std::complex<float>(state.filters[i].w[t]);
    state.trace.frames.push_back(std::move(snap));
  }

  ++state.frame_index;
  return out;
}

namespace {

std::pair<std::vector<double>, std::vector<double>> pad_to_common(
    std::span<const double> a, std::span<const double> b) {
  const size_t len = std::max(a.size(), b.size());
  std::vector<double> pa(a.begin(), a.end()), pb(b.begin(), b.end());
  pa.resize(len, 0.0);
  pb.resize(len, 0.0);
  return {std::move(pa), std::move(pb)};
}

}  // namespace

RunResult run(std::span<const double> mic, std::span<const double> far_end,
              const AecConfig& config, bool record_trace) {
  config.validate();
  auto [mic_pad, far_pad] = pad_to_common(mic, far_end);
  const size_t out_len = mic.size();

  const ExpandedReference expanded = expand_reference(far_pad, config.order);
  std::vector<Spectrogram> ref_specs(config.order);
  for (int p = 0; p < config.order; ++p)
    ref_specs[p] = analyze(expanded.channels[p], config);
  const Spectrogram mic_spec = analyze(mic_pad, config);

  AecState state(config);
  state.record_trace = record_trace;

  Spectrogram out_spec = mic_spec;  // copies metadata and allocates data
  std::vector<std::span<const cpx>> ref_cols(config.order);
  for (int j = 0; j < mic_spec.n_frames; ++j) {
    for (int p = 0; p < config.order; ++p) ref_cols[p] = ref_specs[p].frame(j);
    const std::vector<cpx> s_hat = process_frame(state, mic_spec.frame(j), ref_cols);
    std::copy(s_hat.begin(), s_hat.end(), out_spec.frame(j).begin());
  }

  RunResult result;
  result.output = synthesize(out_spec, config);
  result.output.resize(out_len, 0.0);
  result.trace = std::move(state.trace);
  return result;
}

std::vector<double> replay_on_echo(const FilterTrace& trace,
                                   std::span<const double> echo_only,
                                   std::span<const double> far_end,
                                   const AecConfig& config) {
  config.validate();
  if (trace.n_taps != config.taps() || trace.n_bins != config.bins())
    throw DataError("replay_on_echo: trace dimensions do not match config");

  auto [echo_pad, far_pad] = pad_to_common(echo_only, far_end);
  const size_t out_len = echo_only.size();

  const ExpandedReference expanded = expand_reference(far_pad, config.order);
  std::vector<Spectrogram> ref_specs(config.order);
  for (int p = 0; p < config.order; ++p)
    ref_specs[p] = analyze(expanded.channels[p], config);
  const Spectrogram echo_spec = analyze(echo_pad, config);

  if (echo_spec.n_frames != trace.n_frames())
    throw DataError("replay_on_echo: frame count does not match trace");

  const int bins = config.bins();
  const int n = config.taps();
  RefHistory history(config.order, config.ctf_len, bins);
  Spectrogram res_spec = echo_spec;

  std::vector<std::span<const cpx>> ref_cols(config.order);
  std::vector<cpx> y(n);
  std::vector<cpx> w(n);
  for (int j = 0; j < echo_spec.n_frames; ++j) {
    for (int p = 0; p < config.order; ++p) ref_cols[p] = ref_specs[p].frame(j);
    history.push(ref_cols);
    for (int i = 0; i < bins; ++i) {
      y[0] = echo_spec.at(i, j);
      history.gather(i, y);
      for (int t = 0; t < n; ++t) w[t] = cpx(trace.at(j, i, t));
      res_spec.at(i, j) = filter_output(w, y);
    }
  }

  std::vector<double> residual = synthesize(res_spec, config);
  residual.resize(out_len, 0.0);
  return residual;
}

}  // namespace aec
