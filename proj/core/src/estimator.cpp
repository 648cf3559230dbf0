#include <hombeat/estimator.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include <hombeat/errors.hpp>
#include <hombeat/fisher.hpp>

namespace hombeat {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kGoldenRatio = 0.6180339887498949;  // 1/phi

// Per-event data with the candidate-independent part folded out:
// ll(dx) = base + sum_i log1p(sign_i * cos(dk_i * dx / 2)).
struct EventTerms {
  std::vector<double> dk;
  std::vector<double> sign;
  double base = 0.0;  // sum_i log( C(dk_i) / 2 ); -inf if any event is off-support
};

EventTerms event_terms(const SampleBatch& batch) {
  if (!batch.scene.aligned())
    throw std::invalid_argument("estimator: batch scene must be aligned (x0 == centroid)");
  EventTerms terms;
  terms.dk.reserve(batch.outcomes.size());
  terms.sign.reserve(batch.outcomes.size());
  const Envelope& env = batch.scene.envelope();
  for (const Outcome& o : batch.outcomes) {
    terms.dk.push_back(o.delta_k);
    terms.sign.push_back(tag_sign(o.tag));
    const double c = env(o.delta_k);
    terms.base += c > 0.0 ? std::log(0.5 * c) : kNegInf;
  }
  return terms;
}

double beat_sum(const EventTerms& t, double dx) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.dk.size(); ++i)
    s += std::log1p(t.sign[i] * std::cos(t.dk[i] * dx / 2.0));
  return s;
}

// Golden-section ascent of f on [lo, hi] to absolute width tolerance.
struct GoldenResult {
  double x, fx;
  int iterations;
  bool converged;
};

template <class F>
GoldenResult golden_max(F&& f, double lo, double hi, double tol, int max_iter = 200) {
  double x1 = hi - kGoldenRatio * (hi - lo);
  double x2 = lo + kGoldenRatio * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  int it = 0;
  while (hi - lo > tol && it < max_iter) {
    ++it;
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGoldenRatio * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGoldenRatio * (hi - lo);
      f1 = f(x1);
    }
  }
  const double x = f1 > f2 ? x1 : x2;
  const double fx = f1 > f2 ? f1 : f2;
  return {x, fx, it, hi - lo <= tol};
}

// Shared grid-then-golden maximizer over [0, dx_max]. The coarse scan uses
// caller-supplied batched evaluation (see mle's recurrence); golden-section
// then refines inside the best cell, which also keeps any -inf grid
// candidates out of the final bracket.
template <class ScanFn, class LlFn>
EstimationResult maximize_likelihood(ScanFn&& scan, LlFn&& ll, double dx_max, int grid_points,
                                     double tol) {
  const std::vector<double> grid_ll = scan(grid_points);
  std::size_t best = grid_points;  // sentinel
  for (std::size_t j = 0; j < grid_ll.size(); ++j) {
    if (std::isfinite(grid_ll[j]) && (best == static_cast<std::size_t>(grid_points) ||
                                      grid_ll[j] > grid_ll[best]))
      best = j;
  }
  if (best == static_cast<std::size_t>(grid_points))
    throw EstimationError("mle: likelihood is -inf for every candidate in the bracket");

  const double step = dx_max / static_cast<double>(grid_points - 1);
  const double lo = std::max(0.0, static_cast<double>(best) * step - step);
  const double hi = std::min(dx_max, static_cast<double>(best) * step + step);
  const GoldenResult g = golden_max(ll, lo, hi, tol);

  EstimationResult result;
  result.estimate = g.x;
  result.log_likelihood = g.fx;
  result.bracket_lo = 0.0;
  result.bracket_hi = dx_max;
  result.iterations = g.iterations;
  result.converged = g.converged;
  return result;
}

}  // namespace

double log_likelihood(const SampleBatch& batch, double delta_x) {
  if (batch.outcomes.empty()) return 0.0;
  const EventTerms terms = event_terms(batch);
  if (terms.base == kNegInf) return kNegInf;
  return terms.base + beat_sum(terms, delta_x);
}

EstimationResult mle(const SampleBatch& batch, const MleOptions& opts) {
  if (batch.outcomes.empty()) throw EstimationError("mle: empty batch");
  const EventTerms terms = event_terms(batch);
  if (terms.base == kNegInf)
    throw EstimationError("mle: an outcome lies outside the envelope support");
  const double dx_max = opts.delta_x_max > 0.0 ? opts.delta_x_max : 8.0 * batch.scene.sigma_x();
  if (opts.grid_points < 3) throw std::invalid_argument("mle: grid_points must be >= 3");
  const double tol = 1e-6 * batch.scene.sigma_x();

  // Coarse scan over the uniform candidate grid. cos(dk * j * step / 2)
  // advances with the Chebyshev recurrence, one multiply-add per candidate;
  // the refinement stage re-evaluates exactly, so round-off here only moves
  // the bracket by at most one cell.
  auto scan = [&](int grid_points) {
    const double step = dx_max / static_cast<double>(grid_points - 1);
    std::vector<double> acc(static_cast<std::size_t>(grid_points), 0.0);
    for (std::size_t i = 0; i < terms.dk.size(); ++i) {
      const double theta = terms.dk[i] * step / 2.0;
      const double two_cos = 2.0 * std::cos(theta);
      const double s = terms.sign[i];
      double c_prev = std::cos(theta);  // j = 1
      double c_prev2 = 1.0;             // j = 0
      acc[0] += std::log1p(s);
      if (grid_points > 1) acc[1] += std::log1p(s * c_prev);
      for (std::size_t j = 2; j < acc.size(); ++j) {
        const double c = two_cos * c_prev - c_prev2;
        c_prev2 = c_prev;
        c_prev = c;
        acc[j] += std::log1p(s * c);
      }
    }
    return acc;
  };
  auto ll = [&](double dx) { return terms.base + beat_sum(terms, dx); };

  EstimationResult result = maximize_likelihood(scan, ll, dx_max, opts.grid_points, tol);
  return result;
}

EstimationResult mle_bucket(std::span<const Tag> tags, const Scene& scene_template,
                            const MleOptions& opts) {
  if (tags.empty()) throw EstimationError("mle_bucket: empty tag list");
  if (!scene_template.aligned())
    throw std::invalid_argument("mle_bucket: scene template must be aligned");
  const double dx_max =
      opts.delta_x_max > 0.0 ? opts.delta_x_max : 8.0 * scene_template.sigma_x();
  const double n = static_cast<double>(tags.size());
  const double n_bunch = static_cast<double>(
      std::count_if(tags.begin(), tags.end(), [](Tag t) { return t == Tag::Bunch; }));
  const double p_hat = n_bunch / n;

  const Envelope& env = scene_template.envelope();
  auto binomial_ll = [&](double dx) {
    const double p = bunch_probability(env, dx);
    double v = 0.0;
    if (n_bunch > 0.0) v += p > 0.0 ? n_bunch * std::log(p) : kNegInf;
    if (n_bunch < n) v += p < 1.0 ? (n - n_bunch) * std::log1p(-p) : kNegInf;
    return v;
  };

  EstimationResult result;
  result.bracket_lo = 0.0;
  result.bracket_hi = dx_max;

  if (p_hat <= 0.5) {
    // The overlap integral is nonnegative, so fractions at or below 1/2 do
    // not identify a separation; report the far edge, unconverged.
    result.estimate = dx_max;
    result.log_likelihood = binomial_ll(dx_max);
    result.converged = false;
    return result;
  }

  if (env.is_gaussian()) {
    const double s = env.gaussian_sigma_k();
    const double est = 2.0 * std::sqrt(-std::log(2.0 * p_hat - 1.0)) / s;
    result.estimate = std::min(est, dx_max);
    result.converged = est <= dx_max;
    result.log_likelihood = binomial_ll(result.estimate);
    return result;
  }

  const double tol = 1e-6 * scene_template.sigma_x();
  auto scan = [&](int grid_points) {
    const double step = dx_max / static_cast<double>(grid_points - 1);
    std::vector<double> acc(static_cast<std::size_t>(grid_points));
    for (std::size_t j = 0; j < acc.size(); ++j)
      acc[j] = binomial_ll(static_cast<double>(j) * step);
    return acc;
  };
  return maximize_likelihood(scan, binomial_ll, dx_max, opts.grid_points, tol);
}

StudyReport run_study(const Scene& scene, std::vector<std::size_t> n_list, std::size_t reps,
                      std::uint64_t seed, unsigned threads) {
  if (!scene.aligned()) throw std::invalid_argument("run_study: scene must be aligned");
  if (scene.delta_x() == 0.0)
    throw std::invalid_argument("run_study: true delta_x must be nonzero to normalize ratios");
  if (reps < 2) throw std::invalid_argument("run_study: reps must be >= 2");
  if (n_list.empty()) throw std::invalid_argument("run_study: empty n list");
  for (std::size_t n : n_list)
    if (n < 1) throw std::invalid_argument("run_study: sample sizes must be >= 1");

  const double info = fisher_aligned(scene.wavepacket());
  const double dx_true = std::abs(scene.delta_x());
  const std::size_t total = n_list.size() * reps;
  std::vector<double> estimates(total);

  // Trial t = row * reps + rep owns stream derive_seed(seed, t); estimates
  // land in fixed slots, so any partition over workers yields the same report.
  auto run_trial = [&](std::size_t t) {
    const std::size_t row = t / reps;
    const SampleBatch batch = draw(scene, derive_seed(seed, t), n_list[row]);
    try {
      estimates[t] = mle(batch).estimate;
    } catch (const EstimationError& e) {
      throw EstimationError(fmt::format("run_study: trial {} (n = {}, rep = {}): {}", t,
                                        n_list[row], t % reps, e.what()));
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  if (workers <= 1) {
    for (std::size_t t = 0; t < total; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t t = next.fetch_add(1);
          if (t >= total) return;
          try {
            run_trial(t);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  StudyReport report{{}, scene, seed};
  report.rows.reserve(n_list.size());
  for (std::size_t row = 0; row < n_list.size(); ++row) {
    const auto first = estimates.begin() + static_cast<std::ptrdiff_t>(row * reps);
    const auto last = first + static_cast<std::ptrdiff_t>(reps);
    const double mean = std::accumulate(first, last, 0.0) / static_cast<double>(reps);
    double ss = 0.0;
    for (auto it = first; it != last; ++it) ss += (*it - mean) * (*it - mean);
    const double var = ss / static_cast<double>(reps - 1);
    report.rows.push_back({n_list[row], reps, var * static_cast<double>(n_list[row]) * info,
                           mean / dx_true});
  }
  return report;
}

}  // namespace hombeat
