#include "dimrate/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dimrate/detail/parallel.hpp"
#include "dimrate/errors.hpp"

namespace dimrate {

namespace {

constexpr std::uint64_t kDenseKeyLimit = std::uint64_t{1} << 24;

[[noreturn]] void too_large() { throw NumericalError("alphabet/context too large"); }

// Labels every length-L window x_{t-L+1..t} with a dense id, growing L one
// symbol at a time: id_{L+1}(t) = relabel(id_L(t-1), x_t).
class WindowLabeler {
 public:
  WindowLabeler(std::span<const std::int64_t> codes, std::size_t max_labels) : max_labels_(max_labels) {
    if (codes.size() >= std::numeric_limits<std::uint32_t>::max()) too_large();
    symbols_.resize(codes.size());
    const auto [lo_it, hi_it] = std::minmax_element(codes.begin(), codes.end());
    const std::uint64_t range = static_cast<std::uint64_t>(*hi_it) - static_cast<std::uint64_t>(*lo_it) + 1;
    if (range != 0 && range <= std::max<std::uint64_t>(kDenseKeyLimit, codes.size())) {
      std::vector<std::uint32_t> table(range, kUnset);
      for (std::size_t t = 0; t < codes.size(); ++t) {
        auto& slot = table[static_cast<std::uint64_t>(codes[t]) - static_cast<std::uint64_t>(*lo_it)];
        if (slot == kUnset) slot = static_cast<std::uint32_t>(alphabet_++);
        symbols_[t] = slot;
      }
    } else {
      std::vector<std::int64_t> sorted(codes.begin(), codes.end());
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      alphabet_ = sorted.size();
      for (std::size_t t = 0; t < codes.size(); ++t) {
        symbols_[t] = static_cast<std::uint32_t>(
            std::lower_bound(sorted.begin(), sorted.end(), codes[t]) - sorted.begin());
      }
    }
    if (alphabet_ > max_labels_) too_large();
    ids_.assign(codes.size(), 0);
  }

  std::size_t alphabet() const { return alphabet_; }
  std::size_t length() const { return length_; }
  std::size_t distinct() const { return distinct_; }
  // ids()[t] is meaningful for t >= length() - 1.
  const std::vector<std::uint32_t>& ids() const { return ids_; }

  void extend() {
    const std::size_t n = symbols_.size();
    if (length_ == 0) {
      ids_ = symbols_;
      distinct_ = alphabet_;
      length_ = 1;
      return;
    }
    const std::uint64_t a = alphabet_;
    const std::uint64_t key_space = static_cast<std::uint64_t>(distinct_) * a;
    std::size_t next = 0;
    if (key_space <= kDenseKeyLimit) {
      std::vector<std::uint32_t> table(key_space, kUnset);
      // Backward so ids_[t - 1] still holds the shorter window's label.
      for (std::size_t t = n; t-- > length_;) {
        auto& slot = table[ids_[t - 1] * a + symbols_[t]];
        if (slot == kUnset) slot = static_cast<std::uint32_t>(next++);
        ids_[t] = slot;
      }
    } else {
      std::vector<std::uint64_t> keys(n - length_);
      for (std::size_t t = length_; t < n; ++t) keys[t - length_] = ids_[t - 1] * a + symbols_[t];
      std::vector<std::uint64_t> sorted = keys;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      next = sorted.size();
      for (std::size_t t = length_; t < n; ++t) {
        ids_[t] = static_cast<std::uint32_t>(
            std::lower_bound(sorted.begin(), sorted.end(), keys[t - length_]) - sorted.begin());
      }
    }
    if (next > max_labels_) too_large();
    distinct_ = next;
    ++length_;
  }

 private:
  static constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  std::size_t max_labels_;
  std::vector<std::uint32_t> symbols_;
  std::vector<std::uint32_t> ids_;
  std::size_t alphabet_ = 0;
  std::size_t distinct_ = 1;
  std::size_t length_ = 0;
};

// x log x - (x-1) log(x-1), the change in x log x when one count is removed.
double count_step(double x) {
  if (x <= 1.0) return 0.0;
  return std::log(x) + (x - 1.0) * std::log1p(1.0 / (x - 1.0));
}

// Conditional plug-in entropy from per-position joint and context labels.
// joint[t] determines context[t]; positions [first, n) are counted.
EntropyEstimate conditional_from_labels(const std::vector<std::uint32_t>& joint, std::size_t joint_count,
                                        const std::vector<std::uint32_t>* context, std::size_t context_count,
                                        std::size_t first, const EntropyOptions& options) {
  const std::size_t n = joint.size();
  const std::size_t total = n - first;
  std::vector<std::uint64_t> joint_n(joint_count, 0);
  std::vector<std::uint32_t> joint_ctx(joint_count, 0);
  std::vector<std::uint64_t> ctx_n(context != nullptr ? context_count : 1, 0);
  for (std::size_t t = first; t < n; ++t) {
    const std::uint32_t c = context != nullptr ? (*context)[t - 1] : 0;
    ++joint_n[joint[t]];
    joint_ctx[joint[t]] = c;
    ++ctx_n[c];
  }

  const double tn = static_cast<double>(total);
  double sum = 0.0;
  std::size_t used_joint = 0;
  for (std::size_t k = 0; k < joint_count; ++k) {
    if (joint_n[k] == 0) continue;
    ++used_joint;
    const double a = static_cast<double>(joint_n[k]);
    const double b = static_cast<double>(ctx_n[joint_ctx[k]]);
    if (a != b) sum += a * (std::log(b) - std::log(a));
  }
  const std::size_t used_ctx =
      static_cast<std::size_t>(std::count_if(ctx_n.begin(), ctx_n.end(), [](auto v) { return v != 0; }));

  EntropyEstimate est;
  est.samples = total;
  est.contexts = used_ctx;
  est.value = std::max(0.0, sum / tn);
  if (options.miller_madow) {
    est.value += static_cast<double>(used_joint - used_ctx) / (2.0 * tn);
  }

  // Leave-one-out: dropping one observation of cell (c, s) changes the
  // numerator by count_step(a) - count_step(b); the jackknife variance is
  // then sum a (u - mean u)^2 / (T (T - 1)).
  if (total > 1) {
    double mean_u = 0.0;
    for (std::size_t k = 0; k < joint_count; ++k) {
      if (joint_n[k] == 0) continue;
      const double a = static_cast<double>(joint_n[k]);
      const double b = static_cast<double>(ctx_n[joint_ctx[k]]);
      mean_u += a * (count_step(a) - count_step(b));
    }
    mean_u /= tn;
    double ss = 0.0;
    for (std::size_t k = 0; k < joint_count; ++k) {
      if (joint_n[k] == 0) continue;
      const double a = static_cast<double>(joint_n[k]);
      const double b = static_cast<double>(ctx_n[joint_ctx[k]]);
      const double d = count_step(a) - count_step(b) - mean_u;
      ss += a * d * d;
    }
    est.std_error = std::sqrt(ss / (tn * (tn - 1.0)));
  }
  return est;
}

}  // namespace

EntropyEstimate plug_in_entropy(std::span<const std::int64_t> codes, const EntropyOptions& options) {
  return empirical_conditional_entropy(codes, 0, options);
}

EntropyEstimate empirical_conditional_entropy(std::span<const std::int64_t> codes, std::size_t order,
                                              const EntropyOptions& options) {
  if (codes.size() <= order) {
    throw std::invalid_argument("conditional entropy: sequence must be longer than the context order");
  }
  WindowLabeler labels(codes, options.max_contexts);
  std::vector<std::uint32_t> context;
  std::size_t context_count = 1;
  for (std::size_t l = 0; l < order; ++l) labels.extend();
  if (order > 0) {
    context = labels.ids();
    context_count = labels.distinct();
  }
  labels.extend();
  EntropyEstimate est = conditional_from_labels(labels.ids(), labels.distinct(), order > 0 ? &context : nullptr,
                                                context_count, order, options);
  est.order = order;
  est.alphabet_size = labels.alphabet();
  return est;
}

EntropyEstimate block_entropy(std::span<const std::int64_t> codes, std::size_t block,
                              const EntropyOptions& options) {
  if (block < 1) throw std::invalid_argument("block entropy: block length must be at least 1");
  if (codes.size() < block) throw std::invalid_argument("block entropy: sequence shorter than the block");
  WindowLabeler labels(codes, options.max_contexts);
  for (std::size_t l = 0; l < block; ++l) labels.extend();
  EntropyEstimate est =
      conditional_from_labels(labels.ids(), labels.distinct(), nullptr, 1, block - 1, options);
  est.order = 0;
  est.alphabet_size = labels.alphabet();
  return est;
}

double markov_entropy_rate_exact(const std::vector<std::vector<double>>& transition) {
  const std::size_t k = transition.size();
  if (k == 0) throw std::invalid_argument("transition matrix is empty");
  for (const auto& row : transition) {
    if (row.size() != k) throw std::invalid_argument("transition matrix must be square");
    double s = 0.0;
    for (double p : row) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("transition probabilities must be >= 0");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("transition matrix rows must sum to 1");
  }

  // Reachability closure; a state is in a closed class when everything it
  // reaches reaches it back.
  std::vector<std::vector<char>> reach(k, std::vector<char>(k, 0));
  for (std::size_t s = 0; s < k; ++s) {
    std::vector<std::size_t> stack{s};
    reach[s][s] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < k; ++v) {
        if (transition[u][v] > 0.0 && !reach[s][v]) {
          reach[s][v] = 1;
          stack.push_back(v);
        }
      }
    }
  }
  std::vector<int> closed_class(k, -1);
  int classes = 0;
  for (std::size_t s = 0; s < k; ++s) {
    bool closed = true;
    for (std::size_t v = 0; v < k && closed; ++v) closed = !reach[s][v] || reach[v][s];
    if (!closed || closed_class[s] >= 0) continue;
    for (std::size_t v = 0; v < k; ++v) {
      if (reach[s][v]) closed_class[v] = classes;
    }
    ++classes;
  }
  if (classes != 1) {
    throw std::invalid_argument("Markov chain has no unique stationary distribution");
  }

  // Power iteration on the lazy chain (I + P) / 2, which shares the
  // stationary law and is aperiodic.
  std::vector<double> pi(k, 1.0 / static_cast<double>(k));
  std::vector<double> next(k);
  bool converged = false;
  for (int iter = 0; iter < 10'000'000 && !converged; ++iter) {
    for (std::size_t v = 0; v < k; ++v) next[v] = 0.5 * pi[v];
    for (std::size_t u = 0; u < k; ++u) {
      for (std::size_t v = 0; v < k; ++v) next[v] += 0.5 * pi[u] * transition[u][v];
    }
    double change = 0.0;
    for (std::size_t v = 0; v < k; ++v) change += std::abs(next[v] - pi[v]);
    pi.swap(next);
    converged = change < 1e-12;
  }
  if (!converged) throw NumericalError("stationary distribution did not converge");

  double rate = 0.0;
  for (std::size_t u = 0; u < k; ++u) {
    double row = 0.0;
    for (double p : transition[u]) {
      if (p > 0.0) row -= p * std::log(p);
    }
    rate += pi[u] * row;
  }
  return rate;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: abscissae must not all coincide");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

IdRateEstimate fit_id_rate(std::vector<IdRateRow> rows, std::size_t order) {
  if (rows.size() < 2) throw std::invalid_argument("id rate: need at least two resolutions");
  const std::size_t use = std::max<std::size_t>(2, (rows.size() + 1) / 2);
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = rows.size() - use; i < rows.size(); ++i) {
    x.push_back(rows[i].log_m);
    y.push_back(rows[i].entropy);
  }
  const LineFit fit = fit_line(x, y);
  IdRateEstimate est;
  est.d_hat = fit.slope;
  est.intercept = fit.intercept;
  est.residual_rms = fit.residual_rms;
  est.out_of_range = fit.slope < 0.0 || fit.slope > 1.0;
  est.order = order;
  est.fit_points = use;
  est.rows = std::move(rows);
  return est;
}

IdRateEstimate id_rate_estimate(std::span<const SamplePath> paths, std::span<const std::int64_t> m_grid,
                                std::size_t order, const EntropyOptions& options) {
  if (paths.empty()) throw std::invalid_argument("id rate: no sample paths");
  if (m_grid.empty()) throw std::invalid_argument("id rate: empty resolution grid");
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    if (m_grid[i] < 2) throw std::invalid_argument("id rate: resolutions must be >= 2");
    if (i > 0 && m_grid[i] <= m_grid[i - 1]) {
      throw std::invalid_argument("id rate: resolution grid must be strictly increasing");
    }
  }

  const std::size_t np = paths.size();
  std::vector<EntropyEstimate> cell(np * m_grid.size());
  detail::parallel_for(cell.size(), [&](std::size_t idx) {
    const std::size_t mi = idx / np;
    const std::size_t p = idx % np;
    const auto codes = quantize_values(paths[p].values, m_grid[mi]);
    cell[idx] = empirical_conditional_entropy(codes, order, options);
  });

  std::vector<IdRateRow> rows;
  std::size_t samples = 0;
  for (std::size_t mi = 0; mi < m_grid.size(); ++mi) {
    std::size_t total = 0;
    for (std::size_t p = 0; p < np; ++p) total += cell[mi * np + p].samples;
    IdRateRow row;
    row.m = m_grid[mi];
    row.log_m = std::log(static_cast<double>(row.m));
    double var = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
      const auto& e = cell[mi * np + p];
      const double w = static_cast<double>(e.samples) / static_cast<double>(total);
      row.entropy += w * e.value;
      var += w * w * e.std_error * e.std_error;
    }
    row.std_error = std::sqrt(var);
    row.ratio = row.entropy / row.log_m;
    rows.push_back(row);
    samples = total;
  }
  IdRateEstimate est = fit_id_rate(std::move(rows), order);
  est.samples = samples;
  est.paths = np;
  return est;
}

double quantized_entropy_iid(const ScalarDensity& density, std::int64_t m) {
  const auto bins = density.bin_probabilities(m);
  double h = 0.0;
  for (double p : bins.probabilities) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return std::max(0.0, h);
}

}  // namespace dimrate
