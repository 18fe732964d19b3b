#include "meanfield/fbm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <sstream>

namespace meanfield::fbm {

namespace {

// FFTW plan creation is not thread-safe; execution on distinct buffers is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  fftw_complex* data = nullptr;
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

}  // namespace

HurstParameter::HurstParameter(double h) : h_(h) {
  if (!(h >= 0.5 && h < 1.0))
    throw std::invalid_argument("Hurst parameter must lie in [1/2, 1), got " +
                                std::to_string(h));
}

double fbm_cov(double t, double s, HurstParameter h) {
  const double e = 2.0 * h.value();
  return 0.5 * (std::pow(std::abs(t), e) + std::pow(std::abs(s), e) -
                std::pow(std::abs(t - s), e));
}

double fractional_kernel(double u, HurstParameter h) {
  if (u == 0.0)
    throw std::domain_error("fractional kernel is singular at u = 0");
  const double hv = h.value();
  return hv * (2.0 * hv - 1.0) * std::pow(std::abs(u), 2.0 * hv - 2.0);
}

double fgn_autocov(long k, HurstParameter h, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("fgn_autocov: dt must be positive");
  const double e = 2.0 * h.value();
  const double a = static_cast<double>(std::labs(k));
  return 0.5 * std::pow(dt, e) *
         (std::pow(a + 1.0, e) + std::pow(std::abs(a - 1.0), e) - 2.0 * std::pow(a, e));
}

double increment_cov(double a, double b, double c, double d, HurstParameter h) {
  const double e = 2.0 * h.value();
  return 0.5 * (std::pow(std::abs(b - c), e) + std::pow(std::abs(a - d), e) -
                std::pow(std::abs(b - d), e) - std::pow(std::abs(a - c), e));
}

// ---------------------------------------------------------------------------
// Circulant-embedding synthesis with Durbin-Levinson fallback.
// ---------------------------------------------------------------------------

struct FgnSynthesizer::Impl {
  std::size_t n = 0;
  HurstParameter h{0.75};
  double dt = 1.0;
  bool conditional = false;
  double min_eig = 0.0;

  // circulant route: M = 2n embedding eigenvalues and a reusable plan
  std::size_t m = 0;
  std::vector<double> eig;
  fftw_plan plan = nullptr;
  std::unique_ptr<FftwBuffer> plan_in, plan_out;

  // conditional route: autocovariances gamma(0..n-1)
  std::vector<double> gamma;

  ~Impl() {
    if (plan) {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

FgnSynthesizer::FgnSynthesizer(std::size_t n, HurstParameter h, double dt,
                               FgnMethod method)
    : impl_(std::make_unique<Impl>()) {
  if (n < 1) throw std::invalid_argument("FgnSynthesizer: n must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("FgnSynthesizer: dt must be positive");
  impl_->n = n;
  impl_->h = h;
  impl_->dt = dt;

  if (method == FgnMethod::conditional || n == 1) {
    impl_->conditional = (method == FgnMethod::conditional);
    impl_->gamma.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      impl_->gamma[k] = fgn_autocov(static_cast<long>(k), h, dt);
    if (n == 1 && method != FgnMethod::conditional) impl_->conditional = false;
    if (n == 1) return;  // single draw handled directly in generate()
    if (impl_->conditional) return;
  }

  const std::size_t m = 2 * n;
  impl_->m = m;
  std::vector<double> c(m);
  for (std::size_t k = 0; k <= n; ++k)
    c[k] = fgn_autocov(static_cast<long>(k), h, dt);
  for (std::size_t k = 1; k < n; ++k) c[m - k] = c[k];

  FftwBuffer in(m), out(m);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(m), in.data, out.data,
                                   FFTW_FORWARD, FFTW_ESTIMATE);
    for (std::size_t k = 0; k < m; ++k) {
      in.data[k][0] = c[k];
      in.data[k][1] = 0.0;
    }
    fftw_execute(p);
    fftw_destroy_plan(p);
  }
  impl_->eig.resize(m);
  double min_eig = out.data[0][0];
  for (std::size_t k = 0; k < m; ++k) {
    impl_->eig[k] = out.data[k][0];
    min_eig = std::min(min_eig, impl_->eig[k]);
  }
  impl_->min_eig = min_eig;

  // Nonnegative definiteness of the embedding holds for h in [1/2, 1); the
  // threshold only guards round-off.
  if (min_eig < -1e-12 && method != FgnMethod::circulant) {
    impl_->conditional = true;
    impl_->gamma.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      impl_->gamma[k] = fgn_autocov(static_cast<long>(k), h, dt);
    return;
  }
  for (auto& e : impl_->eig) e = std::max(e, 0.0);

  impl_->plan_in = std::make_unique<FftwBuffer>(m);
  impl_->plan_out = std::make_unique<FftwBuffer>(m);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    impl_->plan = fftw_plan_dft_1d(static_cast<int>(m), impl_->plan_in->data,
                                   impl_->plan_out->data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
}

FgnSynthesizer::~FgnSynthesizer() = default;

double FgnSynthesizer::min_embedding_eigenvalue() const { return impl_->min_eig; }
bool FgnSynthesizer::uses_conditional_fallback() const { return impl_->conditional; }
std::size_t FgnSynthesizer::length() const { return impl_->n; }

FgnSequence FgnSynthesizer::generate(std::uint64_t seed) const {
  const std::size_t n = impl_->n;
  FgnSequence out;
  out.dt = impl_->dt;
  out.h = impl_->h;
  out.seed = seed;
  out.values.resize(n);
  GaussianStream g(stream_seed(seed, 0x66676eULL));

  if (n == 1) {
    out.values[0] = std::sqrt(fgn_autocov(0, impl_->h, impl_->dt)) * g.normal();
    return out;
  }

  if (impl_->conditional) {
    // Durbin-Levinson: draw each value from its conditional law given the past.
    const auto& gamma = impl_->gamma;
    std::vector<double> phi(n, 0.0), phi_prev(n, 0.0);
    double v = gamma[0];
    out.values[0] = std::sqrt(v) * g.normal();
    for (std::size_t t = 1; t < n; ++t) {
      double acc = gamma[t];
      for (std::size_t j = 1; j < t; ++j) acc -= phi_prev[j] * gamma[t - j];
      const double reflect = acc / v;
      phi[t] = reflect;
      for (std::size_t j = 1; j < t; ++j)
        phi[j] = phi_prev[j] - reflect * phi_prev[t - j];
      v *= (1.0 - reflect * reflect);
      v = std::max(v, 0.0);
      double mean = 0.0;
      for (std::size_t j = 1; j <= t; ++j) mean += phi[j] * out.values[t - j];
      out.values[t] = mean + std::sqrt(v) * g.normal();
      std::copy(phi.begin(), phi.begin() + static_cast<long>(t) + 1, phi_prev.begin());
    }
    return out;
  }

  const std::size_t m = impl_->m;
  FftwBuffer in(m), spec(m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  in.data[0][0] = std::sqrt(impl_->eig[0]) * scale * g.normal();
  in.data[0][1] = 0.0;
  in.data[n][0] = std::sqrt(impl_->eig[n]) * scale * g.normal();
  in.data[n][1] = 0.0;
  const double half = std::sqrt(0.5);
  for (std::size_t j = 1; j < n; ++j) {
    const double r = std::sqrt(impl_->eig[j]) * scale;
    const double re = half * g.normal();
    const double im = half * g.normal();
    in.data[j][0] = r * re;
    in.data[j][1] = r * im;
    in.data[m - j][0] = r * re;
    in.data[m - j][1] = -r * im;
  }
  fftw_execute_dft(impl_->plan, in.data, spec.data);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = spec.data[i][0];
  return out;
}

FgnSequence generate_fgn(std::size_t n, HurstParameter h, double dt, std::uint64_t seed) {
  FgnSynthesizer synth(n, h, dt);
  return synth.generate(seed);
}

FbmPath cumulate_to_fbm(const FgnSequence& g) {
  FbmPath path;
  path.h = g.h;
  path.times.resize(g.values.size() + 1);
  path.values.resize(g.values.size() + 1);
  path.times[0] = 0.0;
  path.values[0] = 0.0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    path.times[i + 1] = static_cast<double>(i + 1) * g.dt;
    path.values[i + 1] = path.values[i] + g.values[i];
  }
  return path;
}

HilbertFbm sample_hilbert_fbm(std::span<const double> lambdas, HurstParameter h,
                              std::size_t n_increments, double dt, std::uint64_t seed,
                              double truncation_tail) {
  HilbertFbm out;
  out.truncation_tail = truncation_tail;
  out.eigenvalues.assign(lambdas.begin(), lambdas.end());
  for (std::size_t k = 0; k < out.eigenvalues.size(); ++k) {
    if (out.eigenvalues[k] < 0.0)
      throw std::invalid_argument("sample_hilbert_fbm: negative eigenvalue");
    if (k > 0 && out.eigenvalues[k] > out.eigenvalues[k - 1])
      throw std::invalid_argument("sample_hilbert_fbm: eigenvalues must be nonincreasing");
  }
  FgnSynthesizer synth(n_increments, h, dt);
  out.component_paths.reserve(out.eigenvalues.size());
  for (std::size_t k = 0; k < out.eigenvalues.size(); ++k) {
    auto path = cumulate_to_fbm(synth.generate(stream_seed(seed, k)));
    const double scale = std::sqrt(out.eigenvalues[k]);
    for (auto& v : path.values) v *= scale;
    out.component_paths.push_back(std::move(path));
  }
  return out;
}

StepIntegrand StepIntegrand::scalar(std::vector<double> breakpoints,
                                    std::vector<double> vals) {
  StepIntegrand s;
  s.breakpoints = std::move(breakpoints);
  s.values.reserve(vals.size());
  for (double v : vals) s.values.push_back({v});
  return s;
}

namespace {

void validate_integrand(const StepIntegrand& h) {
  if (h.breakpoints.size() < 2 || h.values.size() + 1 != h.breakpoints.size())
    throw std::invalid_argument("StepIntegrand: need n breakpoints and n-1 values");
  for (std::size_t i = 0; i + 1 < h.breakpoints.size(); ++i)
    if (!(h.breakpoints[i] < h.breakpoints[i + 1]))
      throw std::invalid_argument("StepIntegrand: breakpoints must increase strictly");
  const std::size_t d = h.dim();
  for (const auto& v : h.values) {
    if (v.size() != d)
      throw std::invalid_argument("StepIntegrand: inconsistent value dimensions");
    if (!all_finite(v))
      throw std::invalid_argument("StepIntegrand: non-finite value");
  }
}

bool uniform_breakpoints(const StepIntegrand& h, double* dt) {
  const auto& b = h.breakpoints;
  const double step = (b.back() - b.front()) / static_cast<double>(b.size() - 1);
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    if (std::abs((b[i + 1] - b[i]) - step) > 1e-12 * std::max(1.0, std::abs(step)))
      return false;
  *dt = step;
  return true;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

StepIntegrand sample_integrand(const std::function<double(double)>& f, double t1,
                               double t2, std::size_t cells) {
  if (!(t1 < t2) || cells == 0)
    throw std::invalid_argument("sample_integrand: bad interval or cell count");
  StepIntegrand s;
  s.breakpoints.resize(cells + 1);
  s.values.resize(cells);
  const double dt = (t2 - t1) / static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i)
    s.breakpoints[i] = t1 + static_cast<double>(i) * dt;
  for (std::size_t i = 0; i < cells; ++i)
    s.values[i] = {f(t1 + (static_cast<double>(i) + 0.5) * dt)};
  return s;
}

double fbm_integral_second_moment(const StepIntegrand& h, HurstParameter hurst) {
  validate_integrand(h);
  const std::size_t n = h.cells();
  const auto& b = h.breakpoints;
  double dt = 0.0;
  if (uniform_breakpoints(h, &dt)) {
    // lag table: cell-pair mass depends only on |i-j| on a uniform grid
    const double e = 2.0 * hurst.value();
    std::vector<double> pw(n + 2);
    for (std::size_t k = 0; k < n + 2; ++k)
      pw[k] = std::pow(static_cast<double>(k) * dt, e);
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k)
      w[k] = 0.5 * (pw[k + 1] + (k == 0 ? pw[1] : pw[k - 1]) - 2.0 * pw[k]);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += dot(h.values[i], h.values[i]) * w[0];
      for (std::size_t j = 0; j < i; ++j)
        total += 2.0 * dot(h.values[i], h.values[j]) * w[i - j];
    }
    return total;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      total += dot(h.values[i], h.values[j]) *
               increment_cov(b[i], b[i + 1], b[j], b[j + 1], hurst);
  return total;
}

double wiener_integral_fbm(const StepIntegrand& h, const FbmPath& path) {
  validate_integrand(h);
  if (h.dim() != 1)
    throw std::invalid_argument("wiener_integral_fbm: scalar integrands only");
  const auto& t = path.times;
  auto grid_index = [&](double x) -> std::size_t {
    const auto it = std::lower_bound(t.begin(), t.end(), x - 1e-12);
    if (it == t.end() || std::abs(*it - x) > 1e-9)
      throw std::invalid_argument("wiener_integral_fbm: breakpoint off the path grid");
    return static_cast<std::size_t>(it - t.begin());
  };
  double acc = 0.0;
  for (std::size_t i = 0; i < h.cells(); ++i) {
    const std::size_t lo = grid_index(h.breakpoints[i]);
    const std::size_t hi = grid_index(h.breakpoints[i + 1]);
    acc += h.values[i][0] * (path.values[hi] - path.values[lo]);
  }
  return acc;
}

double integrand_lp_norm(const StepIntegrand& h, double p) {
  validate_integrand(h);
  if (!(p >= 1.0)) throw std::invalid_argument("integrand_lp_norm: p must be >= 1");
  double acc = 0.0;
  for (std::size_t i = 0; i < h.cells(); ++i) {
    const double len = h.breakpoints[i + 1] - h.breakpoints[i];
    acc += std::pow(std::sqrt(dot(h.values[i], h.values[i])), p) * len;
  }
  return std::pow(acc, 1.0 / p);
}

double wiener_bound_ratio(const StepIntegrand& h, HurstParameter hurst, double p) {
  // double integral of ||h(u)|| ||h(v)|| phi(u-v) over |h|_{Lp}^2
  StepIntegrand norms;
  norms.breakpoints = h.breakpoints;
  norms.values.reserve(h.cells());
  for (const auto& v : h.values) {
    double s = 0.0;
    for (double x : v) s += x * x;
    norms.values.push_back({std::sqrt(s)});
  }
  const double lp = integrand_lp_norm(h, p);
  if (lp == 0.0) return 0.0;
  return fbm_integral_second_moment(norms, hurst) / (lp * lp);
}

std::string fbm_path_csv(const FbmPath& path) {
  std::ostringstream os;
  os << "t,value\n";
  char buf[64];
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", path.times[i], path.values[i]);
    os << buf;
  }
  return os.str();
}

}  // namespace meanfield::fbm
