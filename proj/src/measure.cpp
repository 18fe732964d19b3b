#include "meanfield/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace meanfield::measure {

EmpiricalMeasure::EmpiricalMeasure(std::size_t dim, std::vector<double> data)
    : dim_(dim), data_(std::move(data)) {
  if (dim_ == 0) throw std::invalid_argument("EmpiricalMeasure: dim must be positive");
  if (data_.empty() || data_.size() % dim_ != 0)
    throw std::invalid_argument("EmpiricalMeasure: need n >= 1 samples of dimension d");
}

EmpiricalMeasure EmpiricalMeasure::from_scalars(std::vector<double> samples) {
  return EmpiricalMeasure(1, std::move(samples));
}

double EmpiricalMeasure::second_moment() const {
  double acc = 0.0;
  for (double x : data_) acc += x * x;
  return acc / static_cast<double>(size());
}

std::vector<double> EmpiricalMeasure::mean() const {
  std::vector<double> m(dim_, 0.0);
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    auto s = sample(i);
    for (std::size_t j = 0; j < dim_; ++j) m[j] += s[j];
  }
  for (auto& v : m) v /= static_cast<double>(n);
  return m;
}

std::string EmpiricalMeasure::to_csv() const {
  std::ostringstream os;
  char buf[64];
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data_[i * dim_ + j]);
      os << buf << (j + 1 < dim_ ? "," : "\n");
    }
  }
  return os.str();
}

EmpiricalMeasure EmpiricalMeasure::from_csv(const std::string& csv) {
  std::vector<double> data;
  std::size_t dim = 0;
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::size_t cols = 0;
    while (std::getline(ls, cell, ',')) {
      data.push_back(std::stod(cell));
      ++cols;
    }
    if (dim == 0)
      dim = cols;
    else if (cols != dim)
      throw std::invalid_argument("EmpiricalMeasure::from_csv: ragged rows");
  }
  return EmpiricalMeasure(dim, std::move(data));
}

double wasserstein2_1d(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  if (a.dim() != 1 || b.dim() != 1)
    throw std::invalid_argument("wasserstein2_1d: 1-D measures only");
  std::vector<double> xs = a.data(), ys = b.data();
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const std::size_t na = xs.size(), nb = ys.size();
  if (na == nb) {
    double acc = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
      const double d = xs[i] - ys[i];
      acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(na));
  }
  // Sweep the merged quantile grid; each interval pairs one value of each
  // quantile function, exactly as LCM replication would.
  double acc = 0.0, u = 0.0;
  std::size_t i = 0, j = 0;
  while (i < na && j < nb) {
    const double ua = static_cast<double>(i + 1) / static_cast<double>(na);
    const double ub = static_cast<double>(j + 1) / static_cast<double>(nb);
    const double next = std::min(ua, ub);
    const double d = xs[i] - ys[j];
    acc += d * d * (next - u);
    u = next;
    if (ua <= ub) ++i;
    if (ub <= ua) ++j;
  }
  return std::sqrt(acc);
}

namespace {

// Hungarian algorithm (potentials form), O(n^3), exact optimal assignment.
double assignment_min_cost(const std::vector<double>& cost, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j)
    if (match[j] != 0) total += cost[(match[j] - 1) * n + (j - 1)];
  return total;
}

}  // namespace

double wasserstein2_exact(const EmpiricalMeasure& a, const EmpiricalMeasure& b,
                          std::size_t cap) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("wasserstein2_exact: dimension mismatch");
  if (a.size() != b.size())
    throw std::invalid_argument("wasserstein2_exact: equal sample counts required");
  const std::size_t n = a.size();
  if (n > cap)
    throw std::invalid_argument(
        "wasserstein2_exact: instance exceeds the small-instance cap (" +
        std::to_string(cap) + "); use wasserstein2_coupling_bound or 1-D projections");
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cost[i * n + j] = squared_distance(a.sample(i), b.sample(j));
  return std::sqrt(assignment_min_cost(cost, n) / static_cast<double>(n));
}

double wasserstein2_coupling_bound(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("wasserstein2_coupling_bound: dimension mismatch");
  if (a.size() != b.size())
    throw std::invalid_argument("wasserstein2_coupling_bound: count mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += squared_distance(a.sample(i), b.sample(i));
  return std::sqrt(acc / static_cast<double>(a.size()));
}

BlDictionary BlDictionary::tents(double c_min, double c_max, std::size_t centers,
                                 std::span<const double> widths) {
  if (centers < 2 || !(c_min < c_max))
    throw std::invalid_argument("BlDictionary::tents: bad center grid");
  BlDictionary dict;
  for (double w : widths) {
    if (!(w >= 1.0))
      throw std::invalid_argument("BlDictionary::tents: width < 1 breaks the Lipschitz bound");
    for (std::size_t i = 0; i < centers; ++i) {
      const double c = c_min + (c_max - c_min) * static_cast<double>(i) /
                                   static_cast<double>(centers - 1);
      for (double sign : {1.0, -1.0}) {
        BlFunction f;
        f.label = (sign > 0 ? "tent(c=" : "-tent(c=") + std::to_string(c) +
                  ",w=" + std::to_string(w) + ")";
        f.g = [c, w, sign](double x) {
          return sign * std::clamp(1.0 - std::abs(x - c) / w, -1.0, 1.0);
        };
        dict.add(std::move(f));
      }
    }
  }
  return dict;
}

BlDictionary BlDictionary::tents_for_range(double lo, double hi) {
  const double pad = 0.05 * std::max(1.0, hi - lo);
  const double widths[] = {1.0, 2.0, 4.0};
  return tents(lo - pad, hi + pad, 129, widths);
}

BlDictionary BlDictionary::for_samples(const EmpiricalMeasure& a,
                                       const EmpiricalMeasure& b,
                                       const DblOptions& opts) {
  std::vector<double> pooled = a.data();
  pooled.insert(pooled.end(), b.data().begin(), b.data().end());
  std::sort(pooled.begin(), pooled.end());
  double lo = pooled.front(), hi = pooled.back();
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * std::max(1.0, hi - lo);
  auto dict = tents(lo - pad, hi + pad, opts.centers, opts.widths);
  // tents peaked at sample quantiles make point-mass cases exact
  const std::size_t quantiles = std::min(opts.quantile_centers, pooled.size());
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < quantiles; ++i) {
    const std::size_t idx = (pooled.size() - 1) * i / std::max<std::size_t>(1, quantiles - 1);
    const double c = pooled[idx];
    if (c == prev) continue;
    prev = c;
    for (double w : {1.0, 2.0}) {
      for (double sign : {1.0, -1.0}) {
        BlFunction f;
        f.label = "tent(sample c=" + std::to_string(c) + ",w=" + std::to_string(w) + ")";
        f.g = [c, w, sign](double x) {
          return sign * std::clamp(1.0 - std::abs(x - c) / w, -1.0, 1.0);
        };
        dict.add(std::move(f));
      }
    }
  }
  return dict;
}

void BlDictionary::add(BlFunction f) { fs_.push_back(std::move(f)); }

void BlDictionary::validate(double lo, double hi, std::size_t grid) const {
  const double step = (hi - lo) / static_cast<double>(grid);
  for (const auto& f : fs_) {
    double prev = f.g(lo);
    for (std::size_t i = 0; i <= grid; ++i) {
      const double x = lo + static_cast<double>(i) * step;
      const double y = f.g(x);
      if (!std::isfinite(y) || std::abs(y) > 1.0 + 1e-12)
        throw std::invalid_argument("BlDictionary: |g| > 1 for " + f.label);
      if (i > 0 && std::abs(y - prev) > step * (1.0 + 1e-9))
        throw std::invalid_argument("BlDictionary: Lipschitz bound violated for " + f.label);
      prev = y;
    }
  }
}

namespace {

double integrate(const EmpiricalMeasure& m, const std::function<double(double)>& g) {
  double acc = 0.0;
  for (double x : m.data()) acc += g(x);
  return acc / static_cast<double>(m.size());
}

}  // namespace

double dbl_lower(const EmpiricalMeasure& a, const EmpiricalMeasure& b,
                 const BlDictionary& dict) {
  if (a.dim() != 1 || b.dim() != 1)
    throw std::invalid_argument("dbl_lower: 1-D measures only");
  double lo = a.data()[0], hi = a.data()[0];
  for (double x : a.data()) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  for (double x : b.data()) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  dict.validate(lo, hi, 256);
  double best = 0.0;
  for (const auto& f : dict.functions())
    best = std::max(best, std::abs(integrate(a, f.g) - integrate(b, f.g)));
  return best;
}

double dbl_lower(const EmpiricalMeasure& a, const EmpiricalMeasure& b,
                 const DblOptions& opts) {
  return dbl_lower(a, b, BlDictionary::for_samples(a, b, opts));
}

}  // namespace meanfield::measure
