#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "meanfield/common.hpp"

namespace meanfield::measure {

/// Equal-weight sample set in R^d, the working proxy for a law after spectral
/// truncation. Row-major n x d storage.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(std::size_t dim, std::vector<double> data);
  static EmpiricalMeasure from_scalars(std::vector<double> samples);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return data_.size() / dim_; }
  std::span<const double> sample(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  const std::vector<double>& data() const { return data_; }

  double second_moment() const;       // mean of ||x||^2
  std::vector<double> mean() const;

  std::string to_csv() const;         // one sample per row, d columns
  static EmpiricalMeasure from_csv(const std::string& csv);

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

struct MeasurePath {
  std::vector<double> times;
  std::vector<EmpiricalMeasure> measures;  // one per grid point, constant dim
};

/// Exact 2-Wasserstein distance between 1-D empirical measures via the sorted
/// (monotone) coupling. Unequal sample counts are handled by the common
/// refinement of the two quantile grids, which equals replication to the
/// least common multiple without materializing it.
double wasserstein2_1d(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// Exact d-dimensional W2 by optimal assignment (Hungarian algorithm).
/// Requires equal counts and n <= cap; cubic cost.
double wasserstein2_exact(const EmpiricalMeasure& a, const EmpiricalMeasure& b,
                          std::size_t cap = 64);

/// Upper bound W2 <= (E||X - Y||^2)^{1/2} on samples paired by shared
/// randomness index.
double wasserstein2_coupling_bound(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// Test function with |g|_inf <= 1 and Lip(g) <= 1.
struct BlFunction {
  std::function<double(double)> g;
  std::string label;
};

/// Dictionary richness for the default d_BL estimate; the estimate is a lower
/// bound that improves as these grow.
struct DblOptions {
  std::size_t centers = 129;
  std::vector<double> widths = {1.0, 2.0, 4.0};
  std::size_t quantile_centers = 65;
};

class BlDictionary {
 public:
  /// Clipped tents clamp(1 - |x-c|/w, -1, 1) and their negatives over a
  /// center grid and width set (widths >= 1 keep the Lipschitz bound).
  static BlDictionary tents(double c_min, double c_max, std::size_t centers,
                            std::span<const double> widths);
  static BlDictionary tents_for_range(double lo, double hi);  // default density
  /// Range dictionary plus tents peaked at sample quantiles, which resolves
  /// point masses exactly.
  static BlDictionary for_samples(const EmpiricalMeasure& a, const EmpiricalMeasure& b,
                                  const DblOptions& opts = {});

  void add(BlFunction f);
  const std::vector<BlFunction>& functions() const { return fs_; }

  /// Checks the BL-norm bounds on a grid over [lo, hi]; throws on violation.
  void validate(double lo, double hi, std::size_t grid = 2048) const;

 private:
  std::vector<BlFunction> fs_;
};

/// Lower estimate of d_BL: max over the dictionary of |int g d(a-b)|.
/// Always <= 2; converges to d_BL from below as the dictionary refines.
double dbl_lower(const EmpiricalMeasure& a, const EmpiricalMeasure& b,
                 const BlDictionary& dict);
double dbl_lower(const EmpiricalMeasure& a, const EmpiricalMeasure& b,
                 const DblOptions& opts = {});

}  // namespace meanfield::measure
