#include "qperc/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qperc {

namespace {

void check_sum_and_rescale(std::vector<double>& v, const char* what) {
  double sum = std::accumulate(v.begin(), v.end(), 0.0);
  if (std::abs(sum - 1.0) > kRenormTol) {
    throw ValidationError(std::string(what) + " must sum to 1, got " +
                          std::to_string(sum));
  }
  if (std::abs(sum - 1.0) > kNormTol) {
    for (double& x : v) x /= sum;
  }
}

}  // namespace

SchmidtVector::SchmidtVector(std::vector<double> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw ValidationError("Schmidt vector must have at least one coefficient");
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!(coeffs_[i] >= 0.0)) {
      throw ValidationError("Schmidt coefficients must be nonnegative");
    }
    if (i > 0 && coeffs_[i] > coeffs_[i - 1]) {
      throw ValidationError("Schmidt coefficients must be sorted descending");
    }
  }
  check_sum_and_rescale(coeffs_, "Schmidt coefficients");
}

SchmidtVector SchmidtVector::qubit(double lambda1) {
  if (!(lambda1 >= 0.0 && lambda1 <= 1.0)) {
    throw ValidationError("lambda1 must lie in [0,1]");
  }
  double hi = std::max(lambda1, 1.0 - lambda1);
  return SchmidtVector({hi, 1.0 - hi});
}

OutcomeDistribution::OutcomeDistribution(std::vector<Outcome> outcomes)
    : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) {
    throw ValidationError("outcome distribution must be nonempty");
  }
  std::vector<double> probs;
  probs.reserve(outcomes_.size());
  for (const Outcome& o : outcomes_) {
    if (!(o.prob >= 0.0)) {
      throw ValidationError("outcome probabilities must be nonnegative");
    }
    probs.push_back(o.prob);
  }
  check_sum_and_rescale(probs, "outcome probabilities");
  for (std::size_t i = 0; i < probs.size(); ++i) outcomes_[i].prob = probs[i];
}

double scp(const SchmidtVector& s) {
  return std::min(1.0, 2.0 * (1.0 - s.lambda1()));
}

double concurrence(const SchmidtVector& s) {
  if (s.dim() > 2) {
    throw DimensionError("concurrence is defined for dim <= 2");
  }
  if (s.dim() == 1) return 0.0;
  return 2.0 * std::sqrt(s.lambda(0) * s.lambda(1));
}

SchmidtVector tensor(const SchmidtVector& a, const SchmidtVector& b) {
  std::vector<double> prod;
  prod.reserve(static_cast<std::size_t>(a.dim()) * b.dim());
  for (double x : a.coeffs())
    for (double y : b.coeffs()) prod.push_back(x * y);
  std::stable_sort(prod.begin(), prod.end(), std::greater<double>());
  return SchmidtVector(std::move(prod));
}

OutcomeDistribution bell_swap(const SchmidtVector& a, const SchmidtVector& b) {
  if (a.dim() != 2 || b.dim() != 2) {
    throw DimensionError("bell_swap requires two qubit states");
  }
  const double l1 = a.lambda(0), l2 = a.lambda(1);
  const double m1 = b.lambda(0), m2 = b.lambda(1);

  // Outcome weights for T_r = phi_a M_r phi_b with M_r the four Bell
  // projectors written in the bonds' Schmidt bases.
  auto outcome = [](double w1, double w2) -> Outcome {
    const double norm = w1 + w2;
    if (norm <= 0.0) {
      // Zero-probability branch (both bonds product states): keep the slot.
      return {0.0, SchmidtVector({1.0, 0.0})};
    }
    double hi = std::max(w1, w2) / norm;
    double lo = std::min(w1, w2) / norm;
    return {norm / 2.0, SchmidtVector({hi, lo})};
  };

  Outcome same = outcome(l1 * m1, l2 * m2);
  Outcome cross = outcome(l1 * m2, l2 * m1);
  return OutcomeDistribution({same, same, cross, cross});
}

double average_scp(const OutcomeDistribution& dist) {
  double acc = 0.0;
  for (const Outcome& o : dist.outcomes()) acc += o.prob * scp(o.state);
  return acc;
}

double average_concurrence(const OutcomeDistribution& dist) {
  double acc = 0.0;
  for (const Outcome& o : dist.outcomes()) acc += o.prob * concurrence(o.state);
  return acc;
}

bool majorizes(const SchmidtVector& a, const SchmidtVector& b) {
  const int d = std::max(a.dim(), b.dim());
  double pa = 0.0, pb = 0.0;
  for (int k = 0; k < d; ++k) {
    pa += k < a.dim() ? a.lambda(k) : 0.0;
    pb += k < b.dim() ? b.lambda(k) : 0.0;
    if (pa > pb + kNormTol) return false;
  }
  return true;
}

SchmidtVector nielsen_reduce(const SchmidtVector& s) {
  // For l1 < 1/2 the state converts deterministically to a Bell pair, which
  // preserves scp = 1; (l1, 1-l1) would not.
  const double l1 = std::max(s.lambda1(), 0.5);
  return SchmidtVector({l1, 1.0 - l1});
}

double rank2_concurrence_bound(const SchmidtVector& s) {
  const double p = scp(s);
  return std::sqrt(p * (2.0 - p));
}

double chain_concurrence_exact(const std::vector<SchmidtVector>& bonds) {
  double prod = 1.0;
  for (const SchmidtVector& bond : bonds) prod *= concurrence(bond);
  return prod;
}

double oneway_chain_concurrence(const SchmidtVector& first,
                                const std::vector<SchmidtVector>& rest) {
  double prod = concurrence(first);
  for (const SchmidtVector& bond : rest) prod *= rank2_concurrence_bound(bond);
  return prod;
}

const SchmidtVector& pick_outcome(const OutcomeDistribution& dist, double u) {
  double cdf = 0.0;
  for (const Outcome& o : dist.outcomes()) {
    cdf += o.prob;
    if (u < cdf) return o.state;
  }
  return dist.outcomes().back().state;
}

const SchmidtVector& sample_outcome(const OutcomeDistribution& dist, Rng& rng) {
  return pick_outcome(dist, rng.uniform());
}

}  // namespace qperc
