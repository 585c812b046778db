#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qperc/rng.hpp"

namespace qperc {

class ValidationError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Sum-to-one tolerance on stored vectors.
inline constexpr double kNormTol = 1e-12;
// Constructors rescale inputs whose sum is off by at most this much and
// reject anything worse.
inline constexpr double kRenormTol = 1e-9;

// Schmidt probability vector of a bipartite pure state: nonnegative weights
// sorted in descending order, summing to one. dim()==1 is a product state.
// All entanglement quantities used here are functions of this vector alone;
// local bases are quotiented out.
class SchmidtVector {
 public:
  explicit SchmidtVector(std::vector<double> coeffs);

  // (max(l1,1-l1), min(l1,1-l1)) for l1 in [0,1].
  static SchmidtVector qubit(double lambda1);
  static SchmidtVector bell() { return qubit(0.5); }
  static SchmidtVector product() { return SchmidtVector({1.0}); }

  int dim() const { return static_cast<int>(coeffs_.size()); }
  double lambda(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
  double lambda1() const { return coeffs_.front(); }
  const std::vector<double>& coeffs() const { return coeffs_; }

  bool operator==(const SchmidtVector&) const = default;

 private:
  std::vector<double> coeffs_;
};

struct Outcome {
  double prob;
  SchmidtVector state;
};

// Finite probability distribution over post-measurement states. Probabilities
// sum to one (same renormalization rule as SchmidtVector).
class OutcomeDistribution {
 public:
  explicit OutcomeDistribution(std::vector<Outcome> outcomes);

  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  std::size_t size() const { return outcomes_.size(); }
  const Outcome& operator[](std::size_t i) const { return outcomes_[i]; }

 private:
  std::vector<Outcome> outcomes_;
};

// Singlet conversion probability min(1, 2(1-l1)).
double scp(const SchmidtVector& s);

// 2*sqrt(l1*l2) for qubit states; 0 for product states. Throws
// DimensionError for dim > 2.
double concurrence(const SchmidtVector& s);

// Schmidt vector of the joint state a (x) b: all pairwise products, sorted.
SchmidtVector tensor(const SchmidtVector& a, const SchmidtVector& b);

// Bell-basis measurement at a repeater holding one qubit of each bond.
// Writing a=(l1,l2), b=(m1,m2), the four outcomes are:
//   2x  prob (l1*m1+l2*m2)/2,  state (l1*m1, l2*m2) normalized
//   2x  prob (l1*m2+l2*m1)/2,  state (l1*m2, l2*m1) normalized, sorted
// Outcomes with probability zero are kept, carrying the product state (1,0),
// so the distribution always has exactly four entries.
OutcomeDistribution bell_swap(const SchmidtVector& a, const SchmidtVector& b);

// Expectation of scp over outcomes.
double average_scp(const OutcomeDistribution& dist);

// Expectation of concurrence over outcomes; all states must have dim <= 2.
double average_concurrence(const OutcomeDistribution& dist);

// True iff a can be converted to b deterministically by LOCC, i.e. every
// prefix sum of a is <= the corresponding prefix sum of b (shorter vector
// padded with zeros). Comparisons carry a 1e-12 slack.
bool majorizes(const SchmidtVector& a, const SchmidtVector& b);

// Deterministic LOCC reduction to a two-qubit state with the same singlet
// conversion probability: (l1, 1-l1) when l1 >= 1/2, the Bell state
// otherwise. majorizes(s, result) always holds.
SchmidtVector nielsen_reduce(const SchmidtVector& s);

// sqrt(p*(2-p)) with p = scp(s): the optimal average concurrence obtainable
// from s by a rank-2 measurement on one side. Equals concurrence(s) when s is
// a qubit state.
double rank2_concurrence_bound(const SchmidtVector& s);

// Product of bond concurrences: the optimal average end-to-end concurrence of
// a repeater chain whose bonds are the given qubit states. Empty list gives 1.
double chain_concurrence_exact(const std::vector<SchmidtVector>& bonds);

// concurrence(first) * prod_j sqrt(p_j*(2-p_j)) over the remaining bonds of
// arbitrary dimension: the one-way-communication optimum.
double oneway_chain_concurrence(const SchmidtVector& first,
                                const std::vector<SchmidtVector>& rest);

// Inverse-CDF selection over the outcomes in listed order: the first outcome
// whose cumulative probability exceeds u.
const SchmidtVector& pick_outcome(const OutcomeDistribution& dist, double u);

// pick_outcome at a uniform draw from rng.
const SchmidtVector& sample_outcome(const OutcomeDistribution& dist, Rng& rng);

}  // namespace qperc
