#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lrdsc/lattice.hpp"

namespace lrdsc {

/// Mean over samples of (1/n) ||x - xhat||^2.
double empirical_distortion(const std::vector<Vec>& originals,
                            const std::vector<Vec>& reconstructions);

/// Streaming form of the same quantity.
class DistortionAccumulator {
 public:
  void add(const Vec& x, const Vec& xhat);
  double value() const;
  std::uint64_t count() const { return count_; }

 private:
  double sum_ = 0.0;
  std::uint64_t count_ = 0;
};

/// Plug-in (maximum likelihood) entropy of a histogram, in bits, with the
/// 0 log 0 = 0 convention. Optional Miller-Madow bias correction.
double plug_in_entropy(std::span<const std::uint64_t> counts, bool miller_madow = false);

/// Count table keyed by exact integer coordinate vectors. Tables are
/// mergeable monoids: workers accumulate locally and merge in any order.
class CountTable {
 public:
  void add(const IVec& key, std::uint64_t count = 1);
  void merge(const CountTable& other);
  std::uint64_t total() const { return total_; }
  std::size_t support() const { return counts_.size(); }
  double entropy_bits(bool miller_madow = false) const;
  const std::map<std::vector<std::int64_t>, std::uint64_t>& counts() const { return counts_; }

 private:
  std::map<std::vector<std::int64_t>, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Joint count table over pairs of integer coordinate keys.
class JointCountTable {
 public:
  void add(const IVec& a, const IVec& b, std::uint64_t count = 1);
  void merge(const JointCountTable& other);
  std::uint64_t total() const { return total_; }
  double joint_entropy_bits(bool miller_madow = false) const;
  double first_marginal_entropy_bits(bool miller_madow = false) const;
  double second_marginal_entropy_bits(bool miller_madow = false) const;

 private:
  using Key = std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>;
  std::map<Key, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// H(B|A) = H(A,B) - H(A) from one joint table.
double conditional_entropy(const JointCountTable& joint, bool miller_madow = false);

/// Sum rate in bits per sample charged to the two encoders:
///   (1/n) sum_i [ H_side_i + Hb(P_i) + n P_i ] + (1/n) H_joint_u,
/// where H_side_i and H_joint_u are bits per block, Hb is the binary
/// entropy of the boundary-flag rate, and the n P_i term pays for the
/// fixed-length tau labels.
double rate_account(double h_side1_bits, double h_side2_bits, double p1, double p2,
                    double h_joint_u_bits, int n);

/// Empirical measurements of one experiment point.
struct RdReport {
  double d_side[2] = {0, 0};
  double d_central[2] = {0, 0};
  double h_side[2] = {0, 0};  // bits per block
  double p_boundary[2] = {0, 0};
  double h_joint_u = 0;
  double h_cond_u = 0;
  double h_u[2] = {0, 0};
  double sum_rate = 0;  // bits per sample
  std::uint64_t sample_count = 0;
};

}  // namespace lrdsc
