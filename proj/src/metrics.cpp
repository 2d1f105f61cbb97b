#include "lrdsc/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace lrdsc {

double empirical_distortion(const std::vector<Vec>& originals,
                            const std::vector<Vec>& reconstructions) {
  if (originals.empty()) throw std::invalid_argument("empty sample stream");
  if (originals.size() != reconstructions.size()) {
    throw std::invalid_argument("stream length mismatch");
  }
  DistortionAccumulator acc;
  for (std::size_t i = 0; i < originals.size(); ++i) acc.add(originals[i], reconstructions[i]);
  return acc.value();
}

void DistortionAccumulator::add(const Vec& x, const Vec& xhat) {
  if (x.size() != xhat.size()) throw std::invalid_argument("dimension mismatch");
  sum_ += (x - xhat).squaredNorm() / static_cast<double>(x.size());
  ++count_;
}

double DistortionAccumulator::value() const {
  if (count_ == 0) throw std::invalid_argument("empty sample stream");
  return sum_ / static_cast<double>(count_);
}

double plug_in_entropy(std::span<const std::uint64_t> counts, bool miller_madow) {
  std::uint64_t total = 0;
  std::size_t support = 0;
  for (auto c : counts) {
    total += c;
    if (c > 0) ++support;
  }
  if (total == 0) throw std::invalid_argument("all-zero counts");
  // H = log2(N) - (1/N) sum c log2 c, numerically stable for small p.
  double s = 0.0;
  for (auto c : counts) {
    if (c > 0) s += static_cast<double>(c) * std::log2(static_cast<double>(c));
  }
  const double n = static_cast<double>(total);
  double h = std::log2(n) - s / n;
  if (miller_madow && support > 0) {
    h += static_cast<double>(support - 1) / (2.0 * n * std::log(2.0));
  }
  return h;
}

void CountTable::add(const IVec& key, std::uint64_t count) {
  counts_[std::vector<std::int64_t>(key.data(), key.data() + key.size())] += count;
  total_ += count;
}

void CountTable::merge(const CountTable& other) {
  for (const auto& [k, c] : other.counts_) counts_[k] += c;
  total_ += other.total_;
}

double CountTable::entropy_bits(bool miller_madow) const {
  std::vector<std::uint64_t> c;
  c.reserve(counts_.size());
  for (const auto& [k, v] : counts_) c.push_back(v);
  return plug_in_entropy(c, miller_madow);
}

void JointCountTable::add(const IVec& a, const IVec& b, std::uint64_t count) {
  Key key{std::vector<std::int64_t>(a.data(), a.data() + a.size()),
          std::vector<std::int64_t>(b.data(), b.data() + b.size())};
  counts_[key] += count;
  total_ += count;
}

void JointCountTable::merge(const JointCountTable& other) {
  for (const auto& [k, c] : other.counts_) counts_[k] += c;
  total_ += other.total_;
}

double JointCountTable::joint_entropy_bits(bool miller_madow) const {
  std::vector<std::uint64_t> c;
  c.reserve(counts_.size());
  for (const auto& [k, v] : counts_) c.push_back(v);
  return plug_in_entropy(c, miller_madow);
}

double JointCountTable::first_marginal_entropy_bits(bool miller_madow) const {
  std::map<std::vector<std::int64_t>, std::uint64_t> marg;
  for (const auto& [k, v] : counts_) marg[k.first] += v;
  std::vector<std::uint64_t> c;
  c.reserve(marg.size());
  for (const auto& [k, v] : marg) c.push_back(v);
  return plug_in_entropy(c, miller_madow);
}

double JointCountTable::second_marginal_entropy_bits(bool miller_madow) const {
  std::map<std::vector<std::int64_t>, std::uint64_t> marg;
  for (const auto& [k, v] : counts_) marg[k.second] += v;
  std::vector<std::uint64_t> c;
  c.reserve(marg.size());
  for (const auto& [k, v] : marg) c.push_back(v);
  return plug_in_entropy(c, miller_madow);
}

double conditional_entropy(const JointCountTable& joint, bool miller_madow) {
  return joint.joint_entropy_bits(miller_madow) - joint.first_marginal_entropy_bits(miller_madow);
}

namespace {

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

}  // namespace

double rate_account(double h_side1_bits, double h_side2_bits, double p1, double p2,
                    double h_joint_u_bits, int n) {
  if (n < 1) throw std::invalid_argument("block dimension must be positive");
  for (double p : {p1, p2}) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("boundary probability outside [0,1]");
  }
  const double dn = static_cast<double>(n);
  const double enc1 = h_side1_bits + binary_entropy(p1) + dn * p1;
  const double enc2 = h_side2_bits + binary_entropy(p2) + dn * p2;
  return (enc1 + enc2 + h_joint_u_bits) / dn;
}

}  // namespace lrdsc
