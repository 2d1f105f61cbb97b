#include "lrdsc/experiment.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace lrdsc {

using nlohmann::json;

namespace {

LatticeKind parse_kind(const std::string& s) {
  if (s == "integer" || s == "integer-grid" || s == "cubic") return LatticeKind::IntegerGrid;
  if (s == "hexagonal" || s == "hex") return LatticeKind::Hexagonal;
  if (s == "generic") return LatticeKind::Generic;
  throw std::invalid_argument("unknown lattice kind: " + s);
}

Marginal parse_marginal(const std::string& s) {
  if (s == "gaussian") return Marginal::Gaussian;
  if (s == "uniform") return Marginal::Uniform;
  throw std::invalid_argument("unknown marginal: " + s);
}

PairMode parse_mode(const std::string& s) {
  if (s == "identical") return PairMode::Identical;
  if (s == "gaussian" || s == "gaussian-correlated") return PairMode::GaussianCorrelated;
  if (s == "bounded" || s == "bounded-difference") return PairMode::BoundedDifference;
  throw std::invalid_argument("unknown pair mode: " + s);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::int64_t integer_root(std::int64_t k, int n) {
  if (k < 1) throw std::invalid_argument("k_index must be positive");
  const double guess = std::pow(static_cast<double>(k), 1.0 / n);
  for (std::int64_t s : {static_cast<std::int64_t>(guess), static_cast<std::int64_t>(guess) + 1,
                         static_cast<std::int64_t>(guess) - 1}) {
    if (s < 1) continue;
    std::int64_t p = 1;
    for (int i = 0; i < n; ++i) p *= s;
    if (p == k) return s;
  }
  throw std::invalid_argument("k_index = " + std::to_string(k) +
                              " is not an n-th power of an integer (n = " + std::to_string(n) +
                              ")");
}

}  // namespace

void ExperimentConfig::check() const {
  if (family.n < 1) throw std::invalid_argument("family dimension must be positive");
  if (mu_ladder.empty() || theta_ladder.empty()) {
    throw std::invalid_argument("mu and theta ladders must be nonempty");
  }
  for (int mu : mu_ladder) {
    if (mu < 2 || mu % 2 != 0) throw std::invalid_argument("mu ladder entries must be even");
  }
  for (double t : theta_ladder) {
    if (!(t > 0.0)) throw std::invalid_argument("theta ladder entries must be positive");
  }
  for (std::size_t i = 1; i < mu_ladder.size(); ++i) {
    if (mu_ladder[i] <= mu_ladder[i - 1]) {
      throw std::invalid_argument("mu ladder must increase (regime direction)");
    }
  }
  for (std::size_t i = 1; i < theta_ladder.size(); ++i) {
    if (theta_ladder[i] >= theta_ladder[i - 1]) {
      throw std::invalid_argument("theta ladder must decrease (regime direction)");
    }
  }
  if (pairing == Pairing::Zip) {
    if (mu_ladder.size() != theta_ladder.size()) {
      throw std::invalid_argument("zip pairing needs ladders of equal length");
    }
    for (std::size_t i = 1; i < mu_ladder.size(); ++i) {
      const double prev = static_cast<double>(mu_ladder[i - 1]) * mu_ladder[i - 1] *
                          theta_ladder[i - 1];
      const double cur = static_cast<double>(mu_ladder[i]) * mu_ladder[i] * theta_ladder[i];
      if (cur >= prev) {
        throw std::invalid_argument("mu^2 * theta must decrease along the ladder");
      }
    }
    if (!samples_ladder.empty() && samples_ladder.size() != mu_ladder.size()) {
      throw std::invalid_argument("samples ladder length must match the point ladder");
    }
  } else if (!samples_ladder.empty()) {
    throw std::invalid_argument("per-point sample counts require zip pairing");
  }
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  source.check();
  if (source.n != family.n) throw std::invalid_argument("source dimension must match family");
  if (r0_rule.value <= 0.0) throw std::invalid_argument("r0 rule value must be positive");
}

std::size_t ExperimentConfig::point_count() const {
  return pairing == Pairing::Zip ? mu_ladder.size() : mu_ladder.size() * theta_ladder.size();
}

ExperimentConfig parse_config_text(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;

  const json& fam = j.at("family");
  cfg.family.kind = parse_kind(fam.at("kind").get<std::string>());
  cfg.family.n = fam.at("n").get<int>();
  cfg.family.base_scale = fam.value("base_scale", 1.0);
  if (fam.contains("generator")) {
    const auto flat = fam.at("generator").get<std::vector<double>>();
    const int n = cfg.family.n;
    if (static_cast<int>(flat.size()) != n * n) {
      throw std::invalid_argument("generator must hold n*n row-major entries");
    }
    Mat rows(n, n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) rows(i, k) = flat[i * n + k];
    }
    cfg.family.generator_rows = rows;
    cfg.family.kind = LatticeKind::Generic;
  }

  cfg.k_index = j.at("k_index").get<std::int64_t>();
  cfg.mu_ladder = j.at("mu_ladder").get<std::vector<int>>();
  cfg.theta_ladder = j.at("theta_ladder").get<std::vector<double>>();
  const std::string pairing = j.value("pairing", std::string("zip"));
  if (pairing == "zip") {
    cfg.pairing = ExperimentConfig::Pairing::Zip;
  } else if (pairing == "grid") {
    cfg.pairing = ExperimentConfig::Pairing::Grid;
  } else {
    throw std::invalid_argument("pairing must be zip or grid");
  }

  if (j.contains("r0_rule")) {
    const json& r = j.at("r0_rule");
    const std::string type = r.at("type").get<std::string>();
    if (type == "fixed") {
      cfg.r0_rule.type = R0Rule::Type::Fixed;
    } else if (type == "fraction_of_rc") {
      cfg.r0_rule.type = R0Rule::Type::FractionOfRc;
    } else {
      throw std::invalid_argument("r0 rule type must be fixed or fraction_of_rc");
    }
    cfg.r0_rule.value = r.at("value").get<double>();
  }
  if (j.contains("c_constant") && !j.at("c_constant").is_null()) {
    cfg.c_constant = j.at("c_constant").get<double>();
  }

  const json& src = j.at("source");
  cfg.source.marginal = parse_marginal(src.at("marginal").get<std::string>());
  cfg.source.sigma2 = src.value("sigma2", 1.0);
  cfg.source.width = src.value("width", 1.0);
  cfg.source.mode = parse_mode(src.at("mode").get<std::string>());
  cfg.source.rho = src.value("rho", 1.0);
  cfg.source.delta = src.value("delta", 0.0);
  cfg.source.n = cfg.family.n;

  cfg.samples = j.value("samples", std::uint64_t{100'000});
  if (j.contains("samples_ladder")) {
    cfg.samples_ladder = j.at("samples_ladder").get<std::vector<std::uint64_t>>();
  }
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.unsafe_small_mu = j.value("unsafe_small_mu", false);
  cfg.out_path = j.value("out", std::string{});
  const std::string fmt = j.value("format", std::string("csv"));
  if (fmt == "csv") {
    cfg.format = ExperimentConfig::Format::Csv;
  } else if (fmt == "json") {
    cfg.format = ExperimentConfig::Format::Json;
  } else {
    throw std::invalid_argument("format must be csv or json");
  }

  cfg.check();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

double resolve_r0(const R0Rule& rule, const Lattice& central, const Lattice& intermediate) {
  if (rule.type == R0Rule::Type::Fixed) return rule.value;
  const auto gc = central.geometry();
  const auto gi = intermediate.geometry();
  return std::min(gi.inscribed_radius - 2.0 * gc.covering_radius,
                  rule.value * gc.inscribed_radius);
}

LrdscCodec build_point_codec(const ExperimentConfig& cfg, double theta, int mu) {
  Lattice central = cfg.family.generator_rows
                        ? Lattice::from_generator_rows(*cfg.family.generator_rows)
                              .scaled(theta * cfg.family.base_scale)
                        : Lattice::make(cfg.family.kind, cfg.family.n,
                                        theta * cfg.family.base_scale);
  const std::int64_t s = integer_root(cfg.k_index, cfg.family.n);
  const Lattice intermediate = central.scaled(static_cast<double>(s));
  const double r0 = resolve_r0(cfg.r0_rule, central, intermediate);
  CodecOptions opts;
  opts.c_constant = cfg.c_constant;
  opts.unsafe_small_mu = cfg.unsafe_small_mu;
  return LrdscCodec::validate(central, intermediate, mu, r0, opts);
}

namespace {

IVec exact_ratio(const IVec& v, std::int64_t m) {
  IVec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] % m != 0) throw std::runtime_error("coordinate not divisible as expected");
    out[i] = v[i] / m;
  }
  return out;
}

}  // namespace

PointOutcome run_point(const ExperimentConfig& cfg, double theta, int mu,
                       std::uint64_t samples, std::uint64_t stream) {
  PointOutcome out;
  out.theta = theta;
  out.mu = mu;
  out.k_index = cfg.k_index;
  out.n = cfg.family.n;
  out.samples = samples;
  out.seed = cfg.seed;

  std::optional<LrdscCodec> codec;
  try {
    codec = build_point_codec(cfg, theta, mu);
  } catch (const std::exception& e) {
    out.status = std::string("skipped: ") + e.what();
    return out;
  }
  out.r0 = codec->r0();
  out.status = codec->unsupported_by_theory() ? "ok-unsafe" : "ok";

  PairSampler sampler(cfg.source, cfg.seed, stream);
  DistortionAccumulator ds1, ds2, dc1, dc2;
  CountTable side1, side2;
  JointCountTable joint_u;
  std::uint64_t b1 = 0, b2 = 0, tail_hits = 0;
  Vec x1, x2;
  const std::int64_t mu64 = mu;

  for (std::uint64_t k = 0; k < samples; ++k) {
    sampler.next(x1, x2);
    const Description d1 = codec->encode(1, x1);
    const Description d2 = codec->encode(2, x2);
    const auto res = codec->central_decode(d1, d2);

    ds1.add(x1, codec->side_decode(d1));
    ds2.add(x2, codec->side_decode(d2));
    dc1.add(x1, res.x1);
    dc2.add(x2, res.x2);
    side1.add(exact_ratio(d1.side_point, mu64));
    side2.add(exact_ratio(d2.side_point, mu64));
    joint_u.add(d1.residual, d2.residual);
    if (d1.boundary) ++b1;
    if (d2.boundary) ++b2;
    if ((x2 - x1).norm() >= out.r0) ++tail_hits;
    switch (res.branch) {
      case CentralDecodeResult::Branch::SideFallback: ++out.branch_fallback; break;
      case CentralDecodeResult::Branch::CommonTau: ++out.branch_common; break;
      case CentralDecodeResult::Branch::SplitTau: ++out.branch_split; break;
    }
  }

  RdReport& r = out.report;
  r.sample_count = samples;
  r.d_side[0] = ds1.value();
  r.d_side[1] = ds2.value();
  r.d_central[0] = dc1.value();
  r.d_central[1] = dc2.value();
  r.h_side[0] = side1.entropy_bits();
  r.h_side[1] = side2.entropy_bits();
  r.p_boundary[0] = static_cast<double>(b1) / samples;
  r.p_boundary[1] = static_cast<double>(b2) / samples;
  r.h_joint_u = joint_u.joint_entropy_bits();
  r.h_u[0] = joint_u.first_marginal_entropy_bits();
  r.h_u[1] = joint_u.second_marginal_entropy_bits();
  r.h_cond_u = r.h_joint_u - r.h_u[0];
  r.sum_rate = rate_account(r.h_side[0], r.h_side[1], r.p_boundary[0], r.p_boundary[1],
                            r.h_joint_u, cfg.family.n);

  out.tail.count = samples;
  out.tail.p = static_cast<double>(tail_hits) / samples;
  out.tail.half_width_99 =
      2.5758293035489004 * std::sqrt(out.tail.p * (1.0 - out.tail.p) / samples);

  PredictionInputs pin;
  pin.n = cfg.family.n;
  pin.big_m = codec->m_index();
  pin.k_index = codec->k_index();
  pin.mu = mu;
  pin.nu_s = codec->nu_s();
  pin.nu_c = codec->nu_c();
  pin.g_s_half = codec->g_s_half();
  pin.g_c = codec->g_c();
  pin.rbar_s = codec->rbar_s();
  pin.r0 = codec->r0();
  pin.r_c = codec->central().geometry().inscribed_radius;
  pin.h1_bits = cfg.source.differential_entropy_bits();
  pin.h2_bits = pin.h1_bits;
  pin.h_cond_u_bits = r.h_cond_u;
  pin.tail_prob = out.tail.p;
  out.pred = predict(pin);
  return out;
}

std::vector<PointOutcome> run_sweep(const ExperimentConfig& cfg) {
  cfg.check();
  std::vector<PointOutcome> rows;
  std::uint64_t stream = 0;
  if (cfg.pairing == ExperimentConfig::Pairing::Zip) {
    for (std::size_t i = 0; i < cfg.mu_ladder.size(); ++i) {
      const std::uint64_t samples =
          cfg.samples_ladder.empty() ? cfg.samples : cfg.samples_ladder[i];
      rows.push_back(run_point(cfg, cfg.theta_ladder[i], cfg.mu_ladder[i], samples, stream++));
    }
  } else {
    for (double theta : cfg.theta_ladder) {
      for (int mu : cfg.mu_ladder) {
        rows.push_back(run_point(cfg, theta, mu, cfg.samples, stream++));
      }
    }
  }
  return rows;
}

std::string csv_header() {
  return "theta,mu,K,r0,n,samples,seed,status,d_s1,d_s2,d_c1,d_c2,H_side1,H_side2,P1,P2,"
         "H_u1,H_u2,H_cond_u,H_joint_u,sum_rate,pred_d_s,pred_d_c_low,pred_d_c_high,"
         "pred_rate,pred_hu_bound,tail_prob,tail_prob_err";
}

std::string csv_row(const PointOutcome& p) {
  std::ostringstream os;
  const RdReport& r = p.report;
  os << num(p.theta) << ',' << p.mu << ',' << p.k_index << ',' << num(p.r0) << ',' << p.n << ','
     << p.samples << ',' << p.seed << ',' << '"' << p.status << '"' << ',' << num(r.d_side[0])
     << ',' << num(r.d_side[1]) << ',' << num(r.d_central[0]) << ',' << num(r.d_central[1]) << ','
     << num(r.h_side[0]) << ',' << num(r.h_side[1]) << ',' << num(r.p_boundary[0]) << ','
     << num(r.p_boundary[1]) << ',' << num(r.h_u[0]) << ',' << num(r.h_u[1]) << ','
     << num(r.h_cond_u) << ',' << num(r.h_joint_u) << ',' << num(r.sum_rate) << ','
     << num(p.pred.d_side_pred) << ',' << num(p.pred.d_central_pred_low) << ','
     << num(p.pred.d_central_pred_high) << ',' << num(p.pred.rate_pred) << ','
     << num(p.pred.hu_cond_bound) << ',' << num(p.tail.p) << ',' << num(p.tail.half_width_99);
  return os.str();
}

std::string json_row(const PointOutcome& p) {
  json j;
  const RdReport& r = p.report;
  j["theta"] = p.theta;
  j["mu"] = p.mu;
  j["K"] = p.k_index;
  j["r0"] = p.r0;
  j["n"] = p.n;
  j["samples"] = p.samples;
  j["seed"] = p.seed;
  j["status"] = p.status;
  j["d_s1"] = r.d_side[0];
  j["d_s2"] = r.d_side[1];
  j["d_c1"] = r.d_central[0];
  j["d_c2"] = r.d_central[1];
  j["H_side1"] = r.h_side[0];
  j["H_side2"] = r.h_side[1];
  j["P1"] = r.p_boundary[0];
  j["P2"] = r.p_boundary[1];
  j["H_u1"] = r.h_u[0];
  j["H_u2"] = r.h_u[1];
  j["H_cond_u"] = r.h_cond_u;
  j["H_joint_u"] = r.h_joint_u;
  j["sum_rate"] = r.sum_rate;
  j["pred_d_s"] = p.pred.d_side_pred;
  j["pred_d_c_low"] = p.pred.d_central_pred_low;
  j["pred_d_c_high"] = p.pred.d_central_pred_high;
  j["pred_rate"] = p.pred.rate_pred;
  j["pred_hu_bound"] = p.pred.hu_cond_bound;
  j["tail_prob"] = p.tail.p;
  j["tail_prob_err"] = p.tail.half_width_99;
  return j.dump();
}

void write_outcomes(const std::vector<PointOutcome>& rows, const ExperimentConfig& cfg,
                    const std::string& out_path) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    os = &file;
  }
  if (cfg.format == ExperimentConfig::Format::Csv) {
    *os << csv_header() << '\n';
    for (const auto& r : rows) *os << csv_row(r) << '\n';
  } else {
    *os << "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      *os << "  " << json_row(rows[i]) << (i + 1 < rows.size() ? ",\n" : "\n");
    }
    *os << "]\n";
  }
}

namespace {

struct SuiteStats {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
};

std::string stat_line(const SuiteStats& s) {
  return std::to_string(s.failures) + " failures / " + std::to_string(s.trials) + " trials";
}

}  // namespace

std::vector<CheckResult> validate_suite(const ExperimentConfig& cfg) {
  std::vector<CheckResult> results;

  // Finest valid ladder point.
  std::optional<LrdscCodec> codec;
  double theta_used = 0.0;
  int mu_used = 0;
  std::string first_error;
  const auto try_point = [&](double theta, int mu) {
    if (codec) return;
    try {
      codec = build_point_codec(cfg, theta, mu);
      theta_used = theta;
      mu_used = mu;
    } catch (const std::exception& e) {
      if (first_error.empty()) first_error = e.what();
    }
  };
  if (cfg.pairing == ExperimentConfig::Pairing::Zip) {
    for (std::size_t i = cfg.mu_ladder.size(); i-- > 0;) {
      try_point(cfg.theta_ladder[i], cfg.mu_ladder[i]);
    }
  } else {
    for (std::size_t t = cfg.theta_ladder.size(); t-- > 0;) {
      for (std::size_t m = cfg.mu_ladder.size(); m-- > 0;) {
        try_point(cfg.theta_ladder[t], cfg.mu_ladder[m]);
      }
    }
  }
  if (!codec) {
    results.push_back({"point-validation", false, "no ladder point validates: " + first_error});
    return results;
  }
  results.push_back({"point-validation",
                     true,
                     "theta = " + num(theta_used) + ", mu = " + std::to_string(mu_used) +
                         (codec->unsupported_by_theory() ? " (unsafe mode)" : "")});

  const int n = codec->dim();
  const double r0 = codec->r0();

  // Exact recovery and the two distance bounds on in-ball pairs.
  {
    SourceModel inball = cfg.source;
    inball.mode = PairMode::BoundedDifference;
    inball.delta = 0.9 * r0 / std::sqrt(static_cast<double>(n));
    PairSampler sampler(inball, cfg.seed, 0xba11);
    SuiteStats recover, lemma;
    Vec x1, x2;
    for (int k = 0; k < 10'000; ++k) {
      sampler.next(x1, x2);
      const IVec c1 = codec->central_quantize(x1);
      const IVec c2 = codec->central_quantize(x2);
      const auto res = codec->central_decode(codec->encode(1, x1), codec->encode(2, x2));
      ++recover.trials;
      if (res.coords1 != c1 || res.coords2 != c2) ++recover.failures;
      ++lemma.trials;
      const double dcc = (codec->central_point(c1) - codec->central_point(c2)).norm();
      const IVec l1 = codec->central().quantize_coords(c1, codec->scale_ratio());
      const IVec l2 = codec->central().quantize_coords(c2, codec->scale_ratio());
      const double dll =
          (codec->intermediate_point(l1) - codec->intermediate_point(l2)).norm();
      if (!(dcc < codec->r_in()) || !(dll < 3.0 * codec->rbar_in())) ++lemma.failures;
    }
    results.push_back({"exact-recovery", recover.failures == 0, stat_line(recover)});
    results.push_back({"quantizer-distance-bounds", lemma.failures == 0, stat_line(lemma)});
  }

  // Worst-case reconstruction error over a branch-forcing mixture.
  {
    const double bound = 16.0 * mu_used * codec->rbar_s() * (1.0 + 1e-9);
    SuiteStats worst;
    std::uint64_t fallback = 0, common = 0, split = 0;
    const double deltas[4] = {0.0, 0.9 * r0 / std::sqrt(static_cast<double>(n)),
                              3.0 * codec->rbar_in(), 20.0 * codec->rbar_s()};
    Vec x1, x2;
    for (int mode = 0; mode < 4; ++mode) {
      SourceModel mix = cfg.source;
      mix.mode = deltas[mode] == 0.0 ? PairMode::Identical : PairMode::BoundedDifference;
      mix.delta = deltas[mode];
      PairSampler sampler(mix, cfg.seed, 0xad0 + mode);
      for (int k = 0; k < 5'000; ++k) {
        sampler.next(x1, x2);
        const auto res = codec->central_decode(codec->encode(1, x1), codec->encode(2, x2));
        switch (res.branch) {
          case CentralDecodeResult::Branch::SideFallback: ++fallback; break;
          case CentralDecodeResult::Branch::CommonTau: ++common; break;
          case CentralDecodeResult::Branch::SplitTau: ++split; break;
        }
        ++worst.trials;
        if ((x1 - res.x1).norm() > bound || (x2 - res.x2).norm() > bound) ++worst.failures;
      }
    }
    results.push_back({"worst-case-error",
                       worst.failures == 0,
                       stat_line(worst) + " (branches: fallback " + std::to_string(fallback) +
                           ", common " + std::to_string(common) + ", split " +
                           std::to_string(split) + ")"});
  }

  // Labeling identities: shift invariance and the two-label sum.
  {
    const auto& lab = codec->labeling();
    SuiteStats shift, sum;
    std::vector<IVec> shells;
    {
      std::vector<std::int64_t> off(n, -2);
      IVec k(n);
      while (true) {
        bool zero = true;
        for (int i = 0; i < n; ++i) {
          k[i] = off[i];
          if (off[i] != 0) zero = false;
        }
        if (!zero) shells.push_back(static_cast<std::int64_t>(mu_used) * k);
        int i = 0;
        for (; i < n; ++i) {
          if (off[i] < 2) {
            ++off[i];
            for (int j = 0; j < i; ++j) off[j] = -2;
            break;
          }
        }
        if (i == n) break;
      }
    }
    for (const auto& lam : lab.reps_u()) {
      for (int which : {1, 2}) {
        const IVec base = lab.beta(which, lam);
        for (const auto& sh : shells) {
          ++shift.trials;
          if (lab.beta(which, lam + sh) != base + sh) ++shift.failures;
        }
      }
      ++sum.trials;
      if (lab.beta(1, lam) + lab.beta(2, lam) != 2 * lab.quantize_fractional(lam)) {
        ++sum.failures;
      }
    }
    results.push_back({"label-shift-invariance", shift.failures == 0, stat_line(shift)});
    results.push_back({"label-sum-identity", sum.failures == 0, stat_line(sum)});
  }

  // Nested-sum oracle on small scaled-integer pairs.
  {
    SuiteStats oracle;
    bool pass = true;
    std::ostringstream detail;
    for (int n_test : {1, 2}) {
      for (std::int64_t m : {2, 4, 8}) {
        const Lattice fine = Lattice::integer_grid(n_test, 1.0);
        const auto pair = make_nested_pair(fine, fine.scaled(static_cast<double>(m)));
        const auto res = nested_sum_oracle(pair);
        ++oracle.trials;
        const double denom = std::max({std::abs(res.lhs), std::abs(res.rhs), 1e-12});
        if (std::abs(res.lhs - res.rhs) / denom > 1e-3) {
          ++oracle.failures;
          pass = false;
        }
      }
    }
    detail << stat_line(oracle);
    results.push_back({"nested-sum-oracle", pass, detail.str()});
  }

  return results;
}

}  // namespace lrdsc
