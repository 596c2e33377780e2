#include "zeromap/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace zeromap::verifier {

namespace {

constexpr std::size_t kMaxCandidatePairs = 4'000'000;
constexpr std::size_t kMaxPhaseCandidates = 4096;

void require_in_domain(const MapSpec& f, std::span<const double> points, const char* what) {
  for (const double p : points) {
    if (!f.domain().contains(p)) {
      fail(ErrorKind::domain, std::string(what) + ": sample point outside the map domain");
    }
  }
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::argument, "cannot parse number '" + s + "' in observable");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

}  // namespace

void ProbeConfig::validate() const {
  if (!(epsilon > 0.0)) fail(ErrorKind::argument, "probe epsilon must be > 0");
  if (!(delta > 0.0)) fail(ErrorKind::argument, "probe delta must be > 0");
  if (horizon < 1) fail(ErrorKind::argument, "probe horizon N must be >= 1");
  if (pair_count < 1) fail(ErrorKind::argument, "probe pair_count must be >= 1");
  if (checkpoints < 1) fail(ErrorKind::argument, "probe checkpoints must be >= 1");
}

std::vector<std::pair<double, double>> sample_pairs(std::span<const double> K_sample,
                                                    double delta, int pair_count,
                                                    std::uint64_t seed) {
  std::vector<double> pts(K_sample.begin(), K_sample.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  for (std::size_t i = 0; i < pts.size() && candidates.size() < kMaxCandidatePairs; ++i) {
    for (std::size_t j = i + 1; j < pts.size() && pts[j] - pts[i] < delta; ++j) {
      candidates.emplace_back(i, j);
      if (candidates.size() == kMaxCandidatePairs) break;
    }
  }
  if (candidates.empty()) {
    fail(ErrorKind::sampling, "no pairs closer than delta = " + format_number(delta) +
                                  " in a sample of " + std::to_string(pts.size()) +
                                  " points; use a larger K_sample or delta");
  }

  std::vector<std::size_t> chosen(candidates.size());
  std::iota(chosen.begin(), chosen.end(), std::size_t{0});
  const auto want = static_cast<std::size_t>(pair_count);
  if (candidates.size() > want) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < want; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, chosen.size() - 1);
      std::swap(chosen[i], chosen[pick(rng)]);
    }
    chosen.resize(want);
    std::sort(chosen.begin(), chosen.end());
  }

  std::vector<std::pair<double, double>> out;
  out.reserve(chosen.size());
  for (const auto c : chosen) out.emplace_back(pts[candidates[c].first], pts[candidates[c].second]);
  return out;
}

MlsVerdict mls_probe(const MapSpec& f, std::span<const double> K_sample,
                     const ProbeConfig& cfg) {
  cfg.validate();
  if (K_sample.empty()) fail(ErrorKind::argument, "mls_probe: empty K_sample");
  require_in_domain(f, K_sample, "mls_probe");

  const auto pairs = sample_pairs(K_sample, cfg.delta, cfg.pair_count, cfg.seed);
  const auto checkpoints = linear_schedule(cfg.horizon, cfg.checkpoints);

  MlsVerdict verdict;
  verdict.config = cfg;
  std::vector<std::int64_t> bad;
  for (const auto& [u0, v0] : pairs) {
    bad.clear();
    double u = u0;
    double v = v0;
    for (std::int64_t n = 1; n <= cfg.horizon; ++n) {
      u = f(u);
      v = f(v);
      if (std::abs(u - v) >= cfg.epsilon) bad.push_back(n);
    }
    const auto density = seqlab::upper_density_estimate(bad, cfg.horizon, checkpoints);
    verdict.pairs.push_back({u0, v0, density.upper_density_proxy});
    verdict.worst_density = std::max(verdict.worst_density, density.upper_density_proxy);
  }
  verdict.pass = verdict.worst_density < cfg.epsilon;
  return verdict;
}

EquicontinuityResult equicontinuity_probe(const MapSpec& f,
                                          std::span<const double> K_sample,
                                          const ProbeConfig& cfg) {
  cfg.validate();
  if (K_sample.empty()) fail(ErrorKind::argument, "equicontinuity_probe: empty K_sample");
  require_in_domain(f, K_sample, "equicontinuity_probe");

  const auto pairs = sample_pairs(K_sample, cfg.delta, cfg.pair_count, cfg.seed);
  EquicontinuityResult out;
  out.config = cfg;
  out.worst_separation = -1.0;
  for (const auto& [u0, v0] : pairs) {
    double u = u0;
    double v = v0;
    for (std::int64_t n = 1; n <= cfg.horizon; ++n) {
      u = f(u);
      v = f(v);
      const double sep = std::abs(u - v);
      if (sep > out.worst_separation) {
        out.worst_separation = sep;
        out.u = u0;
        out.v = v0;
        out.at_time = n;
      }
    }
    ++out.pairs_checked;
  }
  return out;
}

std::vector<std::pair<std::int64_t, double>> mean_distance(
    const MapSpec& f, double x, double z, std::span<const std::int64_t> schedule) {
  require_schedule(schedule, std::numeric_limits<std::int64_t>::max(), "mean_distance");
  std::vector<std::pair<std::int64_t, double>> out;
  CompensatedSum<double> acc;
  std::int64_t n = 0;
  for (const auto N : schedule) {
    for (; n < N; ++n) {
      x = f(x);
      z = f(z);
      acc.add(std::abs(x - z));
    }
    out.emplace_back(N, acc.value() / static_cast<double>(N));
  }
  return out;
}

AttractionResult mean_attraction_search(const MapSpec& f, double x, const tower::Tower& T,
                                        const ProbeConfig& cfg) {
  cfg.validate();
  if (T.levels.empty()) fail(ErrorKind::argument, "mean_attraction_search: empty tower");
  if (!f.domain().contains(x)) {
    fail(ErrorKind::domain, "mean_attraction_search: x outside the domain");
  }

  // Entry: the first time the orbit of x lands in a deepest-level interval.
  AttractionResult out;
  out.epsilon = cfg.epsilon;
  std::optional<std::uint64_t> entry_label;
  double y = x;
  for (std::int64_t t = 0; t <= cfg.horizon; ++t) {
    if ((entry_label = T.locate(y))) {
      out.entry_time = t;
      break;
    }
    y = f(y);
  }
  if (!entry_label) {
    fail(ErrorKind::not_attracted, "mean_attraction_search: orbit never entered the tower "
                                   "within the horizon");
  }

  // Phase matching: z in K whose orbit is in the same interval at the entry time.
  const int depth = T.depth();
  const auto mod = std::uint64_t{1} << depth;
  const auto wanted =
      (*entry_label + mod - static_cast<std::uint64_t>(out.entry_time) % mod) % mod;
  const auto K = tower::deepest_sample(T);
  double best = std::numeric_limits<double>::infinity();
  std::size_t considered = 0;
  for (std::size_t i = 0; i < K.points.size() && considered < kMaxPhaseCandidates; ++i) {
    if (T.label_at_time(K.times[i], depth) != wanted) continue;
    ++considered;
    const double gap = std::abs(mapengine::compose(f, K.points[i], out.entry_time) - y);
    if (gap < best) {
      best = gap;
      out.z = K.points[i];
    }
  }
  if (considered == 0) {
    fail(ErrorKind::sampling, "mean_attraction_search: no K sample with the required phase");
  }

  out.cesaro_distance =
      mean_distance(f, x, out.z, linear_schedule(cfg.horizon, cfg.checkpoints));
  const std::size_t size = out.cesaro_distance.size();
  const std::size_t tail = size - (size + 3) / 4;
  for (std::size_t j = tail; j < size; ++j) {
    out.limsup_proxy = std::max(out.limsup_proxy, out.cesaro_distance[j].second);
  }
  out.attained = out.limsup_proxy < cfg.epsilon;
  return out;
}

Observable Observable::constant(double value) {
  Observable o;
  o.kind_ = Kind::constant;
  o.a_ = {value};
  return o;
}

Observable Observable::coordinate() {
  Observable o;
  o.kind_ = Kind::coordinate;
  return o;
}

Observable Observable::trig(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
  if (cos_coeffs.empty()) fail(ErrorKind::argument, "trig observable needs a_0");
  if (sin_coeffs.size() + 1 != cos_coeffs.size()) {
    fail(ErrorKind::argument, "trig observable needs one sine coefficient per a_k, k >= 1");
  }
  Observable o;
  o.kind_ = Kind::trig;
  o.a_ = std::move(cos_coeffs);
  o.b_ = std::move(sin_coeffs);
  return o;
}

Observable Observable::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) {
    fail(ErrorKind::argument, "table observable needs >= 2 matching (x, y) nodes");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      fail(ErrorKind::argument, "table observable nodes must be strictly increasing");
    }
  }
  Observable o;
  o.kind_ = Kind::table;
  o.a_ = std::move(xs);
  o.b_ = std::move(ys);
  return o;
}

Observable Observable::parse(const std::string& text) {
  if (text == "coordinate" || text == "x") return coordinate();
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "constant") return constant(body.empty() ? 1.0 : parse_double(body));
  if (head == "trig") {
    const auto parts = split(body, ';');
    std::vector<double> a;
    std::vector<double> b;
    if (!parts.empty()) {
      for (const auto& s : split(parts[0], ',')) a.push_back(parse_double(s));
    }
    if (parts.size() > 1) {
      for (const auto& s : split(parts[1], ',')) b.push_back(parse_double(s));
    }
    return trig(std::move(a), std::move(b));
  }
  if (head == "table") {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& node : split(body, ',')) {
      const auto xy = split(node, ':');
      if (xy.size() != 2) fail(ErrorKind::argument, "table node must be x:y, got '" + node + "'");
      xs.push_back(parse_double(xy[0]));
      ys.push_back(parse_double(xy[1]));
    }
    return table(std::move(xs), std::move(ys));
  }
  fail(ErrorKind::argument, "unknown observable '" + text + "'");
}

std::string Observable::to_string() const {
  const auto join = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) s += ',';
      s += format_number(v[i]);
    }
    return s;
  };
  switch (kind_) {
    case Kind::constant: return "constant:" + format_number(a_[0]);
    case Kind::coordinate: return "coordinate";
    case Kind::trig: return "trig:" + join(a_) + ";" + join(b_);
    case Kind::table: {
      std::string s = "table:";
      for (std::size_t i = 0; i < a_.size(); ++i) {
        if (i > 0) s += ',';
        s += format_number(a_[i]) + ":" + format_number(b_[i]);
      }
      return s;
    }
  }
  return "";
}

double Observable::operator()(double x) const {
  switch (kind_) {
    case Kind::constant: return a_[0];
    case Kind::coordinate: return x;
    case Kind::trig: {
      double s = a_[0];
      for (std::size_t k = 1; k < a_.size(); ++k) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(k) * x;
        s += a_[k] * std::cos(w) + b_[k - 1] * std::sin(w);
      }
      return s;
    }
    case Kind::table: {
      const auto it = std::upper_bound(a_.begin(), a_.end(), x);
      std::size_t i = it == a_.begin() ? 0 : static_cast<std::size_t>(it - a_.begin()) - 1;
      i = std::min(i, a_.size() - 2);
      const double frac = (x - a_[i]) / (a_[i + 1] - a_[i]);
      return b_[i] + frac * (b_[i + 1] - b_[i]);
    }
  }
  return 0.0;
}

void Observable::require_defined_on(const mapengine::Interval& domain) const {
  if (kind_ == Kind::table && (a_.front() > domain.lo || a_.back() < domain.hi)) {
    fail(ErrorKind::argument, "table observable does not cover the map domain");
  }
}

std::vector<CesaroSeries> disjointness_run(const ArithmeticSequence& c,
                                           std::span<const Observable> phis,
                                           const MapSpec& f, double x,
                                           std::span<const std::int64_t> schedule) {
  require_schedule(schedule, c.size(), "disjointness_run");
  if (phis.empty()) fail(ErrorKind::argument, "disjointness_run: no observables");
  for (const auto& phi : phis) phi.require_defined_on(f.domain());
  if (!f.domain().contains(x)) fail(ErrorKind::domain, "disjointness_run: x outside the domain");

  // orbit(n - 1) = f^n(x), n = 1..N.
  const std::int64_t N = schedule.back();
  const Eigen::VectorXd orbit = mapengine::iterate(f, x, N).tail(N);

  std::vector<CesaroSeries> out;
  out.reserve(phis.size());
  for (const auto& phi : phis) {
    CesaroSeries series;
    series.label = c.label + " * " + phi.to_string();
    CompensatedSum<seqlab::Complex> acc;
    std::int64_t n = 0;
    for (const auto Nj : schedule) {
      for (; n < Nj; ++n) acc.add(c.values(n) * phi(orbit(n)));
      series.points.emplace_back(Nj, acc.value() / static_cast<double>(Nj));
    }
    out.push_back(std::move(series));
  }
  return out;
}

CesaroSeries disjointness_run(const ArithmeticSequence& c, const Observable& phi,
                              const MapSpec& f, double x,
                              std::span<const std::int64_t> schedule) {
  return disjointness_run(c, std::span<const Observable>(&phi, 1), f, x, schedule).front();
}

}  // namespace zeromap::verifier
