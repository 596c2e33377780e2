#include "zeromap/harness.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <variant>

namespace zeromap::harness {

namespace {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Parameter parsing. Every accessor records the key it read so unknown keys
// can be reported afterwards.

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& raw) : raw_(raw) {}

  std::optional<std::string> text(const std::string& key) {
    seen_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) return std::nullopt;
    return it->second;
  }

  std::string required_text(const std::string& key) {
    auto v = text(key);
    if (!v) throw ValidationError(key, "required");
    return *v;
  }

  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback,
                       std::int64_t lo, std::int64_t hi) {
    auto v = text(key);
    if (!v) {
      if (!fallback) throw ValidationError(key, "required");
      return *fallback;
    }
    const auto n = parse_integer(key, *v);
    if (n < lo || n > hi) {
      throw ValidationError(key, "must lie in [" + std::to_string(lo) + ", " +
                                     std::to_string(hi) + "], got " + *v);
    }
    return n;
  }

  double real(const std::string& key, std::optional<double> fallback, double lo, double hi) {
    auto v = text(key);
    if (!v) {
      if (!fallback) throw ValidationError(key, "required");
      return *fallback;
    }
    const double x = parse_real(key, *v);
    if (!(x >= lo && x <= hi)) {
      throw ValidationError(key, "must lie in [" + io::format15(lo) + ", " + io::format15(hi) +
                                     "], got " + *v);
    }
    return x;
  }

  bool flag(const std::string& key) {
    auto v = text(key);
    if (!v) return false;
    if (*v == "true" || *v == "1" || v->empty()) return true;
    if (*v == "false" || *v == "0") return false;
    throw ValidationError(key, "expected true or false, got '" + *v + "'");
  }

  void reject_unknown() const {
    for (const auto& [key, value] : raw_) {
      if (!seen_.count(key)) throw ValidationError(key, "unknown parameter");
    }
  }

  static std::int64_t parse_integer(const std::string& key, const std::string& s) {
    // Accepts 1000000, 10^6 and 1e6.
    const auto caret = s.find('^');
    try {
      if (caret != std::string::npos) {
        std::size_t pos_b = 0;
        std::size_t pos_e = 0;
        const auto base = std::stoll(s.substr(0, caret), &pos_b);
        const auto exp = std::stoll(s.substr(caret + 1), &pos_e);
        if (pos_b != caret || pos_e != s.size() - caret - 1 || exp < 0 || exp > 62) {
          throw std::invalid_argument(s);
        }
        std::int64_t out = 1;
        for (std::int64_t i = 0; i < exp; ++i) {
          if (base != 0 && std::abs(out) > INT64_MAX / std::max<std::int64_t>(1, std::abs(base))) {
            throw std::out_of_range(s);
          }
          out *= base;
        }
        return out;
      }
      std::size_t pos = 0;
      const auto n = std::stoll(s, &pos);
      if (pos == s.size()) return n;
      const double x = std::stod(s, &pos);
      if (pos == s.size() && x == std::floor(x) && std::abs(x) < 9.2e18) {
        return static_cast<std::int64_t>(x);
      }
    } catch (const std::logic_error&) {
    }
    throw ValidationError(key, "expected an integer, got '" + s + "'");
  }

  static double parse_real(const std::string& key, const std::string& s) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(s, &pos);
      if (pos == s.size() && std::isfinite(x)) return x;
    } catch (const std::logic_error&) {
    }
    throw ValidationError(key, "expected a finite number, got '" + s + "'");
  }

 private:
  const std::map<std::string, std::string>& raw_;
  std::set<std::string> seen_;
};

// Re-raises library argument/domain errors met during validation as field errors.
template <class F>
auto checked(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw ValidationError(key, e.what());
  }
}

struct MapChoice {
  std::optional<mapengine::MapSpec> spec;
  int cascade_level = -1;

  mapengine::MapSpec resolve() const {
    if (spec) return *spec;
    return mapengine::MapSpec::logistic(mapengine::locate_cascade_parameter(cascade_level).parameter);
  }
  mapengine::Interval domain() const {
    return spec ? spec->domain() : mapengine::Interval{0.0, 1.0};
  }
  std::optional<double> critical_point() const {
    return spec ? spec->critical_point() : std::optional<double>(0.5);
  }
};

MapChoice read_map(Params& p) {
  auto text = p.text("map");
  auto cascade = p.text("cascade");
  if (text && cascade) throw ValidationError("map", "give either map or cascade, not both");
  if (cascade) {
    MapChoice m;
    m.cascade_level = static_cast<int>(
        p.integer("cascade", std::nullopt, 0, mapengine::kMaxCascadeLevel));
    return m;
  }
  if (!text) throw ValidationError("map", "required (or cascade=k for the logistic s_k)");
  return MapChoice{checked("map", [&] { return mapengine::MapSpec::parse(*text); }), -1};
}

double read_point(Params& p, const std::string& key, const MapChoice& m,
                  std::optional<double> fallback) {
  const auto dom = m.domain();
  if (!fallback) fallback = m.critical_point();
  return p.real(key, fallback, dom.lo, dom.hi);
}

struct SequenceChoice {
  std::string text;
  seqlab::ArithmeticSequence build(std::int64_t N) const;
};

SequenceChoice read_sequence(Params& p, const std::string& key) {
  const auto text = p.text(key).value_or("mobius");
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto arg = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  if (kind == "mobius" && colon == std::string::npos) return {text};
  if (kind == "constant" || kind == "rotation") {
    Params::parse_real(key, arg);
    return {text};
  }
  if (kind == "file") {
    if (!fs::is_regular_file(arg)) throw ValidationError(key, "no such file '" + arg + "'");
    return {text};
  }
  throw ValidationError(key, "expected mobius, constant:v, rotation:alpha or file:path, got '" +
                                 text + "'");
}

seqlab::ArithmeticSequence SequenceChoice::build(std::int64_t N) const {
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto arg = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  if (kind == "mobius") return seqlab::mobius_sieve(N);
  if (kind == "constant") return seqlab::ArithmeticSequence::constant(N, std::stod(arg));
  if (kind == "rotation") return seqlab::ArithmeticSequence::rotation(N, std::stod(arg));
  std::ifstream in(arg);
  if (!in) fail(ErrorKind::io, "cannot open sequence file '" + arg + "'");
  auto c = io::read_sequence_csv(in, arg);
  if (c.size() < N) {
    fail(ErrorKind::size, "sequence file '" + arg + "' holds " + std::to_string(c.size()) +
                              " terms, N = " + std::to_string(N));
  }
  c.values.conservativeResize(N);
  return c;
}

std::vector<std::int64_t> read_schedule(Params& p, std::int64_t N, int checkpoints) {
  const auto text = p.text("schedule").value_or("decade");
  if (text == "decade") return decade_schedule(N);
  if (text == "linear") return linear_schedule(N, checkpoints);
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(Params::parse_integer("schedule", item));
  checked("schedule", [&] {
    require_schedule(out, N, "schedule");
    return 0;
  });
  if (out.back() != N) throw ValidationError("schedule", "must end at N");
  return out;
}

// ---------------------------------------------------------------------------
// Typed plans, one per command. Building a plan is the validation step.

struct SievePlan {
  std::int64_t N;
};

struct OscillationPlan {
  SequenceChoice c;
  std::int64_t N;
  double lambda;
  int grid;
  std::vector<std::int64_t> schedule;
  seqlab::OscillationOptions opts;
};

struct ScreenPlan {
  MapChoice map;
  int p_max;
  int grid;
  double tol;
  std::optional<mapengine::TransitionMatrix> matrix;
};

struct PerronPlan {
  mapengine::TransitionMatrix matrix;
};

struct CascadePlan {
  int k;
};

struct TowerSpec {
  MapChoice map;
  double x0;
  int depth;
  std::int64_t burn_in;
  std::int64_t orbit_length;
  double margin;
};

struct TowerPlan {
  TowerSpec tower;
  int samples;
  bool force;
  int screen_p_max;
  int screen_grid;
  std::int64_t itinerary_N;
  double itinerary_x;
};

struct OdometerPlan {
  odometer::OdometerPoint w;
  int n;
  std::uint64_t N;
  std::optional<odometer::Cylinder> target;
  std::optional<odometer::Cylinder> source;
};

struct MlsPlan {
  TowerSpec tower;
  verifier::ProbeConfig cfg;
};

struct AttractPlan {
  TowerSpec tower;
  double x;
  verifier::ProbeConfig cfg;
};

struct DisjointPlan {
  SequenceChoice c;
  verifier::Observable phi;
  MapChoice map;
  double x;
  std::int64_t N;
  std::vector<std::int64_t> schedule;
};

using Plan = std::variant<SievePlan, OscillationPlan, ScreenPlan, PerronPlan, CascadePlan,
                          TowerPlan, OdometerPlan, MlsPlan, AttractPlan, DisjointPlan>;

int as_int(std::int64_t v) { return static_cast<int>(v); }

TowerSpec read_tower_spec(Params& p) {
  TowerSpec t{read_map(p), 0.0, 0, 0, 0, 0.0};
  t.x0 = read_point(p, "x0", t.map, std::nullopt);
  t.depth = as_int(p.integer("depth", 8, 1, tower::kMaxTowerDepth));
  t.burn_in = p.integer("burn_in", tower::kDefaultBurnIn, 0, std::int64_t{1} << 40);
  const auto min_len = (std::int64_t{1} << t.depth) * 64;
  t.orbit_length = p.integer("orbit_length", 0, 0, std::int64_t{1} << 32);
  if (t.orbit_length != 0 && t.orbit_length < min_len) {
    throw ValidationError("orbit_length", "must be 0 (default) or >= 2^depth * 64 = " +
                                              std::to_string(min_len));
  }
  t.margin = p.real("margin", 1e-12, 0.0, 1e-3);
  return t;
}

verifier::ProbeConfig read_probe(Params& p, const ExperimentConfig& cfg, double epsilon) {
  verifier::ProbeConfig c;
  c.epsilon = p.real("epsilon", epsilon, 0.0, 1e9);
  c.delta = p.real("delta", c.delta, 0.0, 1e9);
  c.horizon = p.integer("N", c.horizon, 1, std::int64_t{1} << 34);
  c.pair_count = as_int(p.integer("pairs", c.pair_count, 1, 1'000'000));
  c.checkpoints = as_int(p.integer("checkpoints", c.checkpoints, 1, 100'000));
  c.seed = cfg.seed;
  checked("epsilon", [&] {
    c.validate();
    return 0;
  });
  return c;
}

Plan make_plan(const ExperimentConfig& cfg) {
  Params p(cfg.parameters);
  const auto& cmd = cfg.command;
  Plan plan = [&]() -> Plan {
    if (cmd == "sieve") return SievePlan{p.integer("N", std::nullopt, 1, seqlab::kMaxSequenceLength)};
    if (cmd == "oscillation") {
      auto c = read_sequence(p, "c");
      const auto N = p.integer("N", std::nullopt, 1, seqlab::kMaxSequenceLength);
      const auto lambda = p.real("lambda", 2.0, 1.0, 64.0);
      if (!(lambda > 1.0)) throw ValidationError("lambda", "must be > 1");
      const auto grid = as_int(p.integer("grid", 1024, 1, 1 << 24));
      seqlab::OscillationOptions opts;
      opts.floor = p.real("floor", opts.floor, 0.0, 1e9);
      opts.slack = p.real("slack", opts.slack, 0.0, 1.0);
      const auto checkpoints = as_int(p.integer("checkpoints", 16, 1, 100'000));
      auto schedule = read_schedule(p, N, checkpoints);
      return OscillationPlan{std::move(c), N, lambda, grid, std::move(schedule), opts};
    }
    if (cmd == "screen") {
      ScreenPlan s{read_map(p), 0, 0, 0.0, std::nullopt};
      s.p_max = as_int(p.integer("p_max", 12, 3, 24));
      s.grid = as_int(p.integer("grid", 1 << 14, 2, 1 << 24));
      s.tol = p.real("tol", 1e-12, 1e-300, 1e-2);
      if (auto m = p.text("matrix")) {
        s.matrix = checked("matrix", [&] { return mapengine::TransitionMatrix::parse(*m); });
      }
      return s;
    }
    if (cmd == "perron") {
      const auto m = p.required_text("matrix");
      return PerronPlan{checked("matrix", [&] { return mapengine::TransitionMatrix::parse(m); })};
    }
    if (cmd == "cascade") {
      return CascadePlan{as_int(p.integer("k", std::nullopt, 0, mapengine::kMaxCascadeLevel))};
    }
    if (cmd == "tower") {
      TowerPlan t{read_tower_spec(p), 0, false, 0, 0, 0, 0.0};
      t.samples = as_int(p.integer("samples", 16, 1, 1 << 16));
      t.force = p.flag("force");
      t.screen_p_max = as_int(p.integer("screen_p_max", 12, 3, 24));
      t.screen_grid = as_int(p.integer("screen_grid", 1 << 14, 2, 1 << 24));
      t.itinerary_N = p.integer("itinerary_N", 0, 0, std::int64_t{1} << 34);
      t.itinerary_x = read_point(p, "itinerary_x", t.tower.map, t.tower.x0);
      return t;
    }
    if (cmd == "odometer") {
      const auto D = as_int(p.integer("depth", std::nullopt, 1, odometer::kMaxDepth));
      auto w = odometer::OdometerPoint::zeros(D);
      if (auto bits = p.text("w")) {
        w = checked("w", [&] { return odometer::OdometerPoint::parse(*bits); });
        if (w.depth() != D) throw ValidationError("w", "must have exactly depth bits");
      }
      const auto n = as_int(p.integer("n", std::nullopt, 1, std::min(D, odometer::kMaxCensusOrder)));
      const auto N = p.integer("N", std::int64_t{1} << n, 1, std::int64_t{1} << 40);
      OdometerPlan o{w, n, static_cast<std::uint64_t>(N), std::nullopt, std::nullopt};
      auto target = p.text("target");
      auto source = p.text("source");
      if (target.has_value() != source.has_value()) {
        throw ValidationError(target ? "source" : "target", "target and source go together");
      }
      if (target) {
        o.target = checked("target", [&] { return odometer::Cylinder::parse(*target); });
        o.source = checked("source", [&] { return odometer::Cylinder::parse(*source); });
        if (o.target->order() != o.source->order()) {
          throw ValidationError("source", "must have the same order as target");
        }
        if (o.target->order() > odometer::kMaxProgressionOrder) {
          throw ValidationError("target", "order above 63");
        }
      }
      return o;
    }
    if (cmd == "mls") {
      auto t = read_tower_spec(p);
      return MlsPlan{std::move(t), read_probe(p, cfg, 0.1)};
    }
    if (cmd == "attract") {
      auto t = read_tower_spec(p);
      const double x = read_point(p, "x", t.map, t.x0);
      return AttractPlan{std::move(t), x, read_probe(p, cfg, 0.05)};
    }
    if (cmd == "disjoint") {
      auto c = read_sequence(p, "c");
      auto map = read_map(p);
      const auto phi_text = p.text("phi").value_or("coordinate");
      auto phi = checked("phi", [&] {
        auto o = verifier::Observable::parse(phi_text);
        o.require_defined_on(map.domain());
        return o;
      });
      const double x = read_point(p, "x", map, std::nullopt);
      const auto N = p.integer("N", std::nullopt, 1, seqlab::kMaxSequenceLength);
      const auto checkpoints = as_int(p.integer("checkpoints", 16, 1, 100'000));
      auto schedule = read_schedule(p, N, checkpoints);
      return DisjointPlan{std::move(c), std::move(phi), std::move(map), x, N, std::move(schedule)};
    }
    throw ValidationError("command", "unknown command '" + cmd + "'");
  }();
  p.reject_unknown();
  return plan;
}

// ---------------------------------------------------------------------------
// Execution.

using Series = std::vector<std::pair<std::int64_t, double>>;

CsvTable series_table(std::string name, const Series& s) {
  CsvTable t{std::move(name), {"N", "value"}, {}};
  for (const auto& [N, v] : s) t.rows.push_back({std::to_string(N), io::format15(v)});
  return t;
}

CsvTable complex_series_table(std::string name, const seqlab::CesaroSeries& s) {
  CsvTable t{std::move(name), {"N", "re", "im"}, {}};
  for (const auto& [N, v] : s.points) {
    t.rows.push_back({std::to_string(N), io::format15(v.real()), io::format15(v.imag())});
  }
  return t;
}

CsvTable orbit_table(const std::vector<mapengine::PeriodicOrbit>& orbits) {
  CsvTable t{"orbits", {"orbit_id", "point", "primitive_period"}, {}};
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    for (const double x : orbits[i].points) {
      t.rows.push_back({std::to_string(i), io::format15(x),
                        std::to_string(orbits[i].primitive_period)});
    }
  }
  return t;
}

CsvTable levels_table(const tower::Tower& T) {
  CsvTable t{"levels", {"level", "k", "label", "lo", "hi"}, {}};
  for (int n = 1; n <= T.depth(); ++n) {
    const auto& level = T.level(n);
    for (std::uint64_t k = 0; k < level.size(); ++k) {
      t.rows.push_back({std::to_string(n), std::to_string(k), tower::label_of(n, k).to_string(),
                        io::format15(level[k].lo), io::format15(level[k].hi)});
    }
  }
  return t;
}

tower::Tower build(const TowerSpec& s, const mapengine::MapSpec& f) {
  return tower::build_tower(f, s.x0, s.depth, s.burn_in, s.orbit_length,
                            tower::TowerOptions{s.margin});
}

Json tower_summary(const tower::Tower& T) {
  Json out{{"map", T.map.to_string()},
           {"base_point", io::round15(T.base_point)},
           {"requested_depth", T.requested_depth},
           {"depth", T.depth()},
           {"degenerate", T.degenerate()}};
  out["truncated_at"] = T.truncation ? Json(T.truncation->failed_level) : Json(nullptr);
  return out;
}

struct Runner {
  ReportBundle& out;
  Json& result;

  void operator()(const SievePlan& p) {
    const auto mu = seqlab::mobius_values(p.N);
    CsvTable t{"mu", {"n", "mu"}, {}};
    t.rows.reserve(mu.size());
    std::int64_t mertens = 0;
    std::int64_t nonzero = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      t.rows.push_back({std::to_string(i + 1), std::to_string(int{mu[i]})});
      mertens += mu[i];
      nonzero += mu[i] != 0;
    }
    result = Json{{"N", p.N}, {"mertens", mertens}, {"squarefree_count", nonzero}};
    // The full list is kept in the JSON only for small N; the CSV always has it.
    if (p.N <= 10'000) {
      Json values = Json::array();
      for (const auto v : mu) values.push_back(int{v});
      result["mu"] = values;
    }
    out.tables.push_back(std::move(t));
  }

  void operator()(const OscillationPlan& p) {
    const auto c = p.c.build(p.N);
    const auto r = seqlab::oscillation_test(c, p.lambda, p.grid, p.schedule, p.opts);
    result = io::to_json(r);
    result["sequence"] = c.label;
    CsvTable t{"series", {"N", "max_weyl", "K_estimate", "abs_mean"}, {}};
    for (std::size_t i = 0; i < r.max_weyl.size(); ++i) {
      t.rows.push_back({std::to_string(r.max_weyl[i].first), io::format15(r.max_weyl[i].second),
                        io::format15(r.K_estimates[i].second), io::format15(r.abs_mean[i].second)});
    }
    out.tables.push_back(std::move(t));
  }

  void operator()(const ScreenPlan& p) {
    const auto f = p.map.resolve();
    const auto r = mapengine::entropy_screen(f, p.p_max, p.grid, p.tol);
    result = Json{{"map", f.to_string()}, {"grid", p.grid}, {"tol", io::round15(p.tol)}};
    result["screen"] = io::to_json(r);
    if (p.matrix) {
      result["matrix"] = p.matrix->to_string();
      result["perron"] = io::to_json(mapengine::perron_eigenvalue(*p.matrix));
    }
    if (!r.orbits.empty()) out.tables.push_back(orbit_table(r.orbits));
  }

  void operator()(const PerronPlan& p) {
    result = Json{{"matrix", p.matrix.to_string()}};
    result["perron"] = io::to_json(mapengine::perron_eigenvalue(p.matrix));
  }

  void operator()(const CascadePlan& p) {
    const auto r = mapengine::locate_cascade_parameter(p.k);
    result = io::to_json(r);
    CsvTable t{"superstable", {"k", "s_k"}, {}};
    for (std::size_t i = 0; i < r.superstable.size(); ++i) {
      t.rows.push_back({std::to_string(i), io::format15(r.superstable[i])});
    }
    out.tables.push_back(std::move(t));
  }

  void operator()(const TowerPlan& p) {
    const auto f = p.tower.map.resolve();
    const auto screen = mapengine::entropy_screen(f, p.screen_p_max, p.screen_grid, 1e-12);
    if (screen.verdict == mapengine::ScreenVerdict::positive_witness && !p.force) {
      fail(ErrorKind::domain, f.to_string() + " has a periodic orbit of period " +
                                  std::to_string(screen.witness_period) +
                                  " (positive entropy); pass force=true to build anyway");
    }
    const auto T = build(p.tower, f);
    result = Json::object();
    result["screen"] = io::to_json(screen);
    result["tower"] = io::to_json(T);
    result["verify"] = T.depth() > 0 ? io::to_json(tower::verify_tower(T, p.samples)) : Json(nullptr);
    if (p.itinerary_N > 0 && T.depth() > 0) {
      const auto it = tower::itinerary(T, p.itinerary_x, p.itinerary_N);
      result["itinerary"] = io::to_json(it);
      CsvTable t{"itinerary", {"t", "label"}, {}};
      for (std::size_t i = 0; i < it.labels.size(); ++i) {
        t.rows.push_back({std::to_string(i), it.labels[i] ? std::to_string(*it.labels[i]) : ""});
      }
      out.tables.push_back(std::move(t));
    }
    out.tables.push_back(levels_table(T));
  }

  void operator()(const OdometerPlan& p) {
    const auto census = odometer::cylinder_census(p.w, p.n, p.N);
    CsvTable t{"census", {"prefix", "label", "count"}, {}};
    Json counts = Json::array();
    for (std::uint64_t k = 0; k < census.size(); ++k) {
      t.rows.push_back({std::to_string(k), odometer::Cylinder(k, p.n).to_string(),
                        std::to_string(census[k])});
      counts.push_back(census[k]);
    }
    result = Json{{"w", p.w.to_string()}, {"n", p.n}, {"N", p.N}, {"census", counts}};
    if (p.target) {
      result["target"] = p.target->to_string();
      result["source"] = p.source->to_string();
      result["progression"] = io::to_json(odometer::progression_density(*p.target, *p.source));
    }
    out.tables.push_back(std::move(t));
  }

  void operator()(const MlsPlan& p) {
    const auto f = p.tower.map.resolve();
    const auto T = build(p.tower, f);
    // With no tower level the sample is the plain post-burn-in orbit (e.g. r = 4).
    const auto K = tower::deepest_sample(T);
    const auto mls = verifier::mls_probe(f, K.points, p.cfg);
    const auto eq = verifier::equicontinuity_probe(f, K.points, p.cfg);
    result = Json{{"tower", tower_summary(T)}, {"sample_size", K.points.size()}};
    result["mls"] = io::to_json(mls);
    result["equicontinuity"] = io::to_json(eq);
    CsvTable t{"pairs", {"u", "v", "bad_set_density"}, {}};
    for (const auto& pr : mls.pairs) {
      t.rows.push_back({io::format15(pr.u), io::format15(pr.v), io::format15(pr.bad_set_density)});
    }
    out.tables.push_back(std::move(t));
  }

  void operator()(const AttractPlan& p) {
    const auto f = p.tower.map.resolve();
    const auto T = build(p.tower, f);
    if (T.depth() == 0) fail(ErrorKind::domain, "tower is empty; nothing to attract to");
    const auto r = verifier::mean_attraction_search(f, p.x, T, p.cfg);
    result = Json{{"tower", tower_summary(T)}, {"x", io::round15(p.x)}};
    result["attraction"] = io::to_json(r);
    out.tables.push_back(series_table("distance", r.cesaro_distance));
  }

  void operator()(const DisjointPlan& p) {
    const auto f = p.map.resolve();
    const auto c = p.c.build(p.N);
    const auto s = verifier::disjointness_run(c, p.phi, f, p.x, p.schedule);
    result = Json{{"map", f.to_string()},
                  {"x", io::round15(p.x)},
                  {"phi", p.phi.to_string()},
                  {"sequence", c.label}};
    result["series"] = io::to_json(s);
    out.tables.push_back(complex_series_table("series", s));
  }
};

Json parameters_echo(const ExperimentConfig& cfg) {
  Json out = Json::object();
  for (const auto& [k, v] : cfg.parameters) out[k] = v;
  return out;
}

bool is_empty(const Json& j) { return j.is_null() || (j.is_structured() && j.empty()); }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorKind::io, "cannot write '" + path.string() + "'");
  f << content;
  f.close();
  if (!f) fail(ErrorKind::io, "write to '" + path.string() + "' failed");
}

std::string csv_text(const CsvTable& t) {
  std::string s;
  auto line = [&s](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    s += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return s;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"sieve",  "oscillation", "screen", "perron",
                                              "cascade", "tower",      "odometer", "mls",
                                              "attract", "disjoint"};
  return names;
}

std::string version() { return ZEROMAP_VERSION; }

void validate(const ExperimentConfig& cfg) { make_plan(cfg); }

ReportBundle run_experiment(const ExperimentConfig& cfg) {
  const auto plan = make_plan(cfg);
  const auto start = std::chrono::steady_clock::now();

  ReportBundle bundle;
  bundle.command = cfg.command;
  Json result;
  std::visit(Runner{bundle, result}, plan);
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;

  bundle.report = Json{{"schema", "zeromap." + cfg.command + "/1"},
                       {"command", cfg.command},
                       {"seed", cfg.seed},
                       {"parameters", parameters_echo(cfg)},
                       {"result", std::move(result)}};
  bundle.manifest = Json{{"schema", "zeromap.manifest/1"},
                         {"command", cfg.command},
                         {"version", version()},
                         {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                       std::to_string(EIGEN_MINOR_VERSION)},
                         {"seed", cfg.seed},
                         {"parameters", parameters_echo(cfg)},
                         {"wall_time_s", io::round15(wall.count())}};
  return bundle;
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "both") return Format::both;
  throw ValidationError("format", "expected json, csv or both, got '" + s + "'");
}

std::vector<fs::path> emit_report(const ReportBundle& bundle, const fs::path& dir,
                                  Format format) {
  if (bundle.command.empty() || is_empty(bundle.report) ||
      (bundle.report.contains("result") && is_empty(bundle.report["result"]))) {
    fail(ErrorKind::size, "empty report; nothing written");
  }
  for (const auto& t : bundle.tables) {
    if (t.rows.empty()) fail(ErrorKind::size, "empty table '" + t.name + "'; nothing written");
  }
  if (format == Format::csv && bundle.tables.empty()) {
    fail(ErrorKind::size, "command " + bundle.command + " has no CSV series; nothing written");
  }

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    fail(ErrorKind::io, "cannot create output directory '" + dir.string() + "'");
  }

  std::vector<std::pair<fs::path, std::string>> files;
  if (format != Format::csv) {
    files.emplace_back(dir / (bundle.command + ".json"), bundle.report.dump(2) + "\n");
  }
  if (format != Format::json) {
    for (const auto& t : bundle.tables) {
      files.emplace_back(dir / (bundle.command + "_" + t.name + ".csv"), csv_text(t));
    }
  }
  Json manifest = bundle.manifest;
  Json names = Json::array();
  for (const auto& [path, text] : files) names.push_back(path.filename().string());
  manifest["files"] = names;
  files.emplace_back(dir / "manifest.json", manifest.dump(2) + "\n");

  std::vector<fs::path> written;
  for (const auto& [path, text] : files) {
    write_file(path, text);
    written.push_back(path);
  }
  return written;
}

fs::path default_output_dir() {
  if (const char* env = std::getenv("ZEROMAP_OUTPUT_DIR"); env && *env) return env;
  return fs::current_path();
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot read config file '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config", std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config", "top level must be an object");

  ExperimentConfig cfg;
  auto as_text = [](const std::string& key, const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number() || v.is_boolean()) return v.dump();
    throw ValidationError(key, "expected a string, number or boolean");
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "command") {
      cfg.command = as_text(key, value);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ValidationError("seed", "expected an unsigned integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "output_dir") {
      cfg.output_dir = as_text(key, value);
    } else if (key == "parameters") {
      if (!value.is_object()) throw ValidationError("parameters", "expected an object");
      for (const auto& [k, v] : value.items()) cfg.parameters[k] = as_text(k, v);
    } else {
      cfg.parameters[key] = as_text(key, value);
    }
  }
  return cfg;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return 2;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return err->kind() == ErrorKind::io ? 4 : 3;
  }
  return 3;
}

}  // namespace zeromap::harness
