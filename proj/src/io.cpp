#include "zeromap/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace zeromap::io {

namespace {

using Series = std::vector<std::pair<std::int64_t, double>>;

Json series_to_json(const Series& s) {
  Json out = Json::array();
  for (const auto& [N, v] : s) out.push_back(Json{{"N", N}, {"value", round15(v)}});
  return out;
}

Series series_from_json(const Json& j) {
  Series out;
  for (const auto& e : j) out.emplace_back(e.at("N").get<std::int64_t>(), e.at("value").get<double>());
  return out;
}

template <class T>
T field(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::argument, std::string("report field '") + key + "': " + e.what());
  }
}

}  // namespace

double round15(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return std::strtod(buf, nullptr);
}

std::string format15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

Json to_json(const seqlab::CesaroSeries& s) {
  Json points = Json::array();
  for (const auto& [N, v] : s.points) {
    points.push_back(Json{{"N", N}, {"re", round15(v.real())}, {"im", round15(v.imag())}});
  }
  return Json{{"label", s.label}, {"points", points}};
}

seqlab::CesaroSeries cesaro_series_from_json(const Json& j) {
  seqlab::CesaroSeries s;
  s.label = field<std::string>(j, "label");
  for (const auto& p : j.at("points")) {
    s.points.emplace_back(p.at("N").get<std::int64_t>(),
                          seqlab::Complex(p.at("re").get<double>(), p.at("im").get<double>()));
  }
  return s;
}

Json to_json(const seqlab::OscillationReport& r) {
  return Json{{"lambda", round15(r.lambda)},
              {"K_estimates", series_to_json(r.K_estimates)},
              {"grid_size", r.grid_size},
              {"max_weyl", series_to_json(r.max_weyl)},
              {"worst_t", round15(r.worst_t)},
              {"verdict", seqlab::to_string(r.verdict)},
              {"abs_mean", series_to_json(r.abs_mean)},
              {"floor", round15(r.floor)},
              {"slack", round15(r.slack)}};
}

seqlab::OscillationReport oscillation_report_from_json(const Json& j) {
  seqlab::OscillationReport r;
  r.lambda = field<double>(j, "lambda");
  r.K_estimates = series_from_json(j.at("K_estimates"));
  r.grid_size = field<int>(j, "grid_size");
  r.max_weyl = series_from_json(j.at("max_weyl"));
  r.worst_t = field<double>(j, "worst_t");
  r.verdict = seqlab::parse_oscillation_verdict(field<std::string>(j, "verdict"));
  r.abs_mean = series_from_json(j.at("abs_mean"));
  r.floor = field<double>(j, "floor");
  r.slack = field<double>(j, "slack");
  return r;
}

Json to_json(const seqlab::DensityReport& r) {
  Json ratios = Json::array();
  for (const auto& [N, v] : r.running_ratio) ratios.push_back(Json{{"N", N}, {"ratio", round15(v)}});
  return Json{{"N", r.N},
              {"count", r.count},
              {"running_ratio", ratios},
              {"upper_density_proxy", round15(r.upper_density_proxy)}};
}

seqlab::DensityReport density_report_from_json(const Json& j) {
  seqlab::DensityReport r;
  r.N = field<std::int64_t>(j, "N");
  r.count = field<std::int64_t>(j, "count");
  for (const auto& e : j.at("running_ratio")) {
    r.running_ratio.emplace_back(e.at("N").get<std::int64_t>(), e.at("ratio").get<double>());
  }
  r.upper_density_proxy = field<double>(j, "upper_density_proxy");
  return r;
}

Json to_json(const odometer::Progression& p) {
  return Json{{"offset", p.offset},
              {"modulus", p.modulus},
              {"density_num", p.density.num},
              {"density_den", p.density.den}};
}

odometer::Progression progression_from_json(const Json& j) {
  odometer::Progression p;
  p.offset = field<std::uint64_t>(j, "offset");
  p.modulus = field<std::uint64_t>(j, "modulus");
  p.density = {field<std::uint64_t>(j, "density_num"), field<std::uint64_t>(j, "density_den")};
  return p;
}

Json to_json(const mapengine::ScreenResult& r) {
  Json orbits = Json::array();
  for (const auto& o : r.orbits) {
    Json pts = Json::array();
    for (const double x : o.points) pts.push_back(round15(x));
    orbits.push_back(Json{{"primitive_period", o.primitive_period}, {"points", pts}});
  }
  return Json{{"verdict", mapengine::to_string(r.verdict)},
              {"witness_period", r.witness_period},
              {"periods_found", r.periods_found},
              {"p_max", r.p_max},
              {"completeness_caveat", r.completeness_caveat},
              {"orbits", orbits}};
}

mapengine::ScreenResult screen_result_from_json(const Json& j) {
  mapengine::ScreenResult r;
  const auto verdict = field<std::string>(j, "verdict");
  if (verdict == "positive-witness") {
    r.verdict = mapengine::ScreenVerdict::positive_witness;
  } else if (verdict == "zero-candidate") {
    r.verdict = mapengine::ScreenVerdict::zero_candidate;
  } else {
    fail(ErrorKind::argument, "unknown screen verdict '" + verdict + "'");
  }
  r.witness_period = field<int>(j, "witness_period");
  r.periods_found = field<std::set<int>>(j, "periods_found");
  r.p_max = field<int>(j, "p_max");
  r.completeness_caveat = field<bool>(j, "completeness_caveat");
  for (const auto& o : j.at("orbits")) {
    r.orbits.push_back({o.at("points").get<std::vector<double>>(),
                        o.at("primitive_period").get<int>()});
  }
  return r;
}

Json to_json(const mapengine::PerronResult& r) {
  return Json{{"e_A", round15(r.value)},
              {"irreducible", r.irreducible},
              {"degenerate", r.degenerate},
              {"iterations", r.iterations}};
}

mapengine::PerronResult perron_result_from_json(const Json& j) {
  return {field<double>(j, "e_A"), field<bool>(j, "irreducible"), field<bool>(j, "degenerate"),
          field<int>(j, "iterations")};
}

Json to_json(const mapengine::CascadeResult& r) {
  Json s = Json::array();
  for (const double v : r.superstable) s.push_back(round15(v));
  Json out{{"parameter", round15(r.parameter)}, {"superstable", s}};
  out["accumulation"] = r.accumulation ? Json(round15(*r.accumulation)) : Json(nullptr);
  return out;
}

mapengine::CascadeResult cascade_result_from_json(const Json& j) {
  mapengine::CascadeResult r;
  r.parameter = field<double>(j, "parameter");
  r.superstable = field<std::vector<double>>(j, "superstable");
  if (!j.at("accumulation").is_null()) r.accumulation = j.at("accumulation").get<double>();
  return r;
}

Json to_json(const tower::Tower& t) {
  Json levels = Json::array();
  for (int n = 1; n <= t.depth(); ++n) {
    Json level = Json::array();
    const auto& intervals = t.level(n);
    for (std::uint64_t k = 0; k < intervals.size(); ++k) {
      level.push_back(Json{{"k", k},
                           {"label", tower::label_of(n, k).to_string()},
                           {"lo", round15(intervals[k].lo)},
                           {"hi", round15(intervals[k].hi)}});
    }
    levels.push_back(level);
  }
  Json out{{"map", t.map.to_string()},
           {"base_point", round15(t.base_point)},
           {"burn_in", t.burn_in},
           {"orbit_length", t.orbit_length},
           {"margin", round15(t.margin)},
           {"requested_depth", t.requested_depth},
           {"phase_origin", t.phase_origin},
           {"depth", t.depth()},
           {"levels", levels}};
  if (t.truncation) {
    out["truncation"] = Json{{"failed_level", t.truncation->failed_level},
                             {"k_a", t.truncation->k_a},
                             {"k_b", t.truncation->k_b},
                             {"overlap", round15(t.truncation->overlap)}};
  } else {
    out["truncation"] = nullptr;
  }
  return out;
}

tower::Tower tower_from_json(const Json& j) {
  tower::Tower t;
  t.map = mapengine::MapSpec::parse(field<std::string>(j, "map"));
  t.base_point = field<double>(j, "base_point");
  t.burn_in = field<std::int64_t>(j, "burn_in");
  t.orbit_length = field<std::int64_t>(j, "orbit_length");
  t.margin = field<double>(j, "margin");
  t.requested_depth = field<int>(j, "requested_depth");
  t.phase_origin = field<std::int64_t>(j, "phase_origin");
  int n = 0;
  for (const auto& level : j.at("levels")) {
    ++n;
    std::vector<mapengine::Interval> intervals(std::size_t{1} << n);
    if (level.size() != intervals.size()) {
      fail(ErrorKind::argument, "tower level " + std::to_string(n) + " must hold 2^n intervals");
    }
    for (const auto& e : level) {
      const auto k = e.at("k").get<std::uint64_t>();
      if (k >= intervals.size()) fail(ErrorKind::argument, "tower interval index out of range");
      intervals[k] = {e.at("lo").get<double>(), e.at("hi").get<double>()};
    }
    t.levels.push_back(std::move(intervals));
  }
  if (!j.at("truncation").is_null()) {
    const auto& tr = j.at("truncation");
    t.truncation = tower::Truncation{tr.at("failed_level").get<int>(),
                                     tr.at("k_a").get<std::uint64_t>(),
                                     tr.at("k_b").get<std::uint64_t>(),
                                     tr.at("overlap").get<double>()};
  }
  return t;
}

Json to_json(const tower::TowerReport& r) {
  Json levels = Json::array();
  for (const auto& l : r.levels) {
    levels.push_back(Json{{"n", l.n},
                          {"pass", l.pass()},
                          {"disjoint", l.disjoint},
                          {"gap_margin", round15(l.gap_margin)},
                          {"cyclic", l.cyclic},
                          {"cyclic_margin", round15(l.cyclic_margin)},
                          {"nested", l.nested},
                          {"nesting_margin", round15(l.nesting_margin)},
                          {"tau", round15(l.tau)},
                          {"degenerate", l.degenerate}});
  }
  return Json{{"all_pass", r.all_pass()},
              {"samples_per_interval", r.samples_per_interval},
              {"levels", levels}};
}

tower::TowerReport tower_report_from_json(const Json& j) {
  tower::TowerReport r;
  r.samples_per_interval = field<int>(j, "samples_per_interval");
  for (const auto& e : j.at("levels")) {
    tower::LevelReport l;
    l.n = e.at("n").get<int>();
    l.disjoint = e.at("disjoint").get<bool>();
    l.gap_margin = e.at("gap_margin").get<double>();
    l.cyclic = e.at("cyclic").get<bool>();
    l.cyclic_margin = e.at("cyclic_margin").get<double>();
    l.nested = e.at("nested").get<bool>();
    l.nesting_margin = e.at("nesting_margin").get<double>();
    l.tau = e.at("tau").get<double>();
    l.degenerate = e.at("degenerate").get<bool>();
    r.levels.push_back(l);
  }
  return r;
}

Json to_json(const tower::Itinerary& it) {
  return Json{{"steps", it.labels.empty() ? 0 : static_cast<std::int64_t>(it.labels.size()) - 1},
              {"depth", it.depth},
              {"entry_time", it.entry_time},
              {"in_tower_steps", it.in_tower_steps},
              {"conjugacy_defect", round15(it.conjugacy_defect)}};
}

tower::Itinerary itinerary_from_json(const Json& j) {
  tower::Itinerary it;
  it.depth = field<int>(j, "depth");
  it.entry_time = field<std::int64_t>(j, "entry_time");
  it.in_tower_steps = field<std::int64_t>(j, "in_tower_steps");
  it.conjugacy_defect = field<double>(j, "conjugacy_defect");
  // Labels are not part of the summary; keep the length so it re-serializes identically.
  it.labels.resize(static_cast<std::size_t>(field<std::int64_t>(j, "steps")) + 1);
  return it;
}

Json to_json(const verifier::ProbeConfig& c) {
  return Json{{"epsilon", round15(c.epsilon)},
              {"delta", round15(c.delta)},
              {"N", c.horizon},
              {"pair_count", c.pair_count},
              {"seed", c.seed},
              {"checkpoints", c.checkpoints}};
}

verifier::ProbeConfig probe_config_from_json(const Json& j) {
  verifier::ProbeConfig c;
  c.epsilon = field<double>(j, "epsilon");
  c.delta = field<double>(j, "delta");
  c.horizon = field<std::int64_t>(j, "N");
  c.pair_count = field<int>(j, "pair_count");
  c.seed = field<std::uint64_t>(j, "seed");
  c.checkpoints = field<int>(j, "checkpoints");
  return c;
}

Json to_json(const verifier::MlsVerdict& v) {
  Json pairs = Json::array();
  for (const auto& p : v.pairs) {
    pairs.push_back(Json{{"u", round15(p.u)},
                         {"v", round15(p.v)},
                         {"bad_set_density", round15(p.bad_set_density)}});
  }
  return Json{{"config", to_json(v.config)},
              {"pairs", pairs},
              {"worst_density", round15(v.worst_density)},
              {"pass", v.pass}};
}

verifier::MlsVerdict mls_verdict_from_json(const Json& j) {
  verifier::MlsVerdict v;
  v.config = probe_config_from_json(j.at("config"));
  for (const auto& p : j.at("pairs")) {
    v.pairs.push_back({p.at("u").get<double>(), p.at("v").get<double>(),
                       p.at("bad_set_density").get<double>()});
  }
  v.worst_density = field<double>(j, "worst_density");
  v.pass = field<bool>(j, "pass");
  return v;
}

Json to_json(const verifier::EquicontinuityResult& r) {
  return Json{{"config", to_json(r.config)},
              {"worst_separation", round15(r.worst_separation)},
              {"u", round15(r.u)},
              {"v", round15(r.v)},
              {"at_time", r.at_time},
              {"pairs_checked", r.pairs_checked}};
}

verifier::EquicontinuityResult equicontinuity_from_json(const Json& j) {
  verifier::EquicontinuityResult r;
  r.config = probe_config_from_json(j.at("config"));
  r.worst_separation = field<double>(j, "worst_separation");
  r.u = field<double>(j, "u");
  r.v = field<double>(j, "v");
  r.at_time = field<std::int64_t>(j, "at_time");
  r.pairs_checked = field<int>(j, "pairs_checked");
  return r;
}

Json to_json(const verifier::AttractionResult& r) {
  return Json{{"z", round15(r.z)},
              {"cesaro_distance", series_to_json(r.cesaro_distance)},
              {"limsup_proxy", round15(r.limsup_proxy)},
              {"attained", r.attained},
              {"entry_time", r.entry_time},
              {"epsilon", round15(r.epsilon)}};
}

verifier::AttractionResult attraction_from_json(const Json& j) {
  verifier::AttractionResult r;
  r.z = field<double>(j, "z");
  r.cesaro_distance = series_from_json(j.at("cesaro_distance"));
  r.limsup_proxy = field<double>(j, "limsup_proxy");
  r.attained = field<bool>(j, "attained");
  r.entry_time = field<std::int64_t>(j, "entry_time");
  r.epsilon = field<double>(j, "epsilon");
  return r;
}

void write_sequence_csv(std::ostream& out, const seqlab::ArithmeticSequence& c) {
  out << "n,re,im\n";
  for (std::int64_t n = 1; n <= c.size(); ++n) {
    out << n << ',' << format15(c(n).real()) << ',' << format15(c(n).imag()) << '\n';
  }
}

seqlab::ArithmeticSequence read_sequence_csv(std::istream& in, std::string label) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,re,im", 0) != 0) {
    fail(ErrorKind::argument, "sequence CSV must start with the header n,re,im");
  }
  std::vector<seqlab::Complex> values;
  std::int64_t expected = 1;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string n_text;
    std::string re_text;
    std::string im_text;
    if (!std::getline(ss, n_text, ',') || !std::getline(ss, re_text, ',') ||
        !std::getline(ss, im_text)) {
      fail(ErrorKind::argument, "malformed sequence CSV row '" + line + "'");
    }
    try {
      if (std::stoll(n_text) != expected) {
        fail(ErrorKind::argument, "sequence CSV indices must run 1, 2, ... without gaps");
      }
      values.emplace_back(std::stod(re_text), std::stod(im_text));
    } catch (const std::logic_error&) {
      fail(ErrorKind::argument, "malformed sequence CSV row '" + line + "'");
    }
    ++expected;
  }
  if (values.empty()) fail(ErrorKind::size, "sequence CSV has no rows");
  seqlab::ArithmeticSequence c{Eigen::VectorXcd(static_cast<Eigen::Index>(values.size())),
                               std::move(label)};
  for (std::size_t i = 0; i < values.size(); ++i) c.values(static_cast<Eigen::Index>(i)) = values[i];
  return c;
}

}  // namespace zeromap::io
