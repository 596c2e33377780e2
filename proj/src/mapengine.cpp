#include "zeromap/mapengine.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace zeromap::mapengine {

namespace {

constexpr int kInvarianceSamples = 4097;
constexpr double kInvarianceSlack = 1e-12;

// Shortest representation that parses back to the same double.
std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::argument, "cannot parse " + what + " from '" + s + "'");
  }
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, what));
  return out;
}

Interval parse_domain(const std::string& s) {
  if (s.size() < 5 || s.front() != '[' || s.back() != ']') {
    fail(ErrorKind::argument, "domain must look like [a,b], got '" + s + "'");
  }
  const auto values = parse_list(s.substr(1, s.size() - 2), "domain");
  if (values.size() != 2 || !(values[0] < values[1])) {
    fail(ErrorKind::argument, "domain must be [a,b] with a < b");
  }
  return {values[0], values[1]};
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::logistic: return "logistic";
    case Family::tent: return "tent";
    case Family::quadratic: return "quadratic";
    case Family::piecewise_linear: return "piecewise-linear";
  }
  return "unknown";
}

const char* to_string(ScreenVerdict v) {
  return v == ScreenVerdict::positive_witness ? "positive-witness" : "zero-candidate";
}

MapSpec::MapSpec(Family family, std::vector<double> params, Interval domain)
    : family_(family), params_(std::move(params)), domain_(domain) {
  for (const double p : params_) {
    if (!std::isfinite(p)) fail(ErrorKind::argument, "map parameters must be finite");
  }
  if (!(domain_.lo < domain_.hi)) fail(ErrorKind::argument, "empty map domain");
  check_invariance();
}

void MapSpec::check_invariance() const {
  const double slack = kInvarianceSlack * std::max(1.0, domain_.length());
  for (int i = 0; i < kInvarianceSamples; ++i) {
    const double x = domain_.lo + domain_.length() * i / (kInvarianceSamples - 1);
    const double y = evaluate(x);
    if (!(y >= domain_.lo - slack && y <= domain_.hi + slack)) {
      fail(ErrorKind::domain, to_string() + " does not map its domain into itself (f(" +
                                  format_number(x) + ") = " + format_number(y) + ")");
    }
  }
  if (const auto c = critical_point()) {
    const double y = evaluate(*c);
    if (!(y >= domain_.lo - slack && y <= domain_.hi + slack)) {
      fail(ErrorKind::domain, to_string() + " sends its critical point outside the domain");
    }
  }
}

MapSpec MapSpec::logistic(double r) {
  if (!(r >= 0.0 && r <= 4.0)) {
    fail(ErrorKind::domain, "logistic parameter r must lie in [0, 4]");
  }
  return {Family::logistic, {r}, {0.0, 1.0}};
}

MapSpec MapSpec::tent(double s) {
  if (!(s >= 0.0 && s <= 2.0)) fail(ErrorKind::domain, "tent slope must lie in [0, 2]");
  return {Family::tent, {s}, {0.0, 1.0}};
}

MapSpec MapSpec::quadratic(double c) {
  if (!(c >= -2.0 && c <= 0.25)) {
    fail(ErrorKind::domain, "quadratic parameter c must lie in [-2, 1/4]");
  }
  const double beta = 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * c));
  return {Family::quadratic, {c}, {-beta, beta}};
}

MapSpec MapSpec::piecewise_linear(std::vector<double> values, Interval domain) {
  if (values.size() < 2) {
    fail(ErrorKind::argument, "piecewise-linear map needs at least two node values");
  }
  return {Family::piecewise_linear, std::move(values), domain};
}

MapSpec MapSpec::parse(const std::string& text) {
  std::istringstream in(text);
  std::string family;
  in >> family;
  if (family.empty()) fail(ErrorKind::argument, "empty map specification");

  std::optional<Interval> domain;
  std::optional<std::string> value_key;
  std::string value_text;
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::argument, "expected key=value in map spec, got '" + token + "'");
    }
    const std::string key = token.substr(0, eq);
    const std::string val = token.substr(eq + 1);
    if (key == "domain") {
      domain = parse_domain(val);
    } else if (!value_key) {
      value_key = key;
      value_text = val;
    } else {
      fail(ErrorKind::argument, "unexpected map parameter '" + key + "'");
    }
  }

  auto expect_key = [&](const char* key) {
    if (!value_key || *value_key != key) {
      fail(ErrorKind::argument, family + " map needs parameter " + key + "=...");
    }
  };
  auto expect_default_domain = [&](const MapSpec& m) {
    if (domain && !(*domain == m.domain())) {
      fail(ErrorKind::argument, family + " map has fixed domain " +
                                    m.to_string().substr(m.to_string().find("domain=")));
    }
    return m;
  };

  if (family == "logistic") {
    expect_key("r");
    return expect_default_domain(logistic(parse_number(value_text, "r")));
  }
  if (family == "tent") {
    expect_key("s");
    return expect_default_domain(tent(parse_number(value_text, "s")));
  }
  if (family == "quadratic") {
    expect_key("c");
    return expect_default_domain(quadratic(parse_number(value_text, "c")));
  }
  if (family == "piecewise-linear") {
    expect_key("y");
    return piecewise_linear(parse_list(value_text, "y"), domain.value_or(Interval{0.0, 1.0}));
  }
  fail(ErrorKind::argument, "unknown map family '" + family + "'");
}

std::string MapSpec::to_string() const {
  std::string out = mapengine::to_string(family_);
  switch (family_) {
    case Family::logistic: out += " r=" + format_number(params_[0]); break;
    case Family::tent: out += " s=" + format_number(params_[0]); break;
    case Family::quadratic: out += " c=" + format_number(params_[0]); break;
    case Family::piecewise_linear: {
      out += " y=";
      for (std::size_t i = 0; i < params_.size(); ++i) {
        if (i > 0) out += ',';
        out += format_number(params_[i]);
      }
      break;
    }
  }
  out += " domain=[" + format_number(domain_.lo) + "," + format_number(domain_.hi) + "]";
  return out;
}

std::optional<double> MapSpec::critical_point() const {
  switch (family_) {
    case Family::logistic:
    case Family::tent: return 0.5;
    case Family::quadratic: return 0.0;
    case Family::piecewise_linear: return std::nullopt;
  }
  return std::nullopt;
}

Eigen::VectorXd iterate(const MapSpec& f, double x, std::int64_t n) {
  if (n < 0) fail(ErrorKind::argument, "iterate: n must be >= 0");
  if (!f.domain().contains(x)) {
    fail(ErrorKind::domain, "iterate: x = " + format_number(x) + " is outside the domain");
  }
  Eigen::VectorXd orbit(n + 1);
  orbit(0) = x;
  for (std::int64_t i = 1; i <= n; ++i) orbit(i) = f(orbit(i - 1));
  return orbit;
}

std::set<int> PeriodicOrbitSet::periods() const {
  std::set<int> out;
  for (const auto& o : orbits) out.insert(o.primitive_period);
  return out;
}

PeriodicOrbitSet periodic_points(const MapSpec& f, int p, int grid, double tol) {
  if (p < 1) fail(ErrorKind::argument, "periodic_points: p must be >= 1");
  if (grid < 2) fail(ErrorKind::argument, "periodic_points: grid must be >= 2");
  if (!(tol > 0.0)) fail(ErrorKind::argument, "periodic_points: tol must be > 0");

  const auto g = [&](double x) { return compose(f, x, p) - x; };
  const Interval dom = f.domain();
  const auto node = [&](int i) {
    return i == grid ? dom.hi : dom.lo + dom.length() * i / grid;
  };

  std::vector<double> values(static_cast<std::size_t>(grid) + 1);
  for (int i = 0; i <= grid; ++i) values[static_cast<std::size_t>(i)] = g(node(i));

  PeriodicOrbitSet out;
  out.search_period = p;
  out.tolerance = tol;
  out.match_tolerance = std::max(std::sqrt(tol), 100.0 * tol);

  // Brackets are scanned left to right, so roots come out sorted.
  std::vector<double> roots;
  for (int i = 0; i < grid; ++i) {
    const double gl = values[static_cast<std::size_t>(i)];
    const double gr = values[static_cast<std::size_t>(i) + 1];
    if (gl == 0.0) {
      roots.push_back(node(i));
      continue;
    }
    if (gr == 0.0 || std::signbit(gl) == std::signbit(gr)) continue;
    double lo = node(i);
    double hi = node(i + 1);
    const bool rising = gl < 0.0;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      ((g(mid) < 0.0) == rising ? lo : hi) = mid;
    }
    roots.push_back(0.5 * (lo + hi));
  }
  if (values.back() == 0.0) roots.push_back(dom.hi);

  for (int i = 1; i < grid; ++i) {
    const double a = values[static_cast<std::size_t>(i) - 1];
    const double b = values[static_cast<std::size_t>(i)];
    const double c = values[static_cast<std::size_t>(i) + 1];
    const bool same_sign = b != 0.0 && std::signbit(a) == std::signbit(b) &&
                           std::signbit(b) == std::signbit(c) && a != 0.0 && c != 0.0;
    if (same_sign && std::abs(b) < std::abs(a) && std::abs(b) <= std::abs(c) &&
        std::abs(b) < std::max(std::abs(a - b), std::abs(c - b))) {
      out.completeness_caveat = true;
      break;
    }
  }

  std::vector<double> unique_roots;
  for (const double r : roots) {
    if (unique_roots.empty() || r - unique_roots.back() > 10.0 * tol) {
      unique_roots.push_back(r);
    }
  }

  std::vector<int> divisors;
  for (int d = 1; d <= p; ++d) {
    if (p % d == 0) divisors.push_back(d);
  }

  std::vector<bool> assigned(unique_roots.size(), false);
  const auto nearest_root = [&](double y) -> std::optional<std::size_t> {
    auto it = std::lower_bound(unique_roots.begin(), unique_roots.end(), y);
    std::optional<std::size_t> best;
    double best_d = out.match_tolerance;
    for (auto cand : {it, it == unique_roots.begin() ? it : std::prev(it)}) {
      if (cand == unique_roots.end()) continue;
      const double d = std::abs(*cand - y);
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::size_t>(cand - unique_roots.begin());
      }
    }
    return best;
  };

  for (std::size_t i = 0; i < unique_roots.size(); ++i) {
    if (assigned[i]) continue;
    const double x = unique_roots[i];
    int q = p;
    for (const int d : divisors) {
      if (std::abs(compose(f, x, d) - x) < out.match_tolerance) {
        q = d;
        break;
      }
    }
    PeriodicOrbit orbit;
    orbit.primitive_period = q;
    double y = x;
    for (int m = 0; m < q; ++m) {
      if (const auto j = nearest_root(y)) {
        assigned[*j] = true;
        orbit.points.push_back(unique_roots[*j]);
      } else {
        orbit.points.push_back(y);
      }
      y = f(y);
    }
    assigned[i] = true;
    out.orbits.push_back(std::move(orbit));
  }
  return out;
}

bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

ScreenResult entropy_screen(const MapSpec& f, int p_max, int grid, double tol) {
  if (p_max < 3) fail(ErrorKind::argument, "entropy_screen: p_max must be >= 3");
  ScreenResult out;
  out.p_max = p_max;
  for (int p = 1; p <= p_max; ++p) {
    const auto set = periodic_points(f, p, grid, tol);
    const auto periods = set.periods();
    out.periods_found.insert(periods.begin(), periods.end());
    out.completeness_caveat = out.completeness_caveat || set.completeness_caveat;
    for (const auto& orbit : set.orbits) {
      if (orbit.primitive_period == p) out.orbits.push_back(orbit);
    }
  }
  for (const int q : out.periods_found) {
    if (!is_power_of_two(q)) {
      out.verdict = ScreenVerdict::positive_witness;
      out.witness_period = q;
      break;
    }
  }
  return out;
}

TransitionMatrix::TransitionMatrix(Eigen::MatrixXi entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    fail(ErrorKind::argument, "transition matrix must be square with d >= 1");
  }
  if ((entries_.array() != 0 && entries_.array() != 1).any()) {
    fail(ErrorKind::argument, "transition matrix entries must be 0 or 1");
  }
}

TransitionMatrix TransitionMatrix::parse(const std::string& text) {
  std::vector<std::string> rows;
  std::string row;
  for (const char ch : text) {
    if (ch == '\n' || ch == ';' || ch == ',') {
      if (!row.empty()) rows.push_back(row);
      row.clear();
    } else if (ch == '0' || ch == '1') {
      row += ch;
    } else if (ch != ' ' && ch != '\r' && ch != '\t') {
      fail(ErrorKind::argument, std::string("unexpected character '") + ch +
                                    "' in transition matrix");
    }
  }
  if (!row.empty()) rows.push_back(row);
  const auto d = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXi m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != d) {
      fail(ErrorKind::argument, "transition matrix rows must all have length d");
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - '0';
    }
  }
  return TransitionMatrix(std::move(m));
}

std::string TransitionMatrix::to_string() const {
  std::string out;
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    if (i > 0) out += '\n';
    for (Eigen::Index j = 0; j < entries_.cols(); ++j) out += entries_(i, j) ? '1' : '0';
  }
  return out;
}

std::vector<std::vector<int>> strongly_connected_components(const Eigen::MatrixXi& A) {
  // Boolean transitive closure; d is small for the matrices handled here.
  const auto d = A.rows();
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> reach = (A.array() != 0).matrix();
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!reach(i, k)) continue;
      for (Eigen::Index j = 0; j < d; ++j) reach(i, j) = reach(i, j) || reach(k, j);
    }
  }
  std::vector<int> component(static_cast<std::size_t>(d), -1);
  std::vector<std::vector<int>> out;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (component[static_cast<std::size_t>(i)] >= 0) continue;
    std::vector<int> members{static_cast<int>(i)};
    component[static_cast<std::size_t>(i)] = static_cast<int>(out.size());
    for (Eigen::Index j = i + 1; j < d; ++j) {
      if (reach(i, j) && reach(j, i)) {
        members.push_back(static_cast<int>(j));
        component[static_cast<std::size_t>(j)] = static_cast<int>(out.size());
      }
    }
    out.push_back(std::move(members));
  }
  return out;
}

PerronResult perron_eigenvalue(const TransitionMatrix& A, double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::argument, "perron_eigenvalue: tol must be > 0");
  const Eigen::MatrixXi& a = A.entries();
  PerronResult out;
  if ((a.array() == 0).all()) {
    out.degenerate = true;
    return out;
  }

  const auto components = strongly_connected_components(a);
  out.irreducible = components.size() == 1 && (a.rows() > 1 || a(0, 0) == 1);

  constexpr int kMaxIterations = 1'000'000;
  for (const auto& members : components) {
    const auto size = static_cast<Eigen::Index>(members.size());
    Eigen::MatrixXd block(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      for (Eigen::Index j = 0; j < size; ++j) {
        block(i, j) = a(members[static_cast<std::size_t>(i)],
                        members[static_cast<std::size_t>(j)]);
      }
    }
    if (size == 1 && block(0, 0) == 0.0) continue;  // transient state, eigenvalue 0

    // The identity shift makes the irreducible block primitive, so the
    // iteration converges even for periodic blocks; ρ(B) = e + 1.
    block.diagonal().array() += 1.0;
    Eigen::VectorXd v = Eigen::VectorXd::Ones(size);
    double estimate = 0.0;
    for (int it = 1; it <= kMaxIterations; ++it) {
      const Eigen::VectorXd w = block * v;
      // Collatz–Wielandt: min_i w_i/v_i <= ρ <= max_i w_i/v_i for positive v.
      const Eigen::ArrayXd ratio = w.array() / v.array();
      const double lo = ratio.minCoeff();
      const double hi = ratio.maxCoeff();
      estimate = 0.5 * (lo + hi);
      out.iterations = std::max(out.iterations, it);
      if (hi - lo <= tol * hi) break;
      v = w / w.maxCoeff();
    }
    out.value = std::max(out.value, estimate - 1.0);
  }
  return out;
}

CascadeResult locate_cascade_parameter(int k, double tol) {
  if (k < 0) fail(ErrorKind::argument, "locate_cascade_parameter: k must be >= 0");
  if (k > kMaxCascadeLevel) {
    fail(ErrorKind::argument, "locate_cascade_parameter: k above 16 is beyond double precision");
  }
  if (!(tol > 0.0)) fail(ErrorKind::argument, "locate_cascade_parameter: tol must be > 0");

  const auto residual = [](double r, int level) {
    const auto f = MapSpec::logistic(r);
    return compose(f, 0.5, std::int64_t{1} << level) - 0.5;
  };
  const auto bisect = [&](double lo, double hi, int level) {
    double glo = residual(lo, level);
    const double ghi = residual(hi, level);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if (std::signbit(glo) == std::signbit(ghi)) return std::nan("");
    for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double gm = residual(mid, level);
      if (gm == 0.0) return mid;
      if (std::signbit(gm) == std::signbit(glo)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  // Period-doubling ratio used only to place the bracket for the next level.
  constexpr double kBracketRatio = 4.669;
  CascadeResult out;
  for (int level = 0; level <= k; ++level) {
    std::vector<std::pair<double, double>> brackets;
    if (level == 0) {
      brackets = {{1.0, 3.0}};
    } else if (level == 1) {
      brackets = {{2.5, 3.4}};
    } else {
      const double prev = out.superstable[static_cast<std::size_t>(level) - 1];
      const double gap =
          (prev - out.superstable[static_cast<std::size_t>(level) - 2]) / kBracketRatio;
      brackets = {{prev + 0.5 * gap, prev + 1.5 * gap}, {prev + 0.25 * gap, prev + 2.0 * gap}};
    }
    double root = std::nan("");
    for (const auto& [lo, hi] : brackets) {
      root = bisect(lo, hi, level);
      if (!std::isnan(root)) break;
    }
    if (std::isnan(root)) {
      fail(ErrorKind::search, "no sign change of f^(2^" + std::to_string(level) +
                                  ")(1/2) - 1/2 on [" + format_number(brackets.back().first) +
                                  ", " + format_number(brackets.back().second) + "]");
    }
    out.superstable.push_back(root);
  }
  out.parameter = out.superstable.back();
  if (k >= 2) {
    const double d1 = out.superstable[static_cast<std::size_t>(k) - 1] -
                      out.superstable[static_cast<std::size_t>(k) - 2];
    const double d2 = out.parameter - out.superstable[static_cast<std::size_t>(k) - 1];
    const double ratio = d1 / d2;
    out.accumulation = out.parameter + d2 / (ratio - 1.0);
  }
  return out;
}

}  // namespace zeromap::mapengine
