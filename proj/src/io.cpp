#include "frontlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <locale>
#include <sstream>

#include "frontlab/errors.hpp"

namespace frontlab::io {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ConfigError("schema violation at '" + path + "': " + what);
}

const Json& field(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object()) schema_error(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::string sub(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

double number(const Json& j, const std::string& path, const char* key) {
  const Json& v = field(j, path, key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) schema_error(sub(path, key), "expected a number");
  return v.get<double>();
}

std::vector<double> numbers(const Json& j, const std::string& path, const char* key) {
  const Json& v = field(j, path, key);
  if (!v.is_array()) schema_error(sub(path, key), "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_null()) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    if (!v[i].is_number()) schema_error(sub(path, key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::size_t count(const Json& j, const std::string& path, const char* key) {
  const Json& v = field(j, path, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) schema_error(sub(path, key), "expected a non-negative integer");
  return v.get<std::size_t>();
}

std::string text(const Json& j, const std::string& path, const char* key) {
  const Json& v = field(j, path, key);
  if (!v.is_string()) schema_error(sub(path, key), "expected a string");
  return v.get<std::string>();
}

bool boolean(const Json& j, const std::string& path, const char* key) {
  const Json& v = field(j, path, key);
  if (!v.is_boolean()) schema_error(sub(path, key), "expected a boolean");
  return v.get<bool>();
}

// NaN and infinities have no JSON spelling; they are written as null.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json nums(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    rows.push_back(r);
  }
  return rows;
}

Matrix matrix_from(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j[0].size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) schema_error(path, "ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

Potential potential_at(const Json& j, const std::string& path) {
  const std::string kind = text(j, path, "kind");
  const std::size_t d = count(j, path, "d");
  if (d == 0) schema_error(sub(path, "d"), "dimension must be positive");
  const Json& params = field(j, path, "params");
  const std::string pp = sub(path, "params");
  Potential v = Potential::cubic(1.0);
  if (kind == "cubic") {
    if (d != 1) schema_error(sub(path, "d"), "the cubic family is scalar (d = 1)");
    v = Potential::cubic(number(params, pp, "b"));
  } else if (kind == "quartic-saddle") {
    v = Potential::quartic_saddle(numbers(params, pp, "mu"), number(params, pp, "g"));
  } else if (kind == "polynomial") {
    const Json& terms = field(params, pp, "terms");
    if (!terms.is_array()) schema_error(sub(pp, "terms"), "expected an array");
    std::vector<Monomial> mons;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string tp = sub(pp, "terms") + "[" + std::to_string(i) + "]";
      Monomial m;
      m.coef = number(terms[i], tp, "coef");
      const Json& powers = field(terms[i], tp, "powers");
      if (!powers.is_array()) schema_error(sub(tp, "powers"), "expected an array of integers");
      for (const Json& p : powers) {
        if (!p.is_number_integer() || p.get<int>() < 0) schema_error(sub(tp, "powers"), "expected non-negative integers");
        m.powers.push_back(p.get<int>());
      }
      mons.push_back(std::move(m));
    }
    v = Potential::polynomial(d, std::move(mons));
  } else if (kind == "perturbed") {
    const Potential base = potential_at(field(params, pp, "base"), sub(pp, "base"));
    v = build_perturbed(base, number(params, pp, "eps"), number(params, pp, "delta"), number(params, pp, "nu"));
  } else {
    schema_error(sub(path, "kind"), "unknown kind '" + kind + "'");
  }
  if (v.dim() != d) schema_error(sub(path, "d"), "does not match the parameters (" + std::to_string(v.dim()) + ")");
  return v;
}

template <typename E, std::size_t N>
E enum_from(const std::string& name, const std::pair<const char*, E> (&table)[N], const std::string& path) {
  for (const auto& [label, value] : table)
    if (name == label) return value;
  schema_error(path, "unknown label '" + name + "'");
}

constexpr std::pair<const char*, SpeedEvidence> kEvidence[] = {
    {"minus-infinity", SpeedEvidence::MinusInfinity}, {"zero", SpeedEvidence::Zero}};
constexpr std::pair<const char*, DescentStop> kStops[] = {
    {"converged", DescentStop::Converged},
    {"stalled", DescentStop::Stalled},
    {"max-iterations", DescentStop::MaxIterations},
    {"target-reached", DescentStop::TargetReached},
    {"unbounded-below", DescentStop::UnboundedBelow}};
constexpr std::pair<const char*, FrontClass> kClasses[] = {
    {"pushed", FrontClass::Pushed}, {"pulled", FrontClass::Pulled}, {"mild", FrontClass::Mild}};
constexpr std::pair<const char*, CrossingKind> kKinds[] = {
    {"transmit", CrossingKind::Transmit}, {"reflect", CrossingKind::Reflect}};

}  // namespace

const char* nu_status_name(NuStatus s) {
  switch (s) {
    case NuStatus::Ok: return "ok";
    case NuStatus::FailsFirst: return "fails_first";
    case NuStatus::FailsSecond: return "fails_second";
  }
  return "unknown";
}

Potential potential_from_json(const Json& j) { return potential_at(j, ""); }

Json potential_to_json(const Potential& v) {
  Json j;
  j["kind"] = v.kind_name();
  j["d"] = v.dim();
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CubicFamily>) {
          j["params"] = {{"b", k.b}};
        } else if constexpr (std::is_same_v<T, QuarticSaddle>) {
          j["params"] = {{"mu", k.mu}, {"g", k.g}};
        } else if constexpr (std::is_same_v<T, PolynomialPotential>) {
          Json terms = Json::array();
          for (const Monomial& m : k.terms) terms.push_back({{"coef", m.coef}, {"powers", m.powers}});
          j["params"] = {{"terms", terms}};
        } else {
          j["params"] = {{"base", potential_to_json(*k.base)}, {"eps", k.eps}, {"delta", k.delta}, {"nu", k.nu}};
        }
      },
      v.kind());
  return j;
}

Json parse_json_text(std::string_view text, std::string_view origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Translate the byte offset into a line number for the diagnostic.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    std::ostringstream os;
    os << origin << ":" << line << ": invalid JSON (" << e.what() << ")";
    throw ConfigError(os.str());
  }
}

Potential load_potential(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open potential descriptor '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string body = ss.str();
  return potential_from_json(parse_json_text(body, path.string()));
}

Json to_json(const Grid& g) { return {{"xi_min", g.xi_min()}, {"xi_max", g.xi_max()}, {"n", g.n()}}; }

Grid grid_from_json(const Json& j) {
  return Grid(number(j, "grid", "xi_min"), number(j, "grid", "xi_max"), count(j, "grid", "n"));
}

Json to_json(const Profile& p) {
  std::vector<double> vals(p.values().begin(), p.values().end());
  return {{"grid", to_json(p.grid())}, {"d", p.dim()}, {"values", nums(vals)}};
}

Profile profile_from_json(const Json& j) {
  return Profile(grid_from_json(field(j, "profile", "grid")), count(j, "profile", "d"),
                 numbers(j, "profile", "values"));
}

Json to_json(const SpectralReport& r) {
  Json pairs = Json::array();
  for (const RootPair& p : r.lambda_pm)
    pairs.push_back({{"complex", p.complex}, {"first", p.first}, {"second", p.second}});
  return {{"mu", nums(r.mu)},       {"eigenvectors", matrix_json(r.eigenvectors)},
          {"c_lin", r.c_lin},       {"lambda_pm", pairs},
          {"j0", r.j0},             {"dim_hsu", r.dim_hsu},
          {"dim_mu", r.dim_mu}};
}

SpectralReport spectral_report_from_json(const Json& j) {
  SpectralReport r;
  r.mu = numbers(j, "", "mu");
  r.eigenvectors = matrix_from(field(j, "", "eigenvectors"), "eigenvectors");
  r.c_lin = number(j, "", "c_lin");
  for (const Json& p : field(j, "", "lambda_pm"))
    r.lambda_pm.push_back({boolean(p, "lambda_pm", "complex"), number(p, "lambda_pm", "first"),
                           number(p, "lambda_pm", "second")});
  r.j0 = field(j, "", "j0").get<int>();
  r.dim_hsu = field(j, "", "dim_hsu").get<int>();
  r.dim_mu = field(j, "", "dim_mu").get<int>();
  return r;
}

Json to_json(const HypothesisReport& r) {
  return {{"sample_radius", r.sample_radius},
          {"coercivity_ratio_min", num(r.coercivity_ratio_min)},
          {"coercivity_witness", nums(r.coercivity_witness)},
          {"coercive", r.coercive},
          {"value_zero_at_origin", r.value_zero_at_origin},
          {"gradient_zero_at_origin", r.gradient_zero_at_origin},
          {"min_value", num(r.min_value)},
          {"min_witness", nums(r.min_witness)},
          {"critical_point_hypothesis", r.critical_point_hypothesis}};
}

Json to_json(const SpeedProbe& p) {
  return {{"c", p.c},
          {"evidence", to_string(p.evidence)},
          {"energy", num(p.energy)},
          {"iterations", p.iterations},
          {"stop", to_string(p.stop)}};
}

SpeedProbe speed_probe_from_json(const Json& j) {
  SpeedProbe p;
  p.c = number(j, "probe", "c");
  p.evidence = enum_from(text(j, "probe", "evidence"), kEvidence, "probe.evidence");
  p.energy = number(j, "probe", "energy");
  p.iterations = count(j, "probe", "iterations");
  p.stop = enum_from(text(j, "probe", "stop"), kStops, "probe.stop");
  return p;
}

Json to_json(const SpeedEstimate& e) {
  Json probes = Json::array();
  for (const SpeedProbe& p : e.probes) probes.push_back(to_json(p));
  return {{"c_low", e.c_low},
          {"c_high", e.c_high},
          {"c_estimate", e.c_estimate},
          {"tol", e.tol},
          {"evaluations", e.evaluations},
          {"witness", e.witness ? to_json(*e.witness) : Json(nullptr)},
          {"probes", probes}};
}

SpeedEstimate speed_estimate_from_json(const Json& j) {
  SpeedEstimate e;
  e.c_low = number(j, "", "c_low");
  e.c_high = number(j, "", "c_high");
  e.c_estimate = number(j, "", "c_estimate");
  e.tol = number(j, "", "tol");
  e.evaluations = count(j, "", "evaluations");
  const Json& w = field(j, "", "witness");
  if (!w.is_null()) e.witness = profile_from_json(w);
  for (const Json& p : field(j, "", "probes")) e.probes.push_back(speed_probe_from_json(p));
  return e;
}

Json to_json(const TWState& s) { return {{"phi", nums(s.phi)}, {"varphi", nums(s.varphi)}}; }

TWState tw_state_from_json(const Json& j) { return {numbers(j, "state", "phi"), numbers(j, "state", "varphi")}; }

Json to_json(const FrontRecord& r) {
  return {{"c", r.c},
          {"profile", to_json(r.profile)},
          {"steepness", num(r.steepness)},
          {"classification", to_string(r.classification)},
          {"residual", num(r.residual)}};
}

FrontRecord front_record_from_json(const Json& j) {
  return FrontRecord{number(j, "", "c"), profile_from_json(field(j, "", "profile")), number(j, "", "steepness"),
                     enum_from(text(j, "", "classification"), kClasses, "classification"),
                     number(j, "", "residual")};
}

Json to_json(const FrontTrack& t) {
  return {{"times", nums(t.times)},
          {"positions", nums(t.positions)},
          {"speed_fit",
           {{"slope", num(t.speed_fit.slope)},
            {"intercept", num(t.speed_fit.intercept)},
            {"residual", num(t.speed_fit.residual)},
            {"samples", t.speed_fit.samples}}},
          {"edge_lambda", num(t.edge_lambda)}};
}

FrontTrack front_track_from_json(const Json& j) {
  FrontTrack t;
  t.times = numbers(j, "", "times");
  t.positions = numbers(j, "", "positions");
  const Json& f = field(j, "", "speed_fit");
  t.speed_fit = {number(f, "speed_fit", "slope"), number(f, "speed_fit", "intercept"),
                 number(f, "speed_fit", "residual"), count(f, "speed_fit", "samples")};
  t.edge_lambda = number(j, "", "edge_lambda");
  return t;
}

Json to_json(const BarrierCrossing& c) {
  return {{"zeta_cross", c.zeta_cross},
          {"state_minus", to_json(c.state_minus)},
          {"state_plus", to_json(c.state_plus)},
          {"gamma", c.gamma},
          {"kind", to_string(c.kind)},
          {"outward", c.outward}};
}

BarrierCrossing barrier_crossing_from_json(const Json& j) {
  BarrierCrossing c;
  c.zeta_cross = number(j, "crossing", "zeta_cross");
  c.state_minus = tw_state_from_json(field(j, "crossing", "state_minus"));
  c.state_plus = tw_state_from_json(field(j, "crossing", "state_plus"));
  c.gamma = number(j, "crossing", "gamma");
  c.kind = enum_from(text(j, "crossing", "kind"), kKinds, "crossing.kind");
  c.outward = boolean(j, "crossing", "outward");
  return c;
}

Json to_json(const LemmaReport& r) {
  Json checks = Json::array();
  for (const LemmaCheck& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"margin", num(c.margin)}});
  return {{"zeta_cross", r.zeta_cross}, {"checks", checks}, {"all_passed", r.all_passed()}};
}

LemmaReport lemma_report_from_json(const Json& j) {
  LemmaReport r;
  r.zeta_cross = number(j, "", "zeta_cross");
  for (const Json& c : field(j, "", "checks"))
    r.checks.push_back({text(c, "checks", "name"), boolean(c, "checks", "passed"), number(c, "checks", "margin")});
  return r;
}

Json to_json(const RenormSequence& s) {
  Json rows = Json::array();
  for (const SequenceRow& r : s.rows)
    rows.push_back({{"n", r.n}, {"eps", r.eps}, {"delta", r.delta}, {"speed", to_json(r.speed)}});
  return {{"nu", s.nu}, {"c_lin", s.c_lin}, {"rows", rows}};
}

RenormSequence renorm_sequence_from_json(const Json& j) {
  RenormSequence s;
  s.nu = number(j, "", "nu");
  s.c_lin = number(j, "", "c_lin");
  for (const Json& r : field(j, "", "rows"))
    s.rows.push_back({field(r, "rows", "n").get<int>(), number(r, "rows", "eps"), number(r, "rows", "delta"),
                      speed_estimate_from_json(field(r, "rows", "speed"))});
  return s;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string join_row(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += format_double(xs[i]);
  }
  s += '\n';
  return s;
}

std::string indexed_header(const char* first, const char* stem, std::size_t d) {
  std::string h = first;
  for (std::size_t j = 1; j <= d; ++j) h += std::string(",") + stem + std::to_string(j);
  return h;
}

}  // namespace

std::string profile_csv(const Profile& p) {
  std::string out = indexed_header("xi", "phi", p.dim()) + "\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<double> row{p.grid().at(i)};
    row.insert(row.end(), p.at(i).begin(), p.at(i).end());
    out += join_row(row);
  }
  return out;
}

std::string probes_csv(const std::vector<SpeedProbe>& probes) {
  std::string out = "c,energy,iterations,evidence_label\n";
  for (const SpeedProbe& p : probes)
    out += format_double(p.c) + "," + format_double(p.energy) + "," + std::to_string(p.iterations) + "," +
           to_string(p.evidence) + "\n";
  return out;
}

std::string snapshot_csv(const Grid& x, std::size_t d, const Snapshot& s) {
  std::string out = indexed_header("x", "u", d) + "\n";
  for (std::size_t i = 0; i < x.n(); ++i) {
    std::vector<double> row{x.at(i)};
    row.insert(row.end(), s.u.begin() + static_cast<std::ptrdiff_t>(i * d),
               s.u.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
    out += join_row(row);
  }
  return out;
}

std::string track_csv(const FrontTrack& t) {
  std::string out = "t,position\n";
  for (std::size_t k = 0; k < t.times.size(); ++k) out += join_row({t.times[k], t.positions[k]});
  return out;
}

std::string trajectory_csv(const BarrierTrajectory& t) {
  const std::size_t d = t.states.empty() ? 0 : t.states.front().phi.size();
  std::string out = indexed_header("zeta", "psi", d);
  for (std::size_t j = 1; j <= d; ++j) out += ",dpsi" + std::to_string(j);
  out += ",region\n";
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    std::vector<double> row{t.zeta[k]};
    row.insert(row.end(), t.states[k].phi.begin(), t.states[k].phi.end());
    row.insert(row.end(), t.states[k].varphi.begin(), t.states[k].varphi.end());
    std::string line = join_row(row);
    line.pop_back();
    out += line + (t.inside[k] ? ",inside\n" : ",outside\n");
  }
  return out;
}

std::string sequence_csv(const RenormSequence& s) {
  std::string out = "n,eps_n,delta_n,c_n,c_low,c_high\n";
  for (const SequenceRow& r : s.rows)
    out += std::to_string(r.n) + "," + format_double(r.eps) + "," + format_double(r.delta) + "," +
           format_double(r.speed.c_estimate) + "," + format_double(r.speed.c_low) + "," +
           format_double(r.speed.c_high) + "\n";
  return out;
}

std::string svg_polyline(const std::vector<double>& x, const std::vector<double>& y, int width, int height) {
  if (x.size() != y.size()) throw DimensionError("svg_polyline: length mismatch");
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (!x.empty()) {
    const auto [xa, xb] = std::minmax_element(x.begin(), x.end());
    const auto [ya, yb] = std::minmax_element(y.begin(), y.end());
    x0 = *xa;
    x1 = *xb > *xa ? *xb : *xa + 1.0;
    y0 = *ya;
    y1 = *yb > *ya ? *yb : *ya + 1.0;
  }
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
     << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  os << std::setprecision(6);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double px = (x[k] - x0) / (x1 - x0) * width;
    const double py = height - (y[k] - y0) / (y1 - y0) * height;
    os << (k ? " " : "") << px << ',' << py;
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ConfigError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunManifest make_manifest(std::string command, Json config, std::vector<std::string> outputs) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
  return RunManifest{std::move(command), std::move(config), buf, std::move(outputs)};
}

Json to_json(const RunManifest& m) {
  return {{"command", m.command}, {"config", m.config}, {"input_hash", m.input_hash}, {"outputs", m.outputs}};
}

RunManifest manifest_from_json(const Json& j) {
  RunManifest m;
  m.command = text(j, "", "command");
  m.config = field(j, "", "config");
  m.input_hash = text(j, "", "input_hash");
  for (const Json& o : field(j, "", "outputs")) m.outputs.push_back(o.get<std::string>());
  return m;
}

}  // namespace frontlab::io
