#pragma once

// Command-line surface. run() parses argv with CLI11 and dispatches; it never calls exit(), so tests can
// drive it with captured streams. Exit codes: 0 success, 1 violated claim, 2 usage error, 3 numerical failure.

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <thread>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "btmodel.hpp"
#include "dcurve.hpp"
#include "largeM.hpp"
#include "loopcert.hpp"
#include "shooting.hpp"

namespace saddleloop::cli {

enum ExitCode { kOk = 0, kViolation = 1, kUsage = 2, kNumerical = 3 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string subcommand;
  std::optional<std::string> m, m_from, m_to, step, b, s, interval;
  int N = 1;
  std::string alpha = "51/40";
  std::vector<std::string> Ms;
  double tol = 1e-8;
  int order = 4;
  std::string kind;
  std::string out, svg;
  std::string format = "csv";
  unsigned jobs = 0;
  bool full_proof = false, no_header = false;
  std::optional<std::string> cache_dir;  // defaults to $SADDLELOOP_CACHE_DIR
};

// ---------------------------------------------------------------- tables

using Cell = std::variant<std::monostate, std::string, double, long, BigRational, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string cell_text(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const { return shortest(d); }
    std::string operator()(long k) const { return std::to_string(k); }
    std::string operator()(const BigRational& q) const { return to_fraction(q); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(V{}, c);
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
  struct V {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(double d) const { return std::isfinite(d) ? nlohmann::ordered_json(d) : nlohmann::ordered_json(shortest(d)); }
    nlohmann::ordered_json operator()(long k) const { return k; }
    nlohmann::ordered_json operator()(const BigRational& q) const { return to_fraction(q); }
    nlohmann::ordered_json operator()(bool b) const { return b; }
  };
  return std::visit(V{}, c);
}

inline std::string timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline std::string render_csv(const Table& t, const RunConfig& cfg) {
  std::ostringstream os;
  if (!cfg.no_header) os << "# saddleloop " << cfg.subcommand << " " << timestamp() << "\r\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << "\r\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(r[i]));
    os << "\r\n";
  }
  return os.str();
}

inline nlohmann::ordered_json table_json(const Table& t) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json o;
    for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = cell_json(r[i]);
    rows.push_back(o);
  }
  return rows;
}

inline std::string render_json(nlohmann::ordered_json body, const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["command"] = cfg.subcommand;
  if (!cfg.no_header) j["generated"] = timestamp();
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  return j.dump(2) + "\n";
}

inline void emit(const std::string& text, const RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + cfg.out);
  f << text;
}

inline void emit_table(const Table& t, const RunConfig& cfg, std::ostream& out, nlohmann::ordered_json extra = nlohmann::ordered_json::object()) {
  if (cfg.format == "json") {
    extra["rows"] = table_json(t);
    emit(render_json(extra, cfg), cfg, out);
  } else {
    emit(render_csv(t, cfg), cfg, out);
  }
}

// ---------------------------------------------------------------- SVG

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Plain polylines in a box with axis labels and min/max ticks.
inline std::string render_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel, const std::vector<Series>& series) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  if (!(x0 < x1)) x0 -= 1, x1 += 1;
  if (!(y0 < y1)) y0 -= 1, y1 += 1;
  const double W = 640, H = 420, L = 70, R = 150, T = 40, Bm = 50;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - Bm - (y - y0) / (y1 - y0) * (H - T - Bm); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - Bm << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - Bm) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (T + H - Bm) / 2 << ")\">" << ylabel << "</text>\n";
  os << "<text x=\"" << L << "\" y=\"" << H - Bm + 16 << "\" text-anchor=\"middle\">" << shortest(x0) << "</text>\n";
  os << "<text x=\"" << W - R << "\" y=\"" << H - Bm + 16 << "\" text-anchor=\"middle\">" << shortest(x1) << "</text>\n";
  os << "<text x=\"" << L - 6 << "\" y=\"" << H - Bm << "\" text-anchor=\"end\">" << shortest(y0) << "</text>\n";
  os << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\">" << shortest(y1) << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* c = colors[i % 5];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[i].points)
      if (std::isfinite(x) && std::isfinite(y)) os << px(x) << "," << py(y) << " ";
    os << "\"/>\n";
    double ly = T + 14 + 18 * static_cast<double>(i);
    os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R + 36 << "\" y=\"" << ly << "\">" << series[i].name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------- helpers

inline BigRational parse_q(const std::string& text, const std::string& what) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw UsageError("--" + what + ": not a rational number: " + text);
  }
}

inline std::vector<BigRational> grid(const RunConfig& c, const std::optional<BigRational>& dfrom, const std::optional<BigRational>& dto,
                                     const std::optional<BigRational>& dstep) {
  if (c.m) return {parse_q(*c.m, "m")};
  if (!(c.m_from || dfrom) || !(c.m_to || dto) || !(c.step || dstep)) throw UsageError("give --m or --m-from, --m-to and --step");
  BigRational a = c.m_from ? parse_q(*c.m_from, "m-from") : *dfrom, b = c.m_to ? parse_q(*c.m_to, "m-to") : *dto;
  BigRational h = c.step ? parse_q(*c.step, "step") : *dstep;
  if (sgn(h) <= 0) throw UsageError("--step must be positive");
  if (sgn(a) <= 0) throw UsageError("the m range must lie in (0, infinity)");
  if (a > b) throw UsageError("empty m range");
  std::vector<BigRational> g;
  for (BigRational m = a; m <= b; m += h) {
    g.push_back(m);
    if (g.size() > 100000) throw UsageError("m range has more than 100000 points");
  }
  return g;
}

inline IntegratorConfig integrator_for(double tol) {
  IntegratorConfig c;
  // the split must be resolved well below the bisection tolerance
  c.rtol = std::min(1e-10, std::max(1e-13, tol / 100));
  c.atol = c.rtol / 100;
  return c;
}

// ---------------------------------------------------------------- subcommands

struct BStarRow {
  BigRational m;
  BoundsPair bounds;
  std::optional<BStarEstimate> est;
  std::string error;
  bool violation = false;
};

inline std::vector<BStarRow> bstar_rows(const std::vector<BigRational>& ms, double tol, unsigned jobs) {
  IntegratorConfig ic = integrator_for(tol);
  return parallel_map<BStarRow>(ms.size(), jobs, [&](std::size_t i) {
    BStarRow r{ms[i], bounds_pair(ms[i]), std::nullopt, "", false};
    try {
      r.est = estimate_bstar(to_double(ms[i]), tol, ic);
      BigRational b = from_double(r.est->bstar);
      r.violation = !(r.bounds.b_lower < b && b < r.bounds.b_upper);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    return r;
  });
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  auto ms = grid(c, std::nullopt, std::nullopt, std::nullopt);
  if (!(c.tol > 0)) throw UsageError("--tol must be positive");
  auto rows = bstar_rows(ms, c.tol, c.jobs);
  Table t{{"m", "b_lower", "b_star", "b_upper", "half_gap", "melnikov4", "iterations", "residual", "status"}, {}};
  bool violation = false, failure = false;
  BigRational best = -1, arg;
  for (const auto& r : rows) {
    std::vector<Cell> row{to_double(r.m), to_double(r.bounds.b_lower)};
    row.push_back(r.est ? Cell(r.est->bstar) : Cell());
    row.push_back(to_double(r.bounds.b_upper));
    row.push_back(r.bounds.half_gap());
    row.push_back(r.m <= 1 ? Cell(melnikov_series(to_double(r.m)).value) : Cell());
    row.push_back(r.est ? Cell(static_cast<long>(r.est->iterations)) : Cell());
    row.push_back(r.est ? Cell(r.est->residual) : Cell());
    row.push_back(r.est ? std::string(r.violation ? "violation" : "ok") : "failed: " + r.error);
    t.rows.push_back(std::move(row));
    violation = violation || r.violation;
    failure = failure || !r.est;
    if (r.bounds.half_gap() > best) best = r.bounds.half_gap(), arg = r.m;
  }
  emit_table(t, c, out);
  err << rows.size() << " rows; largest half-gap " << to_fraction(best) << " at m = " << to_fraction(arg) << "\n";
  if (violation) {
    err << "b* left the proven bounds\n";
    return kViolation;
  }
  return failure ? kNumerical : kOk;
}

inline int cmd_bstar(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.m) throw UsageError("bstar needs --m");
  RunConfig one = c;
  one.m_from = one.m_to = one.step = std::nullopt;
  return cmd_sweep(one, out, err);
}

inline int cmd_bounds(const RunConfig& c, std::ostream& out, std::ostream& err) {
  auto ms = grid(c, std::nullopt, std::nullopt, std::nullopt);
  Table t{{"m", "b_lower", "b_upper", "hopf", "half_gap", "relative_half_gap"}, {}};
  BigRational best = -1, arg, best_rel = -1, arg_rel;
  for (const auto& m : ms) {
    BoundsPair b = bounds_pair(m);
    BigRational h = b.half_gap(), rel = h / b.b_lower;
    t.rows.push_back({to_double(m), to_double(b.b_lower), to_double(b.b_upper), to_double(m), h, rel});
    if (h > best) best = h, arg = m;
    if (rel > best_rel) best_rel = rel, arg_rel = m;
  }
  nlohmann::ordered_json extra;
  extra["max_half_gap"] = {{"value", to_fraction(best)}, {"m", to_fraction(arg)}};
  extra["max_relative_half_gap"] = {{"value", to_fraction(best_rel)}, {"m", to_fraction(arg_rel)}};
  emit_table(t, c, out, extra);
  err << "largest half-gap " << to_fraction(best) << " at m = " << to_fraction(arg) << "; relative " << to_fraction(best_rel) << " at m = "
      << to_fraction(arg_rel) << "\n";
  return kOk;
}

inline std::pair<BigRational, BigRational> parse_interval(const std::string& text) {
  auto k = text.find("..");
  if (k == std::string::npos) throw UsageError("--interval expects a..b");
  return {parse_q(text.substr(0, k), "interval"), parse_q(text.substr(k + 2), "interval")};
}

inline int cmd_certify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.N != 1 && c.N != 2) throw UsageError("--N must be 1 or 2");
  if (c.s.has_value() == c.interval.has_value()) throw UsageError("certify needs exactly one of --s and --interval");
  Certificate cert;
  if (c.s) {
    BigRational s = parse_q(*c.s, "s");
    if (!(sgn(s) > 0 && s < 7)) throw UsageError("--s must lie in (0, 7)");
    cert = certify_at_s(c.N, s);
  } else {
    if (!c.full_proof) throw UsageError("interval certification is long-running; pass --full-proof to run it");
    auto [a, b] = parse_interval(*c.interval);
    if (!(sgn(a) >= 0 && a < b && b < 7)) throw UsageError("--interval must lie in (0, 7)");
    IntervalOptions opt;
    opt.cache_dir = c.cache_dir;
    opt.jobs = static_cast<int>(c.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : c.jobs);
    opt.progress = [&err](const std::string& msg) { err << "[certify] " << msg << "\n"; };
    cert = certify_interval(c.N, a, b, opt);
  }
  if (c.format == "csv") {
    Table t{{"check", "status", "detail"}, {}};
    for (const auto& k : cert.checks) t.rows.push_back({k.name, std::string(k.pass ? "pass" : "fail"), k.detail});
    for (const auto& smp : cert.samples)
      for (const auto& k : smp.checks) t.rows.push_back({smp.scope + " " + k.name, std::string(k.pass ? "pass" : "fail"), k.detail});
    emit(render_csv(t, c), c, out);
  } else {
    emit(render_json(nlohmann::ordered_json{{"certificate", to_json(cert)}}, c), c, out);
  }
  if (cert.pass()) {
    err << "N = " << cert.N << ", " << cert.scope << ": pass (" << cert.checks.size() << " checks)\n";
    return kOk;
  }
  err << "N = " << cert.N << ", " << cert.scope << ": fail";
  for (const auto& f : cert.failing()) err << " at " << f;
  err << "\n";
  return kViolation;
}

inline int cmd_thresholds(const RunConfig& c, std::ostream& out, std::ostream& err) {
  using J = nlohmann::ordered_json;
  Table flat{{"check", "value", "status"}, {}};
  bool ok = true;
  auto record = [&](const std::string& name, const std::string& value, bool pass) {
    flat.rows.push_back({name, value, std::string(pass ? "pass" : "fail")});
    ok = ok && pass;
  };
  J body;
  ThresholdReport tr = thresholds();
  auto iv = [](const IsolatingInterval& i) { return J{{"lo", to_fraction(i.lo)}, {"hi", to_fraction(i.hi)}, {"approx", i.approx()}}; };
  auto inside = [](const IsolatingInterval& i, long lo, long hi) { return i.lo > make_q(lo, 100) && i.hi < make_q(hi, 100); };
  bool mt = inside(tr.m_tilde, 692, 694) && tr.m_tilde_positive_roots == 1;
  bool Ma = inside(tr.M_alpha, 757, 759);
  body["m_tilde"] = iv(tr.m_tilde);
  body["m_tilde"]["positive_roots"] = tr.m_tilde_positive_roots;
  body["M_threshold"] = iv(tr.M_alpha);
  body["M_threshold"]["alpha"] = to_fraction(reference_alpha());
  body["reconstruction"] = {{"resultant_in_b", tr.resultant_reconstruction}, {"parametric", tr.parametric_reconstruction}};
  record("m_tilde in (6.92, 6.94)", shortest(tr.m_tilde.approx()), mt);
  record("M_threshold in (7.57, 7.59)", shortest(tr.M_alpha.approx()), Ma);
  record("resultant reconstruction", tr.resultant_reconstruction ? "equal" : "mismatch", tr.resultant_reconstruction);
  record("parametric reconstruction", tr.parametric_reconstruction ? "equal" : "mismatch", tr.parametric_reconstruction);

  J ledgers = J::array();
  for (const BigRational& a : {make_q(1, 2), make_q(1), make_q(51, 40), make_q(10)}) {
    QSturmLedger L = q_sturm_ledger(a);
    ledgers.push_back({{"alpha", to_fraction(a)},
                       {"sturm_at_zero", L.at_zero.to_string()},
                       {"sturm_at_infinity", L.at_infinity.to_string()},
                       {"positive_roots", L.positive_roots},
                       {"matches_reference_signs", L.matches_reference},
                       {"below_upper_curve_at_m_10", L.below_at_sample}});
    record("alpha = " + to_fraction(a) + ": q has no positive root", std::to_string(L.positive_roots), L.positive_roots == 0 && L.below_at_sample);
    flat.rows.push_back({"alpha = " + to_fraction(a) + ": Sturm signs at 0 / infinity", L.at_zero.to_string() + " " + L.at_infinity.to_string(),
                         std::string(L.matches_reference ? "matches reference" : "differs from reference")});
  }
  body["q_sturm_ledgers"] = ledgers;

  DulacCertificate dc = dulac_identity_check();
  body["dulac_identity"] = dc.holds;
  record("Dulac identity", dc.holds ? "holds" : "fails", dc.holds);

  DReconstruction dr = reconstruct_D_full();
  auto series = d_branch_series(4);
  MultiPoly img = d_curve_image();
  bool d_ok = sgn(dr.ratio_to_embedded) != 0 && dr.D.total_degree() == 14;
  bool s_ok = series[2] == make_q(3, 7) && series[4] == make_q(-180, 2401);
  bool i_ok = img.total_degree() == 25 && img.num_terms() == 257;
  J sj = J::array();
  for (const auto& q : series) sj.push_back(to_fraction(q));
  body["d_curve"] = {{"reconstruction_ratio", to_fraction(dr.ratio_to_embedded)},
                     {"degree", dr.D.total_degree()},
                     {"branch_series", sj},
                     {"image_degree", img.total_degree()},
                     {"image_monomials", img.num_terms()}};
  record("D reconstruction", to_fraction(dr.ratio_to_embedded), d_ok);
  record("D branch series 3/7, -180/2401", to_fraction(series[2]) + " " + to_fraction(series[4]), s_ok);
  record("E(m,b) degree 25, 257 monomials", std::to_string(img.total_degree()) + " " + std::to_string(img.num_terms()), i_ok);

  if (c.format == "csv")
    emit(render_csv(flat, c), c, out);
  else
    emit(render_json(body, c), c, out);
  err << (ok ? "all checks pass" : "a check failed") << "\n";
  return ok ? kOk : kViolation;
}

inline std::vector<double> M_list(const RunConfig& c, std::vector<double> dflt) {
  if (c.Ms.empty()) return dflt;
  std::vector<double> r;
  for (const auto& s : c.Ms) r.push_back(to_double(parse_q(s, "M")));
  return r;
}

inline Table ratio_table(double alpha, const std::vector<double>& Ms, bool& failure) {
  for (double M : Ms)
    if (!(M > std::sqrt(alpha))) throw UsageError("--M values must exceed sqrt(alpha)");
  auto rows = ratio_sweep(alpha, Ms);
  Table t{{"M", "ratio_s", "ratio_u", "ratio_focus", "status"}, {}};
  failure = false;
  for (const auto& r : rows) {
    bool ok = r.status == ShootStatus::Ok;
    failure = failure || !ok;
    t.rows.push_back({r.M, ok ? Cell(r.ratio_s) : Cell(), ok ? Cell(r.ratio_u) : Cell(), r.ratio_focus, std::string(to_string(r.status))});
  }
  return t;
}

inline double alpha_of(const RunConfig& c) {
  BigRational a = parse_q(c.alpha, "alpha");
  if (sgn(a) <= 0) throw UsageError("--alpha must be positive");
  return to_double(a);
}

inline int cmd_ratios(const RunConfig& c, std::ostream& out, std::ostream&) {
  bool failure = false;
  Table t = ratio_table(alpha_of(c), M_list(c, {10, 20, 40}), failure);
  emit_table(t, c, out, {{"alpha", c.alpha}});
  return failure ? kNumerical : kOk;
}

inline int cmd_plotdata(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Table t;
  std::vector<Series> series;
  std::string title, xl = "m", yl = "b";
  int code = kOk;
  if (c.kind == "bounds" || c.kind == "bifurcation-diagram") {
    bool diag = c.kind == "bifurcation-diagram";
    auto ms = grid(c, make_q(1, diag ? 4 : 10), BigRational(10), make_q(1, diag ? 4 : 10));
    t.columns = {"m", "b_lower", "b_upper", "hopf"};
    if (diag) t.columns.insert(t.columns.begin() + 2, "b_star");
    std::vector<BStarRow> est;
    if (diag) est = bstar_rows(ms, c.tol, c.jobs);
    Series lo{"b_lower", {}}, up{"b_upper", {}}, hopf{"hopf b = m", {}}, bs{"b*", {}};
    for (std::size_t i = 0; i < ms.size(); ++i) {
      BoundsPair b = bounds_pair(ms[i]);
      double m = to_double(ms[i]);
      std::vector<Cell> row{m, to_double(b.b_lower), to_double(b.b_upper), m};
      if (diag) {
        row.insert(row.begin() + 2, est[i].est ? Cell(est[i].est->bstar) : Cell());
        if (est[i].est) bs.points.emplace_back(m, est[i].est->bstar);
        if (!est[i].est) code = kNumerical;
        if (est[i].violation) code = kViolation;
      }
      t.rows.push_back(std::move(row));
      lo.points.emplace_back(m, to_double(b.b_lower));
      up.points.emplace_back(m, to_double(b.b_upper));
      hopf.points.emplace_back(m, m);
    }
    series = {lo, up, hopf};
    if (diag) series.push_back(bs);
    title = diag ? "Bifurcation diagram" : "Bounds for b*(m)";
  } else if (c.kind == "ratios") {
    double alpha = alpha_of(c);
    std::vector<double> dflt;
    for (double M = std::floor(std::sqrt(alpha)) + 1; M <= 40; M += 1) dflt.push_back(M);
    bool failure = false;
    t = ratio_table(alpha, M_list(c, dflt), failure);
    if (failure) code = kNumerical;
    Series s{"-P_s/M", {}}, u{"-P_u/M", {}}, f{"-(B^2-M^2)/M", {}};
    for (const auto& r : t.rows) {
      double M = std::get<double>(r[0]);
      if (auto* v = std::get_if<double>(&r[1])) s.points.emplace_back(M, *v);
      if (auto* v = std::get_if<double>(&r[2])) u.points.emplace_back(M, *v);
      f.points.emplace_back(M, std::get<double>(r[3]));
    }
    series = {u, s, f};
    title = "Crossing ratios, alpha = " + c.alpha;
    xl = "M";
    yl = "ratio";
  } else {
    throw UsageError("--kind must be bifurcation-diagram, ratios or bounds");
  }
  emit_table(t, c, out, {{"kind", c.kind}});
  if (!c.svg.empty()) {
    std::ofstream f(c.svg, std::ios::binary);
    if (!f) throw UsageError("cannot write " + c.svg);
    f << render_svg(title, xl, yl, series);
    err << "wrote " << c.svg << "\n";
  }
  return code;
}

inline int cmd_melnikov(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (!c.m) throw UsageError("melnikov needs --m");
  if (c.order < 1 || c.order > 4) throw UsageError("--order must be between 1 and 4");
  BigRational m = parse_q(*c.m, "m");
  MelnikovValue v = melnikov_series(to_double(m), c.order);
  Table t{{"m", "order", "value", "partial_sum_exact"}, {}};
  t.rows.push_back({to_double(m), static_cast<long>(c.order), v.value, melnikov_partial_sum(m, c.order)});
  nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
  for (const auto& q : v.coefficients) coeffs.push_back(to_fraction(q));
  emit_table(t, c, out, {{"coefficients", coeffs}});
  return kOk;
}

inline int cmd_perko(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (!c.m || !c.b) throw UsageError("perko needs --m and --b");
  BigRational m = parse_q(*c.m, "m"), b = parse_q(*c.b, "b");
  ParamsMb p = ParamsMb::exact(m, b);
  PerkoParams q = perko_transform(p);
  Table t{{"m", "b", "mu1", "mu2", "mu1_mu2_exact"}, {}};
  t.rows.push_back({to_double(m), to_double(b), q.mu1, q.mu2, perko_product(p)});
  emit_table(t, c, out);
  return kOk;
}

inline int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
  if (c.subcommand == "sweep") return cmd_sweep(c, out, err);
  if (c.subcommand == "bstar") return cmd_bstar(c, out, err);
  if (c.subcommand == "bounds") return cmd_bounds(c, out, err);
  if (c.subcommand == "certify") return cmd_certify(c, out, err);
  if (c.subcommand == "thresholds") return cmd_thresholds(c, out, err);
  if (c.subcommand == "ratios") return cmd_ratios(c, out, err);
  if (c.subcommand == "plotdata") return cmd_plotdata(c, out, err);
  if (c.subcommand == "melnikov") return cmd_melnikov(c, out, err);
  if (c.subcommand == "perko") return cmd_perko(c, out, err);
  throw UsageError("unknown subcommand " + c.subcommand);
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig c;
  CLI::App app{"Bounds, estimates and certificates for the saddle-loop curve b*(m)", "saddleloop"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", c.out, "output file (default: stdout)");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", c.jobs, "worker threads (0: all cores)");
  app.add_flag("--no-header", c.no_header, "omit the timestamp line, for byte-identical output");
  app.add_option("--tol", c.tol, "bisection tolerance for b*");

  auto range = [&](CLI::App* s) {
    s->add_option("--m", c.m, "single parameter value (rational)");
    s->add_option("--m-from", c.m_from, "first m (rational)");
    s->add_option("--m-to", c.m_to, "last m (rational)");
    s->add_option("--step", c.step, "m step (rational)");
  };
  range(app.add_subcommand("sweep", "b* with its bounds over an m range"));
  app.add_subcommand("bstar", "b* at one m")->add_option("--m", c.m, "parameter value")->required();
  range(app.add_subcommand("bounds", "exact lower and upper bounds over an m range"));
  auto* cert = app.add_subcommand("certify", "trapping-loop certificate at s or over an s-interval");
  cert->add_option("--N", c.N, "loop order, 1 or 2");
  cert->add_option("--s", c.s, "slope parameter s in (0, 7)");
  cert->add_option("--interval", c.interval, "s-interval a..b (needs --full-proof)");
  cert->add_flag("--full-proof", c.full_proof, "run the long exact interval certification");
  app.add_subcommand("thresholds", "threshold roots, Sturm ledgers, Dulac identity and D-curve checks");
  auto* rat = app.add_subcommand("ratios", "crossing ratios along B = M - 1 + alpha/M^2");
  rat->add_option("--alpha", c.alpha, "alpha (rational)");
  rat->add_option("--M", c.Ms, "M values")->delimiter(',');
  auto* plot = app.add_subcommand("plotdata", "plottable columns, optionally an SVG chart");
  plot->add_option("--kind", c.kind, "bifurcation-diagram, ratios or bounds")->required();
  plot->add_option("--svg", c.svg, "also write an SVG line chart");
  plot->add_option("--alpha", c.alpha, "alpha for the ratios kind");
  plot->add_option("--M", c.Ms, "M values for the ratios kind")->delimiter(',');
  range(plot);
  auto* mel = app.add_subcommand("melnikov", "four-term small-m series");
  mel->add_option("--m", c.m, "parameter value")->required();
  mel->add_option("--order", c.order, "number of terms, 1 to 4");
  auto* per = app.add_subcommand("perko", "parameters of the Perko normal form");
  per->add_option("--m", c.m, "m")->required();
  per->add_option("--b", c.b, "b")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  if (const char* e = std::getenv("SADDLELOOP_CACHE_DIR"); e && *e) c.cache_dir = std::string(e);
  try {
    return dispatch(c, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParameterError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const RegimeError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const SplitError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const BracketError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace saddleloop::cli
