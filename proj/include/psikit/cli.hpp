#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "compare.hpp"
#include "enclosure.hpp"
#include "errors.hpp"
#include "family.hpp"
#include "report.hpp"
#include "solver.hpp"
#include "verify.hpp"

namespace psikit::cli {

inline std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

inline double parse_number(const std::string& token, const std::string& what) {
  const std::string t = trimmed(token);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || t.empty() || std::isnan(v)) {
    throw DomainError("cannot parse " + what + " from \"" + t + "\"");
  }
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Family spec grammar: name, optionally followed by colon-separated
// key=value settings. Examples: "power:p=3:domain=-1e6,1e6",
// "lomax:alpha=1.5", "arith", "harm".
inline PsiFamily make_family(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string name = trimmed(parts[0]);
  long long p = 3;
  double alpha = 1.0;
  bool have_domain = false;
  ParameterDomain domain = ParameterDomain::real_line();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto kv = split(parts[i], '=');
    if (kv.size() != 2) {
      throw ParameterError("bad family setting \"" + parts[i] + "\", expected key=value");
    }
    const std::string key = trimmed(kv[0]);
    if (key == "p") {
      const double raw = parse_number(kv[1], "p");
      p = static_cast<long long>(raw);
      if (static_cast<double>(p) != raw) throw ParameterError("p must be an integer");
    } else if (key == "alpha") {
      alpha = parse_number(kv[1], "alpha");
    } else if (key == "domain") {
      const auto ends = split(kv[1], ',');
      if (ends.size() != 2) throw ParameterError("domain needs two endpoints");
      domain = ParameterDomain::open(parse_number(ends[0], "domain endpoint"),
                                     parse_number(ends[1], "domain endpoint"));
      have_domain = true;
    } else {
      throw ParameterError("unknown family setting \"" + key + "\"");
    }
  }
  if (name == "power") {
    return have_domain ? make_power_p(p, domain) : make_power_p(p);
  }
  if (name == "lomax") {
    if (have_domain) throw ParameterError("lomax domain is fixed to (0, inf)");
    return make_lomax(alpha);
  }
  if (name == "arith") {
    return have_domain ? make_arithmetic(domain) : make_arithmetic();
  }
  if (name == "harm") {
    if (have_domain) throw ParameterError("harm domain is fixed to (0, inf)");
    return make_harmonic();
  }
  throw ParameterError("unknown family \"" + name + "\"");
}

// CSV sample: one "observation,weight" row per line, weight optional with
// default 1; blank lines and lines starting with # are skipped.
inline WeightedSample read_sample(std::istream& in, const std::string& origin) {
  WeightedSample s;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trimmed(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = split(t, ',');
    if (fields.size() > 2) {
      throw DomainError(origin + ":" + std::to_string(line_no) + ": expected at most two columns");
    }
    const std::string where = origin + ":" + std::to_string(line_no);
    const double x = parse_number(fields[0], "observation at " + where);
    const double w = fields.size() == 2 ? parse_number(fields[1], "weight at " + where) : 1.0;
    s.points.push_back({x, w});
  }
  if (s.points.empty()) throw DomainError(origin + ": no observations");
  return s;
}

inline WeightedSample read_sample_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open sample file \"" + path + "\"");
  return read_sample(in, path);
}

// Enclosure input: weights are replication counts and must be positive
// integers.
inline std::vector<long long> integer_replication(const WeightedSample& s) {
  std::vector<long long> out;
  out.reserve(s.points.size());
  for (const auto& p : s.points) {
    if (!(p.weight >= 1.0) || p.weight > 1e15 || std::floor(p.weight) != p.weight) {
      throw DomainError("enclosure weights must be positive integers");
    }
    out.push_back(static_cast<long long>(p.weight));
  }
  return out;
}

struct RunConfig {
  std::string family;
  std::string psi;
  std::string phi;
  std::string comparative = "ratio";
  std::string grid;
  std::string sample_path;
  double tol = 1e-12;
  long long k_limit = 0;  // command-specific default applied when 0
  double budget_secs = 0.0;
  std::uint64_t budget_matrices = 0;
  bool budget_matrices_set = false;
  std::uint64_t seed = 42;
  std::string format = "json";
  int workers = 1;
  bool inject_fault = false;
  std::vector<double> schweitzer;
};

namespace detail {

inline void echo_common(JsonWriter& w, const RunConfig& cfg) {
  w.key("tol");
  w.value(cfg.tol);
  w.key("format");
  w.value(cfg.format);
}

inline void write_diagnostics(JsonWriter& w, const std::vector<std::string>& notes) {
  w.key("diagnostics");
  w.begin_array();
  for (const auto& n : notes) w.value(n);
  w.end_array();
}

inline void write_text_matrix(std::ostream& out, const PairMatrix& m, const char* label) {
  out << label << " (scale " << m.scale << "):\n";
  for (int i = 0; i < m.n; ++i) {
    out << " ";
    for (int j = 0; j < m.n; ++j) out << " " << m.at(i, j);
    out << "\n";
  }
}

}  // namespace detail

inline int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.family.empty()) throw ParameterError("estimate requires --family");
  const PsiFamily family = make_family(cfg.family);
  const WeightedSample sample = read_sample_file(cfg.sample_path);
  const SignChangeResult res = estimate(family, sample, cfg.tol);
  if (cfg.format == "text") {
    out << "theta = " << format_number(res.theta) << "\n";
    out << "bracket_width = " << format_number(res.bracket_width) << "\n";
    out << "status = " << to_string(res.status) << "\n";
    return 0;
  }
  JsonWriter w;
  w.begin_object();
  w.key("command");
  w.value("estimate");
  w.key("config");
  w.begin_object();
  w.key("family");
  w.value(cfg.family);
  detail::echo_common(w, cfg);
  w.end_object();
  w.key("result");
  w.begin_object();
  w.key("theta");
  w.value(res.theta);
  w.key("bracket_width");
  w.value(res.bracket_width);
  w.key("status");
  w.value(to_string(res.status));
  w.key("observations");
  w.value(static_cast<long long>(sample.size()));
  w.key("total_weight");
  w.value(sample.total_weight());
  w.end_object();
  detail::write_diagnostics(w, {});
  w.end_object();
  out << w.str() << "\n";
  return 0;
}

inline int cmd_enclose(const RunConfig& cfg, std::ostream& out) {
  if (cfg.family.empty()) throw ParameterError("enclose requires --family");
  const PsiFamily family = make_family(cfg.family);
  const WeightedSample sample = read_sample_file(cfg.sample_path);
  const std::vector<long long> k_vec = integer_replication(sample);
  std::vector<double> xs;
  xs.reserve(sample.size());
  for (const auto& p : sample.points) xs.push_back(p.value);

  EncloseOptions opt;
  opt.k_limit = cfg.k_limit > 0 ? cfg.k_limit : 4;
  opt.tol = cfg.tol;
  opt.workers = cfg.workers;
  opt.max_seconds = cfg.budget_secs;
  if (cfg.budget_matrices_set) opt.max_matrices = cfg.budget_matrices;
  const Enclosure enc = enclose(family, xs, k_vec, opt);
  const double direct = estimate(family, sample, cfg.tol).theta;

  std::vector<std::string> notes;
  notes.push_back(std::string("enumeration ") + to_string(enc.stop));

  if (cfg.format == "text") {
    out << "lower = " << format_number(enc.lower) << "\n";
    out << "upper = " << format_number(enc.upper) << "\n";
    out << "width = " << format_number(enc.upper - enc.lower) << "\n";
    out << "direct_estimate = " << format_number(direct) << "\n";
    out << "k_max_used = " << enc.k_max_used << "\n";
    out << "matrices_evaluated = " << enc.matrices_evaluated << "\n";
    detail::write_text_matrix(out, enc.lower_witness, "lower_witness");
    detail::write_text_matrix(out, enc.upper_witness, "upper_witness");
    for (const auto& n : notes) out << "note: " << n << "\n";
    return 0;
  }
  JsonWriter w;
  w.begin_object();
  w.key("command");
  w.value("enclose");
  w.key("config");
  w.begin_object();
  w.key("family");
  w.value(cfg.family);
  w.key("k_limit");
  w.value(opt.k_limit);
  w.key("workers");
  w.value(opt.workers);
  if (cfg.budget_matrices_set) {
    w.key("budget_matrices");
    w.value(cfg.budget_matrices);
  }
  if (cfg.budget_secs > 0.0) {
    w.key("budget_secs");
    w.value(cfg.budget_secs);
  }
  detail::echo_common(w, cfg);
  w.end_object();
  w.key("result");
  w.begin_object();
  w.key("lower");
  w.value(enc.lower);
  w.key("upper");
  w.value(enc.upper);
  w.key("width");
  w.value(enc.upper - enc.lower);
  w.key("direct_estimate");
  w.value(direct);
  w.key("matrices_evaluated");
  w.value(enc.matrices_evaluated);
  w.end_object();
  w.key("witnesses");
  w.begin_object();
  w.key("lower");
  write_matrix(w, enc.lower_witness);
  w.key("upper");
  write_matrix(w, enc.upper_witness);
  w.end_object();
  w.key("k_max_used");
  w.value(enc.k_max_used);
  detail::write_diagnostics(w, notes);
  w.end_object();
  out << w.str() << "\n";
  return 0;
}

inline int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  JsonWriter w;
  w.begin_object();
  w.key("command");
  w.value("compare");

  if (!cfg.schweitzer.empty()) {
    if (cfg.schweitzer.size() != 2) throw ParameterError("--schweitzer needs exactly a and b");
    const double a = cfg.schweitzer[0];
    const double b = cfg.schweitzer[1];
    const double closed = schweitzer_bound(a, b);
    const double interior = schweitzer_interior_value(a, b);
    const long long cap = cfg.k_limit > 0 ? cfg.k_limit : 100;
    const PsiFamily am = make_arithmetic(ParameterDomain::positive_half_line());
    const PsiFamily hm = make_harmonic();
    const auto wc = two_point_worst_case(am, hm, make_ratio(), {a, b}, cap, cfg.tol);
    if (cfg.format == "text") {
      out << "schweitzer_bound = " << format_number(closed) << "\n";
      out << "interior_value = " << format_number(interior) << "\n";
      out << "numeric_worst_case = " << format_number(wc.value) << "\n";
      out << "witness = (x=" << format_number(wc.x) << ", y=" << format_number(wc.y)
          << ", k=" << wc.k << ", m=" << wc.m << ")\n";
      return 0;
    }
    w.key("config");
    w.begin_object();
    w.key("mode");
    w.value("schweitzer");
    w.key("a");
    w.value(a);
    w.key("b");
    w.value(b);
    w.key("k_limit");
    w.value(cap);
    detail::echo_common(w, cfg);
    w.end_object();
    w.key("result");
    w.begin_object();
    w.key("bound");
    w.value(closed);
    w.key("interior_value");
    w.value(interior);
    w.key("numeric_worst_case");
    w.value(wc.value);
    w.key("witness");
    w.begin_object();
    w.key("x");
    w.value(wc.x);
    w.key("y");
    w.value(wc.y);
    w.key("k");
    w.value(wc.k);
    w.key("m");
    w.value(wc.m);
    w.end_object();
    w.end_object();
    detail::write_diagnostics(w, {});
    w.end_object();
    out << w.str() << "\n";
    return 0;
  }

  if (cfg.psi.empty() || cfg.phi.empty()) {
    throw ParameterError("compare requires --psi and --phi (or --schweitzer)");
  }
  if (cfg.grid.empty()) throw ParameterError("compare requires --grid");
  const PsiFamily psi = make_family(cfg.psi);
  const PsiFamily phi = make_family(cfg.phi);
  std::vector<double> grid;
  for (const auto& tok : split(cfg.grid, ',')) {
    grid.push_back(parse_number(tok, "grid point"));
  }
  // The comparative takes estimator values of both families, so its domain is
  // the intersection of the two parameter domains.
  const ParameterDomain common = ParameterDomain::open(
      std::max(psi.theta.lower, phi.theta.lower), std::min(psi.theta.upper, phi.theta.upper));
  ComparativeFunction comparative;
  if (cfg.comparative == "difference" || cfg.comparative == "diff") {
    comparative = make_difference(common);
  } else if (cfg.comparative == "ratio") {
    comparative = make_ratio(common);
  } else {
    throw ParameterError("unknown comparative \"" + cfg.comparative + "\"");
  }
  const long long cap = cfg.k_limit > 0 ? cfg.k_limit : 100;
  const auto wc = two_point_worst_case(psi, phi, comparative, grid, cap, cfg.tol);

  if (cfg.format == "text") {
    out << "worst_case = " << format_number(wc.value) << "\n";
    out << "witness = (x=" << format_number(wc.x) << ", y=" << format_number(wc.y)
        << ", k=" << wc.k << ", m=" << wc.m << ")\n";
    out << "k_limit = " << cap << "\n";
    return 0;
  }
  w.key("config");
  w.begin_object();
  w.key("psi");
  w.value(cfg.psi);
  w.key("phi");
  w.value(cfg.phi);
  w.key("comparative");
  w.value(comparative.name);
  w.key("grid");
  w.begin_array();
  for (double g : grid) w.value(g);
  w.end_array();
  w.key("k_limit");
  w.value(cap);
  detail::echo_common(w, cfg);
  w.end_object();
  w.key("result");
  w.begin_object();
  w.key("worst_case");
  w.value(wc.value);
  w.key("witness");
  w.begin_object();
  w.key("x");
  w.value(wc.x);
  w.key("y");
  w.value(wc.y);
  w.key("k");
  w.value(wc.k);
  w.key("m");
  w.value(wc.m);
  w.end_object();
  w.end_object();
  detail::write_diagnostics(w, {"worst case is exact for replicated pairs up to k_limit"});
  w.end_object();
  out << w.str() << "\n";
  return 0;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const VerificationReport rep = run_verification(cfg.seed, cfg.inject_fault);
  if (cfg.format == "text") {
    out << render_verification_text(rep);
  } else {
    out << render_verification_json(rep) << "\n";
  }
  return rep.all_passed ? 0 : 3;
}

}  // namespace psikit::cli
