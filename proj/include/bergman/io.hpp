#pragma once

// Symbol configuration parsing (strict JSON) and report emission as JSON, CSV
// or an aligned text table.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "spectral.hpp"
#include "symbol.hpp"
#include "verify.hpp"

namespace bergman {

using json = nlohmann::ordered_json;

/// Malformed configuration: bad JSON, unknown keys, wrong types, unreadable file.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Format { json, csv, text };

// ---------------------------------------------------------------------------
// numbers

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& s) {
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw config_error("not a number: '" + s + "'");
  return x;
}

/// "a+bi", "a-bi", "a", "bi", "i", "-i".
inline complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw config_error("empty complex literal");
  if (s.back() != 'i') return {parse_double(s), 0.0};
  s.pop_back();
  // split at the last sign that is not the leading one and not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(t[0] == '+' ? t.substr(1) : t);
  };
  if (split == std::string::npos) return {0.0, imag_part(s)};
  return {parse_double(s.substr(0, split)), imag_part(s.substr(split))};
}

inline std::string format_complex(complex z) {
  std::string im = format_double(z.imag());
  if (im[0] != '-') im = "+" + im;
  return format_double(z.real()) + im + "i";
}

inline json to_json(complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

// ---------------------------------------------------------------------------
// symbol schema

namespace detail {

inline void require_keys(const json& j, const std::set<std::string>& allowed, const std::set<std::string>& required,
                         const std::string& where) {
  if (!j.is_object()) throw config_error(where + ": expected an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw config_error(where + ": unknown key '" + key + "'");
  for (const auto& key : required)
    if (!j.contains(key)) throw config_error(where + ": missing key '" + key + "'");
}

inline double get_number(const json& j, const std::string& key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw config_error(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

inline int get_int(const json& j, const std::string& key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw config_error(where + ": '" + key + "' must be an integer");
  const auto x = v.get<long long>();
  if (x < 0 || x > max_derivative_order) throw config_error(where + ": '" + key + "' out of range");
  return static_cast<int>(x);
}

inline SimpleMeasure parse_simple_measure(const json& j, const std::string& kind, const std::string& where) {
  if (kind == "radial_power") {
    require_keys(j, {"kind", "s", "a"}, {"kind", "s"}, where);
    return RadialPower{get_number(j, "s", where), j.contains("a") ? get_number(j, "a", where) : 0.0};
  }
  if (kind == "point_mass") {
    require_keys(j, {"kind", "re", "im"}, {"kind", "re"}, where);
    return PointMass{{get_number(j, "re", where), j.contains("im") ? get_number(j, "im", where) : 0.0}};
  }
  if (kind == "circle_uniform") {
    require_keys(j, {"kind", "r0"}, {"kind", "r0"}, where);
    return CircleUniform{get_number(j, "r0", where)};
  }
  if (kind == "circle_radial_derivative") {
    require_keys(j, {"kind", "r0"}, {"kind", "r0"}, where);
    return CircleRadialDerivative{get_number(j, "r0", where)};
  }
  throw config_error(where + ": unknown measure kind '" + kind + "'");
}

inline std::string get_kind(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw config_error(where + ": measure needs a string 'kind'");
  return j.at("kind").get<std::string>();
}

}  // namespace detail

inline BaseMeasure measure_from_json(const json& j) {
  const std::string where = "measure";
  const std::string kind = detail::get_kind(j, where);
  if (kind != "combination") {
    const auto m = detail::parse_simple_measure(j, kind, where);
    return std::visit([](const auto& x) -> BaseMeasure { return x; }, m);
  }
  detail::require_keys(j, {"kind", "terms"}, {"kind", "terms"}, where);
  const auto& terms = j.at("terms");
  if (!terms.is_array() || terms.empty()) throw config_error("combination: 'terms' must be a nonempty array");
  Combination c;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tw = "combination.terms[" + std::to_string(i) + "]";
    detail::require_keys(terms[i], {"coeff_re", "coeff_im", "measure"}, {"coeff_re", "measure"}, tw);
    const complex coeff{detail::get_number(terms[i], "coeff_re", tw),
                        terms[i].contains("coeff_im") ? detail::get_number(terms[i], "coeff_im", tw) : 0.0};
    const auto& mj = terms[i].at("measure");
    const std::string kind_i = detail::get_kind(mj, tw + ".measure");
    if (kind_i == "combination") throw config_error(tw + ": nested combinations are not supported");
    c.terms.push_back({coeff, detail::parse_simple_measure(mj, kind_i, tw + ".measure")});
  }
  return c;
}

/// Parses and validates a symbol; any schema or range problem is a config_error.
inline SymbolSpec symbol_from_json(const json& j) {
  detail::require_keys(j, {"alpha", "beta", "measure"}, {"alpha", "beta", "measure"}, "symbol");
  SymbolSpec s{detail::get_int(j, "alpha", "symbol"), detail::get_int(j, "beta", "symbol"),
               measure_from_json(j.at("measure"))};
  try {
    validate(s);
  } catch (const contract_violation& e) {
    throw config_error(e.what());
  }
  return s;
}

/// Inline JSON when the argument starts with '{', otherwise a file path.
inline SymbolSpec load_symbol(const std::string& arg) {
  std::string text;
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') {
    text = arg;
  } else {
    std::ifstream in(arg);
    if (!in) throw config_error("cannot read symbol file '" + arg + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("symbol is not valid JSON: ") + e.what());
  }
  return symbol_from_json(j);
}

inline json to_json(const SimpleMeasure& m) {
  return std::visit(overloaded{
                        [](const RadialPower& r) { return json{{"kind", "radial_power"}, {"s", r.s}, {"a", r.a}}; },
                        [](const PointMass& p) {
                          return json{{"kind", "point_mass"}, {"re", p.z0.real()}, {"im", p.z0.imag()}};
                        },
                        [](const CircleUniform& c) { return json{{"kind", "circle_uniform"}, {"r0", c.r0}}; },
                        [](const CircleRadialDerivative& d) {
                          return json{{"kind", "circle_radial_derivative"}, {"r0", d.r0}};
                        },
                    },
                    m);
}

inline json to_json(const BaseMeasure& b) {
  if (const auto* c = std::get_if<Combination>(&b)) {
    json terms = json::array();
    for (const auto& t : c->terms)
      terms.push_back({{"coeff_re", t.coeff.real()}, {"coeff_im", t.coeff.imag()}, {"measure", to_json(t.measure)}});
    return json{{"kind", "combination"}, {"terms", terms}};
  }
  return to_json(as_simple(b));
}

inline json to_json(const SymbolSpec& s) {
  return json{{"alpha", s.alpha}, {"beta", s.beta}, {"measure", to_json(s.base)}};
}

// ---------------------------------------------------------------------------
// text tables

class text_table {
 public:
  explicit text_table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      if (width.size() < r.size()) width.resize(r.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], display_width(r[i]));
    }
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const auto& r = rows_[k];
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        line += r[i];
        if (i + 1 < r.size()) line += std::string(width[i] - display_width(r[i]) + 2, ' ');
      }
      out << line << '\n';
      if (k == 0) {
        std::size_t total = 0;
        for (std::size_t i = 0; i < width.size(); ++i) total += width[i] + (i + 1 < width.size() ? 2 : 0);
        out << std::string(total, '-') << '\n';
      }
    }
  }

 private:
  // UTF-8 code points, so formula anchors line up
  static std::size_t display_width(const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s)
      if ((c & 0xC0) != 0x80) ++n;
    return n;
  }
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// reports

inline json trace_json(const SymbolSpec& symbol, int N, const TraceReport& r) {
  json j;
  j["symbol"] = to_json(symbol);
  j["dim"] = N;
  j["route_matrix"] = {{"value", to_json(r.route_matrix.value)},
                       {"partial_sum", to_json(r.route_matrix.partial_sum)},
                       {"tail_correction", to_json(r.route_matrix.tail_correction)},
                       {"tail_estimate", r.route_matrix.tail_known ? json(r.route_matrix.tail_bound) : json(nullptr)},
                       {"tail_known", r.route_matrix.tail_known}};
  j["route_berezin"] = {{"value", to_json(r.route_berezin.value)}, {"quadrature_error", r.route_berezin.error}};
  if (r.route_closed_form) j["route_closed_form"] = to_json(*r.route_closed_form);
  j["agree"] = r.agree;
  j["trace"] = to_json(r.preferred());
  if (r.paper_reference_value) j["paper_reference_value"] = to_json(*r.paper_reference_value);
  return j;
}

inline void emit_trace(std::ostream& out, Format f, const SymbolSpec& symbol, int N, const TraceReport& r) {
  if (f == Format::json) {
    out << trace_json(symbol, N, r).dump(2) << '\n';
    return;
  }
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"matrix", format_double(r.route_matrix.value.real()), format_double(r.route_matrix.value.imag()),
                  r.route_matrix.tail_known ? format_double(r.route_matrix.tail_bound) : "unknown"});
  rows.push_back({"berezin", format_double(r.route_berezin.value.real()), format_double(r.route_berezin.value.imag()),
                  format_double(r.route_berezin.error)});
  if (r.route_closed_form)
    rows.push_back({"closed_form", format_double(r.route_closed_form->real()), format_double(r.route_closed_form->imag()), "0"});
  if (f == Format::csv) {
    out << "route,re,im,error\n";
    for (const auto& row : rows) out << row[0] << ',' << row[1] << ',' << row[2] << ',' << row[3] << '\n';
    return;
  }
  text_table t({"route", "re", "im", "error"});
  for (auto& row : rows) t.add(row);
  t.print(out);
  out << "agree: " << (r.agree ? "yes" : "no") << '\n';
}

inline json spectrum_json(const SpectrumReport& r) {
  json j;
  j["svals"] = r.svals;
  j["numerical_rank"] = r.numerical_rank;
  if (r.fit)
    j["fit"] = {{"C", r.fit->C}, {"sigma", r.fit->sigma}, {"window", {r.fit->n0, r.fit->n1}}, {"residual", r.fit->residual}};
  return j;
}

inline void emit_spectrum(std::ostream& out, Format f, const SpectrumReport& r) {
  if (f == Format::json) {
    out << spectrum_json(r).dump(2) << '\n';
    return;
  }
  if (f == Format::csv) {
    out << "n,s_n\n";
    for (std::size_t n = 0; n < r.svals.size(); ++n) out << n << ',' << format_double(r.svals[n]) << '\n';
    return;
  }
  text_table t({"n", "s_n"});
  for (std::size_t n = 0; n < r.svals.size(); ++n) t.add({std::to_string(n), format_double(r.svals[n])});
  t.print(out);
  out << "numerical rank: " << r.numerical_rank << '\n';
  if (r.fit)
    out << "fit over [" << r.fit->n0 << ", " << r.fit->n1 << "]: C = " << format_double(r.fit->C)
        << ", sigma = " << format_double(r.fit->sigma) << ", residual = " << format_double(r.fit->residual) << '\n';
}

struct BerezinPoint {
  BerezinSample series;
  BerezinSample matrix;
};

inline void emit_berezin(std::ostream& out, Format f, const std::vector<BerezinPoint>& pts) {
  if (f == Format::json) {
    json arr = json::array();
    for (const auto& p : pts)
      arr.push_back({{"z", to_json(p.series.z)},
                     {"series", {{"value", to_json(p.series.value)}, {"est_error", p.series.est_error}}},
                     {"matrix", {{"value", to_json(p.matrix.value)}, {"est_error", p.matrix.est_error}}}});
    out << json{{"samples", arr}}.dump(2) << '\n';
    return;
  }
  if (f == Format::csv) {
    // series route; the matrix route is in the JSON output
    for (const auto& p : pts)
      out << format_double(p.series.z.real()) << ',' << format_double(p.series.z.imag()) << ','
          << format_double(p.series.value.real()) << ',' << format_double(p.series.value.imag()) << '\n';
    return;
  }
  text_table t({"z", "series", "matrix", "difference"});
  for (const auto& p : pts)
    t.add({format_complex(p.series.z), format_complex(p.series.value), format_complex(p.matrix.value),
           format_double(std::abs(p.series.value - p.matrix.value))});
  t.print(out);
}

inline void emit_matrix(std::ostream& out, Format f, const TruncatedOperator& op) {
  const std::size_t N = op.dim;
  if (f == Format::json) {
    json rows = json::array();
    for (std::size_t n = 0; n < N; ++n) {
      json row = json::array();
      for (std::size_t m = 0; m < N; ++m) row.push_back(to_json(op.entries(n, m)));
      rows.push_back(std::move(row));
    }
    out << json{{"dim", op.dim}, {"hermitian", op.hermitian}, {"banded", op.banded}, {"entries", rows}}.dump(2) << '\n';
    return;
  }
  if (f == Format::csv) {
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t m = 0; m < N; ++m) {
        if (m > 0) out << ',';
        out << format_double(op.entries(n, m).real()) << ',' << format_double(op.entries(n, m).imag());
      }
      out << '\n';
    }
    return;
  }
  text_table t({"n", "m", "re", "im"});
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t m = 0; m < N; ++m)
      if (op.entries(n, m) != complex(0.0, 0.0))
        t.add({std::to_string(n), std::to_string(m), format_double(op.entries(n, m).real()),
               format_double(op.entries(n, m).imag())});
  t.print(out);
}

inline void emit_carleson(std::ostream& out, Format f, const std::vector<std::pair<int, double>>& seq) {
  if (f == Format::json) {
    json arr = json::array();
    for (const auto& [n, v] : seq) arr.push_back({{"dim", n}, {"top_eigenvalue", v}});
    out << json{{"estimates", arr}}.dump(2) << '\n';
    return;
  }
  if (f == Format::csv) {
    out << "dim,top_eigenvalue\n";
    for (const auto& [n, v] : seq) out << n << ',' << format_double(v) << '\n';
    return;
  }
  text_table t({"dim", "top_eigenvalue"});
  for (const auto& [n, v] : seq) t.add({std::to_string(n), format_double(v)});
  t.print(out);
}

inline json suite_json(const SuiteReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases) {
    json checks = json::array();
    for (const auto& k : c.checks) {
      json routes;
      for (const auto& rv : k.routes) routes[rv.route] = {{"value", to_json(rv.value)}, {"error", rv.error}};
      json cj{{"label", k.label}, {"routes", routes}, {"reference", to_json(k.reference)}};
      if (k.paper_reference_value) cj["paper_reference_value"] = to_json(*k.paper_reference_value);
      cj["ratio_to_reference"] = k.ratio_to_reference ? json(*k.ratio_to_reference) : json(nullptr);
      cj["pass"] = k.pass;
      checks.push_back(std::move(cj));
    }
    json cj{{"case", c.name},        {"anchor", c.anchor},       {"provenance", to_string(c.provenance)},
            {"routes_required", c.routes_required}, {"tolerance", c.tolerance}, {"checks", checks},
            {"pass", c.pass}};
    if (!c.error.empty()) cj["error"] = c.error;
    cases.push_back(std::move(cj));
  }
  return json{{"cases", cases}, {"pass", r.pass}};
}

inline void emit_suite(std::ostream& out, Format f, const SuiteReport& r) {
  if (f == Format::json) {
    out << suite_json(r).dump(2) << '\n';
    return;
  }
  if (f == Format::csv) {
    out << "case,check,route,re,im,error,reference_re,reference_im,pass\n";
    for (const auto& c : r.cases) {
      if (!c.error.empty()) out << c.name << ",,,,,,,,0\n";
      for (const auto& k : c.checks)
        for (const auto& rv : k.routes)
          out << c.name << ',' << k.label << ',' << rv.route << ',' << format_double(rv.value.real()) << ','
              << format_double(rv.value.imag()) << ',' << format_double(rv.error) << ','
              << format_double(k.reference.real()) << ',' << format_double(k.reference.imag()) << ','
              << (k.pass ? 1 : 0) << '\n';
    }
    return;
  }
  text_table t({"case", "check", "reference", "routes", "ratio", "result"});
  for (const auto& c : r.cases) {
    if (!c.error.empty()) t.add({c.name, "", "", c.error, "", "FAIL"});
    for (const auto& k : c.checks) {
      std::string routes;
      for (const auto& rv : k.routes) {
        if (!routes.empty()) routes += "  ";
        std::ostringstream os;
        os << rv.route << '=' << std::setprecision(10) << rv.value.real();
        if (rv.value.imag() != 0.0 && std::abs(rv.value.imag()) > 1e-12 * std::abs(rv.value)) os << std::showpos << rv.value.imag() << 'i';
        routes += os.str();
      }
      std::ostringstream ref, ratio;
      ref << std::setprecision(10) << k.reference.real();
      if (k.ratio_to_reference) ratio << std::setprecision(6) << *k.ratio_to_reference;
      t.add({c.name, k.label, ref.str(), routes, ratio.str(), k.pass ? "pass" : "FAIL"});
    }
  }
  t.print(out);
  out << (r.pass ? "all cases pass" : "some cases FAIL") << '\n';
}

}  // namespace bergman
