#pragma once

// Command-line front end. parse_args validates everything up front, run_command
// dispatches one command and maps failures to exit codes:
//   0 success, 1 usage or configuration error, 2 numerical failure (or a failed
//   verify run), 3 operator not trace class.

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "berezin.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "operator.hpp"
#include "spectral.hpp"
#include "verify.hpp"

namespace bergman {

enum class Command { trace, spectrum, berezin, matrix, carleson, verify };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::trace: return "trace";
    case Command::spectrum: return "spectrum";
    case Command::berezin: return "berezin";
    case Command::matrix: return "matrix";
    case Command::carleson: return "carleson";
    case Command::verify: return "verify";
  }
  return "";
}

inline const char* to_string(Format f) {
  switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
    case Format::text: return "text";
  }
  return "";
}

struct RunConfig {
  Command command = Command::verify;
  std::string symbol;  ///< file path or inline JSON; unused by verify
  int dim = 256;
  double tol = 1e-8;
  Format format = Format::json;
  std::vector<complex> z;                    ///< berezin
  std::optional<int> k;                      ///< carleson
  std::vector<int> dims;                     ///< carleson
  std::optional<std::pair<int, int>> window; ///< spectrum
  std::optional<std::string> filter;         ///< verify

  bool operator==(const RunConfig&) const = default;
};

/// Usage error with CLI11's message (or ours).
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void build_app(CLI::App& app, RunConfig& cfg, std::string& format, std::vector<std::string>& zs,
                      std::vector<int>& window) {
  app.require_subcommand(1, 1);
  auto add_common = [&](CLI::App* sub, bool with_symbol) {
    if (with_symbol) sub->add_option("--symbol", cfg.symbol, "symbol JSON file or inline JSON")->required();
    sub->add_option("--dim", cfg.dim, "truncation dimension")->check(CLI::Range(1, max_dimension));
    sub->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  };
  add_common(app.add_subcommand("trace", "trace by the matrix, Berezin and closed-form routes"), true);
  auto* spectrum = app.add_subcommand("spectrum", "singular values of the truncation and a decay fit");
  add_common(spectrum, true);
  spectrum->add_option("--window", window, "fit window n0 n1 (inclusive)")->expected(2);
  auto* berezin = app.add_subcommand("berezin", "Berezin transform at points z by the series and matrix routes");
  add_common(berezin, true);
  berezin->add_option("--z", zs, "evaluation point a+bi, repeatable")->required();
  add_common(app.add_subcommand("matrix", "export the truncated matrix"), true);
  auto* carleson = app.add_subcommand("carleson", "top eigenvalue of the order-k compression for each dim");
  add_common(carleson, true);
  carleson->add_option("--k", cfg.k, "derivative order")->check(CLI::Range(0, max_derivative_order));
  carleson->add_option("--dims", cfg.dims, "increasing dimensions")->required()->check(CLI::Range(1, max_dimension));
  auto* verify = app.add_subcommand("verify", "run the built-in oracle cases");
  add_common(verify, false);
  verify->add_option("--filter", cfg.filter, "case name pattern (regex search)");
}

}  // namespace detail

/// Parses argv (without the program name). Throws usage_error on anything invalid.
inline RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  std::string format = "json";
  std::vector<std::string> zs;
  std::vector<int> window;
  CLI::App app{"Toeplitz operators with distributional symbols on the Bergman space"};
  detail::build_app(app, cfg, format, zs, window);

  std::vector<const char*> argv{"bergman_cli"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    throw usage_error(e.what());
  }
  const std::string name = app.get_subcommands().front()->get_name();
  for (Command c : {Command::trace, Command::spectrum, Command::berezin, Command::matrix, Command::carleson,
                    Command::verify})
    if (name == to_string(c)) cfg.command = c;
  cfg.format = format == "csv" ? Format::csv : format == "text" ? Format::text : Format::json;

  try {
    for (const auto& s : zs) cfg.z.push_back(parse_complex(s));
  } catch (const config_error& e) {
    throw usage_error(std::string("--z: ") + e.what());
  }
  if (!window.empty()) {
    if (window[0] < 0 || window[1] <= window[0] + 4) throw usage_error("--window: need 0 <= n0 and n1 > n0 + 4");
    cfg.window = std::make_pair(window[0], window[1]);
  }
  for (std::size_t i = 1; i < cfg.dims.size(); ++i)
    if (cfg.dims[i] <= cfg.dims[i - 1]) throw usage_error("--dims: must be strictly increasing");
  return cfg;
}

/// Inverse of parse_args: parse_args(to_argv(c)) == c for every valid config.
inline std::vector<std::string> to_argv(const RunConfig& c) {
  std::vector<std::string> a{to_string(c.command)};
  if (c.command != Command::verify) a.insert(a.end(), {"--symbol", c.symbol});
  a.insert(a.end(), {"--dim", std::to_string(c.dim), "--tol", format_double(c.tol), "--format", to_string(c.format)});
  for (const auto& z : c.z) a.insert(a.end(), {"--z", format_complex(z)});
  if (c.k) a.insert(a.end(), {"--k", std::to_string(*c.k)});
  if (!c.dims.empty()) {
    a.push_back("--dims");
    for (int d : c.dims) a.push_back(std::to_string(d));
  }
  if (c.window) a.insert(a.end(), {"--window", std::to_string(c.window->first), std::to_string(c.window->second)});
  if (c.filter) a.insert(a.end(), {"--filter", *c.filter});
  return a;
}

namespace detail {

inline int emit_error(std::ostream& err, int code, const std::string& kind, const std::string& message,
                      const json& extra = json::object()) {
  json j{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
  for (const auto& [key, v] : extra.items()) j["error"][key] = v;
  err << j.dump() << '\n';
  return code;
}

inline int dispatch(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == Command::verify) {
    const auto report = run_examples(cfg.filter);
    emit_suite(out, cfg.format, report);
    return report.pass ? 0 : 2;
  }
  const SymbolSpec symbol = load_symbol(cfg.symbol);
  switch (cfg.command) {
    case Command::trace: {
      const auto rep = trace_report(symbol, cfg.dim, cfg.tol);
      emit_trace(out, cfg.format, symbol, cfg.dim, rep);
      return 0;
    }
    case Command::spectrum: {
      auto rep = singular_values(assemble(symbol, cfg.dim));
      const auto window = cfg.window.value_or(default_window(cfg.dim));
      if (cfg.window) {
        rep.fit = decay_fit(rep, window);
      } else {
        // the default window is a convenience; a spectrum without enough nonzero values just has no fit
        try {
          rep.fit = decay_fit(rep, window);
        } catch (const window_error&) {
        }
      }
      emit_spectrum(out, cfg.format, rep);
      return 0;
    }
    case Command::berezin: {
      const auto op = assemble(symbol, cfg.dim);
      std::vector<BerezinPoint> pts;
      for (const complex z : cfg.z) pts.push_back({berezin_series(symbol, z, std::min(cfg.tol, 1e-12)), berezin_matrix(op, z)});
      emit_berezin(out, cfg.format, pts);
      return 0;
    }
    case Command::matrix:
      emit_matrix(out, cfg.format, assemble(symbol, cfg.dim));
      return 0;
    case Command::carleson: {
      int k = 0;
      if (cfg.k) {
        k = *cfg.k;
      } else if (symbol.alpha == symbol.beta) {
        k = symbol.alpha;
      } else {
        throw usage_error("carleson: pass --k or use a symbol with alpha == beta");
      }
      emit_carleson(out, cfg.format, carleson_bound_estimate(symbol.base, k, cfg.dims));
      return 0;
    }
    case Command::verify: break;
  }
  return 0;
}

}  // namespace detail

/// Runs one command. The report goes to out; errors go to err as one JSON object.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  // --help is not an error
  for (const auto& a : args)
    if (a == "--help" || a == "-h") {
      RunConfig cfg;
      std::string format;
      std::vector<std::string> zs;
      std::vector<int> window;
      CLI::App app{"Toeplitz operators with distributional symbols on the Bergman space"};
      detail::build_app(app, cfg, format, zs, window);
      out << app.help();
      return 0;
    }
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const usage_error& e) {
    return detail::emit_error(err, 1, "usage", e.what());
  }
  try {
    return detail::dispatch(cfg, out);
  } catch (const not_trace_class& e) {
    out << json{{"trace_class", false}, {"divergence_exponent", e.divergence_exponent()}}.dump(2) << '\n';
    return detail::emit_error(err, 3, "not_trace_class", e.what(),
                              json{{"divergence_exponent", e.divergence_exponent()}});
  } catch (const numerical_failure& e) {
    return detail::emit_error(err, 2, "numerical_failure", e.what(),
                              json{{"partial_value", e.partial_value()}, {"achieved_accuracy", e.achieved_accuracy()}});
  } catch (const window_error& e) {
    return detail::emit_error(err, 2, "window", e.what());
  } catch (const config_error& e) {
    return detail::emit_error(err, 1, "config", e.what());
  } catch (const usage_error& e) {
    return detail::emit_error(err, 1, "usage", e.what());
  } catch (const contract_violation& e) {
    return detail::emit_error(err, 1, "contract", e.what());
  } catch (const unsupported_functional& e) {
    return detail::emit_error(err, 1, "unsupported", e.what());
  } catch (const boundary_error& e) {
    return detail::emit_error(err, 1, "boundary", e.what());
  } catch (const resource_limit& e) {
    return detail::emit_error(err, 1, "resource_limit", e.what());
  }
}

}  // namespace bergman
