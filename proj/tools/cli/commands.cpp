// Copyright 2026 The zitter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "zitter/analysis.hpp"
#include "zitter/errors.hpp"

namespace zitter::cli {

namespace {

using Row = std::vector<std::string>;

// Rows are computed in any order but stored by index, so output never depends
// on the worker count.
std::vector<Row> map_rows(std::size_t n, int workers, const std::function<Row(std::size_t)>& make_row) {
  std::vector<Row> rows(n);
  std::vector<std::exception_ptr> failures(n);
  const auto body = [&](std::size_t i) {
    try {
      rows[i] = make_row(i);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };
  const std::size_t pool_size = std::min<std::size_t>(std::max(1, workers), n);
  if (pool_size <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < pool_size; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += pool_size) body(i);
      });
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return rows;
}

ExpectationOptions options_for(const RunConfig& cfg) {
  ExpectationOptions opts;
  opts.method = cfg.method;
  opts.quad.rel_tol = cfg.rel_tol;
  return opts;
}

std::string time_label(double t) { return "t = " + format_number(t) + " fs"; }

struct Source {
  std::string config_path;
  std::string preset;
};

RunConfig resolve(const Source& src) {
  if (src.config_path.empty() && src.preset.empty()) throw InvalidConfig("give --config and/or --preset");
  std::optional<RunConfig> base;
  if (!src.preset.empty()) base = preset_config(src.preset);
  if (src.config_path.empty()) return *base;
  return load_run_config(src.config_path, base);
}

// n accepts a positive integer or "inf".
int parse_column(const std::string& text) {
  if (text == "inf" || text == "infinity") return 0;
  int n = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc{} || ptr != text.data() + text.size() || n <= 0) {
    throw InvalidConfig("--n must be a positive integer or 'inf'");
  }
  return n;
}

std::string column_label(int n) { return n == 0 ? "inf" : std::to_string(n); }

Row critical_row(const CriticalValue& v, double a, int n) {
  const bool solved = !(v.kind == CriticalKind::mu1 || v.kind == CriticalKind::nu1) && !v.divergent;
  return {std::string(to_string(v.kind)),
          format_number(a),
          column_label(n),
          format_number(v.value),
          solved ? format_number(v.root.lo) : "",
          solved ? format_number(v.root.hi) : "",
          solved ? std::to_string(v.root.iterations) : "0",
          solved ? format_number(v.root.residual) : "0"};
}

void emit(const CsvTable& table, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    write_csv(out, table);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InvalidConfig("cannot open output file '" + path + "'");
  write_csv(file, table);
}

void write_aligned(std::ostream& out, const CsvTable& table) {
  std::vector<std::size_t> width(table.header.size());
  for (std::size_t c = 0; c < width.size(); ++c) {
    width[c] = table.header[c].size();
    for (const auto& row : table.rows) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const Row& fields) {
    for (std::size_t c = 0; c < fields.size(); ++c) {
      out << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << fields[c];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

std::string table_number(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(4) << v;
  return s.str();
}

}  // namespace

int worker_count() {
  const char* env = std::getenv("ZB_THREADS");
  int n = 0;
  if (env && *env) {
    const std::string_view text{env};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc{} || ptr != text.data() + text.size() || n < 0) {
      throw InvalidConfig("ZB_THREADS must be a non-negative integer");
    }
  }
  if (n == 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return n;
}

CsvTable observe_table(const RunConfig& cfg, Observable obs, bool strict, int workers) {
  const std::vector<double> ts = time_grid(cfg);
  const ExpectationOptions opts = options_for(cfg);
  CsvTable table;
  table.header = {"t_fs", "value", "spreading_part", "zb_part", "est_error", "method"};
  table.rows = map_rows(ts.size(), workers, [&](std::size_t i) {
    const ExpectationResult r = expectation(obs, ts[i], cfg.packet, opts);
    if (strict && !r.converged) throw NonConvergence(std::string(to_string(obs)) + " did not converge at " + time_label(ts[i]));
    return Row{format_number(ts[i]),      format_number(r.value),     format_number(r.spreading_part),
               format_number(r.zb_part),  format_number(r.est_error), std::string(to_string(r.method))};
  });
  return table;
}

CsvTable uncertainty_table(const RunConfig& cfg, Pair pair, bool strict, int workers) {
  const std::vector<double> ts = time_grid(cfg);
  const ExpectationOptions opts = options_for(cfg);
  CsvTable table;
  table.header = {"t_fs", "product", "delta_pos", "delta_conj", "free_baseline", "est_error"};
  table.rows = map_rows(ts.size(), workers, [&](std::size_t i) {
    const UncertaintyPoint p = uncertainty(pair, ts[i], cfg.packet, opts);
    if (strict && !p.converged) {
      throw NonConvergence(std::string(to_string(pair)) + " did not converge at " + time_label(ts[i]));
    }
    return Row{format_number(ts[i]),         format_number(p.product),       format_number(p.delta_pos),
               format_number(p.delta_conj),  format_number(p.free_baseline), format_number(p.est_error)};
  });
  return table;
}

CsvTable weights_table(const RunConfig& cfg) {
  QuadSettings q;
  q.rel_tol = std::min(cfg.rel_tol, 1e-12);
  const SpectralWeights w = packet_split_weights(cfg.packet, q);
  CsvTable table;
  table.header = {"p_plus", "p_minus", "delta_p"};
  table.rows.push_back({format_number(w.p_plus), format_number(w.p_minus), format_number(w.delta_p)});
  return table;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian wave packets in gapped graphene: expectation values, uncertainties, critical gaps"};
  app.name("zitter");
  app.require_subcommand(1);

  Source src;
  std::string output;
  bool strict = false;
  std::string method_override;
  auto add_source = [&](CLI::App* sub) {
    sub->add_option("--config", src.config_path, "key = value config file");
    sub->add_option("--preset", src.preset, "figure preset")->check(CLI::IsMember(preset_names()));
    sub->add_option("--output,-o", output, "CSV path, '-' for stdout");
  };

  std::string observable_name;
  auto* observe = app.add_subcommand("observe", "time series of one expectation value");
  add_source(observe);
  observe->add_option("--observable", observable_name, "x, y, x2, y2, vx or vy")->required();
  observe->add_option("--method", method_override, "quadrature, series or both");
  observe->add_flag("--strict", strict, "exit 3 if any point misses its tolerance");

  std::string pair_name;
  auto* uncert = app.add_subcommand("uncertainty", "time series of an uncertainty product");
  add_source(uncert);
  uncert->add_option("--pair", pair_name, "xp, yp, xv or yv")->required();
  uncert->add_option("--method", method_override, "quadrature, series or both");
  uncert->add_flag("--strict", strict, "exit 3 if any point misses its tolerance");

  std::string which = "all";
  double spinor_a = 0.9;
  std::string column = "10";
  auto* critical = app.add_subcommand("critical", "critical gap values for one table column");
  critical->add_option("--which", which, "all, mu1, mu2, mu2star, nu1, nu2 or nu2star");
  critical->add_option("--a", spinor_a, "upper spinor amplitude");
  critical->add_option("--n", column, "center reduction 1.2/n, or inf");
  critical->add_option("--output,-o", output, "CSV path, '-' for stdout");

  std::string table_name = "I";
  std::string format = "csv";
  auto* tables = app.add_subcommand("tables", "regenerate a full table of critical values");
  tables->add_option("--which", table_name, "I or II")->check(CLI::IsMember({"I", "II"}));
  tables->add_option("--format", format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
  tables->add_option("--output,-o", output, "path, '-' for stdout");

  auto* weights = app.add_subcommand("weights", "positive/negative energy weights of the packet");
  add_source(weights);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*observe || *uncert) {
      RunConfig cfg = resolve(src);
      if (!method_override.empty()) {
        const auto m = parse_method(method_override);
        if (!m) throw InvalidConfig("--method must be quadrature, series or both");
        cfg.method = *m;
      }
      const int workers = worker_count();
      if (*observe) {
        const auto obs = parse_observable(observable_name);
        if (!obs) throw InvalidConfig("--observable must be x, y, x2, y2, vx or vy");
        emit(observe_table(cfg, *obs, strict, workers), output, out);
      } else {
        const auto pair = parse_pair(pair_name);
        if (!pair) throw InvalidConfig("--pair must be xp, yp, xv or yv");
        emit(uncertainty_table(cfg, *pair, strict, workers), output, out);
      }
    } else if (*weights) {
      emit(weights_table(resolve(src)), output, out);
    } else if (*critical) {
      const int n = parse_column(column);
      std::vector<CriticalKind> kinds;
      if (which == "all") {
        kinds = {CriticalKind::mu1, CriticalKind::mu2, CriticalKind::mu2_star,
                 CriticalKind::nu1, CriticalKind::nu2, CriticalKind::nu2_star};
      } else {
        const auto k = parse_critical_kind(which);
        if (!k) throw InvalidConfig("--which must be all, mu1, mu2, mu2star, nu1, nu2 or nu2star");
        kinds = {*k};
      }
      CsvTable table;
      table.header = {"quantity", "a", "n", "value", "bracket_lo", "bracket_hi", "iterations", "residual"};
      for (CriticalKind k : kinds) {
        const bool x_pair = k == CriticalKind::mu1 || k == CriticalKind::mu2 || k == CriticalKind::mu2_star;
        const PacketConfig cfg = table_config(x_pair ? TableId::I : TableId::II, spinor_a, n);
        try {
          table.rows.push_back(critical_row(critical_value(k, cfg), spinor_a, n));
        } catch (const Error& e) {
          throw NonConvergence(std::string(to_string(k)) + " (a = " + format_number(spinor_a) +
                               ", n = " + column_label(n) + "): " + e.what());
        }
      }
      emit(table, output, out);
    } else if (*tables) {
      const TableId id = table_name == "I" ? TableId::I : TableId::II;
      std::vector<TableCell> cells;
      try {
        cells = critical_table(id);
      } catch (const Error& e) {
        throw NonConvergence(std::string("table ") + table_name + ": " + e.what());
      }
      CsvTable table;
      table.header = {"quantity", "a"};
      for (int n : kTableColumns) table.header.push_back("n_" + column_label(n));
      const bool text = format == "text";
      for (std::size_t i = 0; i < cells.size(); i += kTableColumns.size()) {
        Row row{std::string(to_string(cells[i].kind)), format_number(cells[i].a)};
        for (std::size_t c = 0; c < kTableColumns.size(); ++c) {
          const double v = cells[i + c].value.value;
          row.push_back(text ? table_number(v) : format_number(v));
        }
        table.rows.push_back(std::move(row));
      }
      if (text) {
        std::ostringstream buf;
        write_aligned(buf, table);
        if (output.empty() || output == "-") {
          out << buf.str();
        } else {
          std::ofstream file(output, std::ios::binary);
          if (!file) throw InvalidConfig("cannot open output file '" + output + "'");
          file << buf.str();
        }
      } else {
        emit(table, output, out);
      }
    }
  } catch (const InvalidConfig& e) {
    err << "zitter: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const GapRequired& e) {
    err << "zitter: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "zitter: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace zitter::cli
