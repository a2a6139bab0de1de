#include "sheetcas/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "sheetcas/asymptotics.hpp"
#include "sheetcas/energy.hpp"
#include "sheetcas/errors.hpp"
#include "sheetcas/pfa.hpp"

namespace sheetcas {

std::string method_name(Method m) {
  switch (m) {
    case Method::Exact: return "exact";
    case Method::Pfa: return "pfa";
    case Method::Asympt: return "asympt";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty() || !std::isfinite(v))
    throw UsageError("not a number: '" + std::string(text) + "'");
  return v;
}

int parse_int(std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty())
    throw UsageError("not an integer: '" + std::string(text) + "'");
  return v;
}

std::optional<int> parse_auto_int(std::string_view text) {
  if (trim(text) == "auto") return std::nullopt;
  return parse_int(text);
}

double positive(double v, const char* what) {
  if (!(v > 0.0)) throw UsageError(std::string(what) + " must be > 0");
  return v;
}

std::vector<Method> parse_methods(std::string_view text) {
  text = trim(text);
  if (text == "all") return {Method::Exact, Method::Pfa, Method::Asympt};
  std::vector<Method> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                            : comma - pos));
    if (item == "exact") out.push_back(Method::Exact);
    else if (item == "pfa") out.push_back(Method::Pfa);
    else if (item == "asympt") out.push_back(Method::Asympt);
    else throw UsageError("unknown method '" + std::string(item) + "' (exact, pfa, asympt, all)");
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Plasma parse_plasma(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "infinity" || text == "Inf") return Plasma::perfect();
  const double v = parse_double(text);
  if (v < 0.0) throw UsageError("plasma parameter must be >= 0 or inf");
  return Plasma(v);
}

void SweepConfig::validate() const {
  if (methods.empty()) throw UsageError("no method selected");
  if (!radius) throw UsageError("radius is required");
  if (!gap_min || !gap_max) throw UsageError("gap (or gap_min and gap_max) is required");
  if (!omega_sphere) throw UsageError("omega_sphere is required");
  if (!omega_plane) throw UsageError("omega_plane is required");
  if (!(*radius > 0.0)) throw UsageError("radius must be > 0");
  if (!(*gap_min > 0.0) || !(*gap_max > 0.0)) throw UsageError("gaps must be > 0");
  if (count < 1) throw UsageError("count must be >= 1");
  if (*gap_max < *gap_min) throw UsageError("gap_max < gap_min");
  if (count == 1 && *gap_max != *gap_min) throw UsageError("a gap range needs count >= 2");
  if (count > 1 && *gap_max == *gap_min) throw UsageError("empty gap range");
  try {
    numerics.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> SweepConfig::gaps() const {
  validate();
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = *gap_min;
    return out;
  }
  for (int i = 0; i < count; ++i) {
    const double f = double(i) / (count - 1);
    out[i] = spacing == Spacing::Log
                 ? std::exp(std::log(*gap_min) + f * (std::log(*gap_max) - std::log(*gap_min)))
                 : *gap_min + f * (*gap_max - *gap_min);
  }
  out.front() = *gap_min;
  out.back() = *gap_max;
  return out;
}

std::vector<Setting> read_settings(std::string_view text) {
  std::vector<Setting> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw UsageError(where + ": expected key=value");
    out.push_back({std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), where});
  }
  return out;
}

void apply_setting(SweepConfig& c, const Setting& s) {
  const std::string& k = s.key;
  try {
    if (k == "method") c.methods = parse_methods(s.value);
    else if (k == "radius") c.radius = positive(parse_double(s.value), "radius");
    else if (k == "gap") c.gap_min = c.gap_max = positive(parse_double(s.value), "gap"), c.count = 1;
    else if (k == "gap_min") c.gap_min = positive(parse_double(s.value), "gap_min");
    else if (k == "gap_max") c.gap_max = positive(parse_double(s.value), "gap_max");
    else if (k == "count") c.count = parse_int(s.value);
    else if (k == "spacing") {
      if (s.value == "log") c.spacing = Spacing::Log;
      else if (s.value == "linear") c.spacing = Spacing::Linear;
      else throw UsageError("spacing must be log or linear");
    }
    else if (k == "omega_sphere") c.omega_sphere = parse_plasma(s.value);
    else if (k == "omega_plane") c.omega_plane = parse_plasma(s.value);
    else if (k == "l_max") c.numerics.l_max = parse_auto_int(s.value);
    else if (k == "m_max") c.numerics.m_max = parse_auto_int(s.value);
    else if (k == "kappa_nodes") c.numerics.kappa_nodes = parse_int(s.value);
    else if (k == "theta_nodes") c.numerics.theta_nodes = parse_int(s.value);
    else if (k == "rel_tol") c.numerics.rel_tol = positive(parse_double(s.value), "rel_tol");
    else if (k == "abs_tol") c.numerics.abs_tol = positive(parse_double(s.value), "abs_tol");
    else if (k == "threads") c.numerics.threads = parse_int(s.value);
    else if (k == "out") c.out = s.value;
    else throw UsageError("unknown key '" + k + "'");
  } catch (const UsageError& e) {
    throw UsageError(s.where + ": " + k + ": " + e.what());
  }
}

SweepConfig parse_config(const std::optional<std::string>& path, const std::vector<Setting>& overrides) {
  SweepConfig c;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw UsageError("cannot read config file '" + *path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      for (const auto& s : read_settings(ss.str())) apply_setting(c, s);
    } catch (const UsageError& e) {
      throw UsageError(*path + ": " + e.what());
    }
  }
  for (const auto& s : overrides) apply_setting(c, s);
  return c;
}

SweepRow evaluate_point(Method method, double radius, double gap, const Plasma& omega_sphere,
                        const Plasma& omega_plane, const NumericsSpec& numerics) {
  SweepRow row;
  row.method = method;
  row.radius = radius;
  row.gap = gap;
  row.omega_sphere = omega_sphere;
  row.omega_plane = omega_plane;
  const double pfa_pc = pfa_energy_perfect(radius, gap);  // units 1/m
  auto set_energy = [&](double e_over_hbar_c) {
    const double ej = e_over_hbar_c * kHbarC;
    row.energy_j = ej;
    row.energy_dimensionless = ej * gap * gap / (kHbarC * radius);
    row.ratio_to_pfa_pc = e_over_hbar_c / pfa_pc;
  };
  try {
    switch (method) {
      case Method::Exact: {
        const auto r = casimir_energy({radius, omega_sphere}, {omega_plane, radius + gap}, numerics);
        set_energy(r.energy);
        row.error_estimate = r.error_estimate * kHbarC;
        row.l_max_used = r.l_max_used;
        row.m_max_used = r.m_max_used;
        break;
      }
      case Method::Pfa: {
        set_energy(pfa_energy({omega_sphere.scaled(gap), omega_plane.scaled(gap), radius, gap}));
        break;
      }
      case Method::Asympt: {
        const Plasma vs = omega_sphere.scaled(gap), vp = omega_plane.scaled(gap);
        const double lead = e0(radius, gap, vs, vp);
        const auto next = e1(radius, gap, vs, vp);
        set_energy(lead + next.value);
        row.error_estimate = next.error_estimate * kHbarC;
        if (lead != 0.0) row.theta = next.value / lead * (radius / gap);
        break;
      }
    }
  } catch (const std::exception& e) {
    row.energy_j = row.energy_dimensionless = row.ratio_to_pfa_pc = std::nullopt;
    row.theta = row.error_estimate = std::nullopt;
    row.l_max_used = row.m_max_used = std::nullopt;
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

std::string format_row(const SweepRow& r) {
  auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  auto opti = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
  std::string s = method_name(r.method);
  for (const std::string& f :
       {fmt(r.radius), fmt(r.gap), fmt(r.radius + r.gap), r.omega_sphere.to_string(),
        r.omega_plane.to_string(), opt(r.energy_j), opt(r.energy_dimensionless),
        opt(r.ratio_to_pfa_pc), opt(r.theta), opt(r.error_estimate), opti(r.l_max_used),
        opti(r.m_max_used), csv_field(r.status)})
    s += "," + f;
  return s;
}

SweepSummary run_sweep(const std::vector<SweepConfig>& configs, std::ostream& csv, int threads) {
  struct Task {
    Method method;
    double radius, gap;
    Plasma os, op;
    NumericsSpec numerics;
  };
  std::vector<Task> tasks;
  for (const auto& c : configs)
    for (double g : c.gaps())
      for (Method m : c.methods)
        tasks.push_back({m, *c.radius, g, *c.omega_sphere, *c.omega_plane, c.numerics});

  const int workers = std::clamp(threads, 1, std::max<int>(1, static_cast<int>(tasks.size())));
  std::vector<SweepRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      NumericsSpec n = t.numerics;
      if (workers > 1) n.threads = 1;
      rows[i] = evaluate_point(t.method, t.radius, t.gap, t.os, t.op, n);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  SweepSummary summary;
  csv << kCsvHeader << "\n";
  for (const auto& r : rows) {
    csv << format_row(r) << "\n";
    ++summary.rows;
    if (r.status != "ok") ++summary.failures;
  }
  csv.flush();
  return summary;
}

std::vector<SweepConfig> figure_configs(int figure) {
  if (figure < 1 || figure > 6) throw UsageError("figure must be 1..6");
  auto make = [](double os, double op, double dmin, double dmax, int count, std::vector<Method> m) {
    SweepConfig c;
    c.methods = std::move(m);
    c.radius = 1e-3;
    c.gap_min = dmin;
    c.gap_max = dmax;
    c.count = count;
    c.omega_sphere = Plasma(os);
    c.omega_plane = Plasma(op);
    return c;
  };
  constexpr double graphene = 6.75e5;
  switch (figure) {
    case 1: return {make(graphene, graphene, 1e-7, 1e-4, 16, {Method::Pfa, Method::Asympt})};
    case 2: return {make(graphene, graphene, 1e-7, 1e-4, 16, {Method::Asympt})};
    case 3: return {make(graphene, graphene, 1e-8, 1e-3, 21, {Method::Asympt})};
    default: break;
  }
  const Method m = figure == 4 ? Method::Pfa : Method::Asympt;
  std::vector<SweepConfig> out;
  for (auto [os, op] : {std::pair{1e5, 1e5}, std::pair{graphene, graphene}, std::pair{5e6, 5e6},
                        std::pair{1e5, 5e6}})
    out.push_back(make(os, op, 1e-7, 1e-4, 13, {m}));
  return out;
}

}  // namespace sheetcas
