#include "chemolab/experiment.hpp"

#include "chemolab/csv.hpp"
#include "chemolab/errors.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace chemolab {

namespace {

double* coefficient_field(CoefficientSpec& c, const std::string& field) {
  if (field == "base")
    return &c.base;
  if (field == "space_amplitude")
    return &c.space_amplitude;
  if (field == "space_wavelength")
    return &c.space_wavelength;
  if (field == "time_amplitude")
    return &c.time_amplitude;
  if (field == "time_period")
    return &c.time_period;
  return nullptr;
}

SweepRow run_point(const Scenario& base, const std::string& axis, double value,
                   const std::optional<std::filesystem::path>& dir) {
  SweepRow row;
  row.value = value;
  try {
    Scenario s = base;
    apply_axis(s, axis, value);
    validate(s);
    row.bounds = theoretical_bounds(s.params);
    const ExperimentResult result = run_experiment(s, dir);
    row.exit_code = static_cast<int>(result.exit_code);
    if (result.speed)
      row.measured_speed = result.speed->speed;
    row.reports = result.reports;
    if (result.simulation.abort_message)
      row.error = *result.simulation.abort_message;
  } catch (const ConfigError& e) {
    row.exit_code = static_cast<int>(ExitCode::config_error);
    row.error = e.what();
  } catch (const std::exception& e) {
    row.exit_code = static_cast<int>(ExitCode::numerical_abort);
    row.error = e.what();
  }
  return row;
}

std::string csv_text(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n' || c == '"')
      c = ' ';
  return text;
}

} // namespace

void apply_axis(Scenario& s, const std::string& axis, double value) {
  ParameterSet& p = s.params;
  if (axis == "chi") {
    p.chi = value;
    return;
  }
  if (axis == "lambda") {
    p.lambda = value;
    return;
  }
  if (axis == "mu") {
    p.mu = value;
    return;
  }
  if (axis.size() > 2 && axis[1] == '.' && (axis[0] == 'a' || axis[0] == 'b')) {
    CoefficientSpec& c = axis[0] == 'a' ? p.a : p.b;
    if (double* target = coefficient_field(c, axis.substr(2))) {
      *target = value;
      return;
    }
  }
  throw InvalidArgument("unknown sweep axis '" + axis +
                        "' (chi, lambda, mu, a.<field>, b.<field>)");
}

std::size_t sweep_threads(std::size_t points) {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CHEMOLAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0)
      threads = static_cast<std::size_t>(n);
  }
  return std::max<std::size_t>(1, std::min(threads, points));
}

std::vector<SweepRow> sweep(const Scenario& base, const std::string& axis,
                            const std::vector<double>& values,
                            const std::optional<std::filesystem::path>& out_dir,
                            std::size_t threads) {
  {
    // fail fast on a bad axis name before any work starts
    Scenario probe = base;
    apply_axis(probe, axis, 0.0);
  }
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      std::optional<std::filesystem::path> dir;
      if (out_dir)
        dir = *out_dir / ("point_" + std::to_string(i));
      rows[i] = run_point(base, axis, values[i], dir);
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(threads, values.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();

  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    std::ofstream out(*out_dir / "summary.csv");
    if (!out)
      throw Error("cannot write " + (*out_dir / "summary.csv").string());
    write_summary_csv(out, axis, base, rows);
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::string& axis, const Scenario& base,
                       const std::vector<SweepRow>& rows) {
  out << axis << ",h1,h2,h3,m_lower,m_upper,c_minus,c_plus,measured_speed,exit_code";
  for (Check c : base.checks)
    out << ",check_" << to_string(c);
  out << ",error\n";
  auto flag = [](const std::optional<TheoreticalBounds>& b, bool TheoreticalBounds::*f) {
    return b ? std::string((*b).*f ? "1" : "0") : std::string();
  };
  auto field = [](const std::optional<TheoreticalBounds>& b,
                  std::optional<double> TheoreticalBounds::*f) {
    return b ? format_number((*b).*f) : std::string();
  };
  for (const auto& row : rows) {
    out << format_number(row.value) << ',' << flag(row.bounds, &TheoreticalBounds::h1) << ','
        << flag(row.bounds, &TheoreticalBounds::h2) << ','
        << flag(row.bounds, &TheoreticalBounds::h3) << ','
        << field(row.bounds, &TheoreticalBounds::m_lower) << ','
        << field(row.bounds, &TheoreticalBounds::m_upper) << ','
        << field(row.bounds, &TheoreticalBounds::c_minus) << ','
        << field(row.bounds, &TheoreticalBounds::c_plus) << ','
        << format_number(row.measured_speed) << ',' << row.exit_code;
    for (Check c : base.checks) {
      out << ',';
      for (const auto& r : row.reports)
        if (r.name == to_string(c))
          out << to_string(r.status);
    }
    out << ',' << csv_text(row.error) << '\n';
  }
}

} // namespace chemolab
