#include "solwave/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace solwave::io {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_field_csv(const fs::path& path, const Field& u) {
  auto out = open_out(path);
  out << "x,u\n";
  for (int j = 0; j < u.grid().points(); ++j) {
    out << format_double(u.grid().node(j)) << ',' << format_double(u[j]) << '\n';
  }
}

void write_spectrum_csv(const fs::path& path, const Field& u) {
  auto out = open_out(path);
  const Spectrum c = u.spectrum();
  out << "k,xi,re,im\n";
  for (std::size_t k = 0; k < c.size(); ++k) {
    out << k << ',' << format_double(u.grid().wavenumber(static_cast<int>(k))) << ','
        << format_double(c[k].real()) << ',' << format_double(c[k].imag()) << '\n';
  }
}

Field read_field_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("x,u", 0) != 0) throw std::runtime_error(path.string() + ": expected header x,u");
  std::vector<double> xs, us;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error(path.string() + ": malformed row");
    xs.push_back(std::stod(line.substr(0, comma)));
    us.push_back(std::stod(line.substr(comma + 1)));
  }
  if (xs.size() < 8) throw std::runtime_error(path.string() + ": too few rows");
  const double h = xs[1] - xs[0];
  const double length = h * static_cast<double>(xs.size());
  auto grid = make_grid(length, static_cast<int>(xs.size()));
  return Field(grid, us);
}

void write_table_csv(const fs::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

void write_columns(const fs::path& path, const std::string& x_name, const std::string& y_name,
                   std::span<const double> x, std::span<const double> y) {
  auto out = open_out(path);
  out << "# " << x_name << ' ' << y_name << '\n';
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    out << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

nlohmann::json solution_json(const WaveSolution& sol) {
  nlohmann::json j;
  j["mu"] = sol.mu;
  j["nu"] = sol.nu;
  j["residual_l2"] = sol.residual_l2;
  j["iterations"] = sol.iterations;
  j["Q"] = sol.values.mass;
  j["L"] = sol.values.dispersion;
  j["N"] = sol.values.nonlinearity;
  j["E"] = sol.values.energy;
  j["method"] = to_string(sol.method);
  j["grid"] = {{"L", sol.u.grid().length()}, {"N", sol.u.grid().points()}};
  j["converged"] = sol.converged;
  j["subcritical"] = sol.subcritical;
  j["message"] = sol.message;
  return j;
}

nlohmann::json record_json(const SweepRecord& rec) {
  return {{"mu", rec.mu},
          {"nu", rec.nu},
          {"speed_gap", rec.speed_gap},
          {"h_half_s_norm", rec.h_half_s_norm},
          {"sup_norm", rec.sup_norm},
          {"Nval", rec.nonlinearity},
          {"Eval", rec.energy},
          {"residual_l2", rec.residual_l2},
          {"tail_mass", rec.tail_mass},
          {"iterations", rec.iterations},
          {"converged", rec.converged}};
}

void write_sweep_csv(const fs::path& path, std::span<const SweepRecord> records) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : records) {
    rows.push_back({r.mu, r.nu, r.speed_gap, r.h_half_s_norm, r.sup_norm, r.nonlinearity, r.energy,
                    r.residual_l2, r.tail_mass, static_cast<double>(r.iterations),
                    r.converged ? 1.0 : 0.0});
  }
  write_table_csv(path,
                  {"mu", "nu", "speed_gap", "h_half_s_norm", "sup_norm", "Nval", "Eval",
                   "residual_l2", "tail_mass", "iterations", "converged"},
                  rows);
}

}  // namespace solwave::io
