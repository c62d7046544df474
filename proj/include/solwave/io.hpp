#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "solwave/evolution.hpp"
#include "solwave/field.hpp"
#include "solwave/probes.hpp"
#include "solwave/solver.hpp"

namespace solwave::io {

/// %.17g, so doubles round-trip exactly.
std::string format_double(double v);

/// CSV `x,u`, one row per node.
void write_field_csv(const std::filesystem::path& path, const Field& u);
/// CSV `k,xi,re,im` of the half-spectrum.
void write_spectrum_csv(const std::filesystem::path& path, const Field& u);
/// Reads a `x,u` CSV back onto a grid of matching size and spacing.
Field read_field_csv(const std::filesystem::path& path);

/// Generic numeric table with a header row.
void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

/// Two-column plot data file with a `# x y` comment header.
void write_columns(const std::filesystem::path& path, const std::string& x_name,
                   const std::string& y_name, std::span<const double> x, std::span<const double> y);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

/// {mu, nu, residual_l2, iterations, Q, L, N, E, method, grid: {L, N}, ...}
nlohmann::json solution_json(const WaveSolution& sol);

nlohmann::json record_json(const SweepRecord& rec);

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRecord> records);

}  // namespace solwave::io
