#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "buckspec/assembly.hpp"
#include "buckspec/errors.hpp"
#include "buckspec/solver.hpp"
#include "buckspec/types.hpp"
#include "buckspec/version.hpp"

namespace buckspec {

using ordered_json = nlohmann::ordered_json;

inline constexpr int spectrum_schema_version = 1;

// Shortest round-trip decimal form, shared by every text emitter.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex_digest(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

inline ordered_json problem_to_json(const ProblemSpec& problem) {
  ordered_json j;
  j["l"] = problem.order;
  j["kind"] = to_string(problem.kind);
  j["domain"] = {{"kind", to_string(problem.domain.kind)}, {"lengths", problem.domain.lengths}};
  return j;
}

inline ProblemSpec problem_from_json(const ordered_json& j) {
  ProblemSpec problem;
  problem.order = j.at("l").get<int>();
  problem.kind = parse_problem_kind(j.at("kind").get<std::string>());
  problem.domain.kind = parse_domain_kind(j.at("domain").at("kind").get<std::string>());
  problem.domain.lengths = j.at("domain").at("lengths").get<std::vector<double>>();
  problem.validate();
  return problem;
}

inline ordered_json spectrum_to_json(const Spectrum& spectrum,
                                     const std::string& produced_by = version_string) {
  ordered_json j;
  j["schema_version"] = spectrum_schema_version;
  j["problem"] = problem_to_json(spectrum.problem);
  j["solver"] = {{"degrees", spectrum.resolution.degrees},
                 {"quadrature", spectrum.resolution.quadrature},
                 {"mode_cutoff", spectrum.resolution.mode_cutoff}};
  j["values"] = spectrum.values;
  j["convergence"] = spectrum.convergence;
  j["produced_by"] = produced_by;
  return j;
}

struct StoredSpectrum {
  Spectrum spectrum;
  std::string produced_by;

  // Solver-produced values carry discretization error; anything else is
  // treated as exact input.
  Tolerance tolerance() const {
    return produced_by.starts_with("buckspec") ? discrete_tolerance : exact_tolerance;
  }
};

inline StoredSpectrum spectrum_from_json(const ordered_json& j) {
  if (j.at("schema_version").get<int>() != spectrum_schema_version)
    fail(errc::invalid_argument, "unsupported spectrum schema version");
  StoredSpectrum stored;
  stored.spectrum.problem = problem_from_json(j.at("problem"));
  const auto& solver = j.at("solver");
  stored.spectrum.resolution.degrees = solver.at("degrees").get<std::vector<int>>();
  stored.spectrum.resolution.quadrature = solver.at("quadrature").get<int>();
  stored.spectrum.resolution.mode_cutoff = solver.at("mode_cutoff").get<int>();
  stored.spectrum.values = validate_spectrum(j.at("values").get<std::vector<double>>());
  stored.spectrum.convergence = j.at("convergence").get<std::vector<double>>();
  if (stored.spectrum.convergence.size() != stored.spectrum.values.size())
    fail(errc::invalid_argument, "convergence and values lengths differ");
  stored.produced_by = j.value("produced_by", std::string());
  return stored;
}

inline std::string spectrum_to_string(const Spectrum& spectrum,
                                      const std::string& produced_by = version_string) {
  return spectrum_to_json(spectrum, produced_by).dump(2) + "\n";
}

inline StoredSpectrum read_spectrum_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errc::file_not_found, path.string());
  ordered_json j;
  try {
    in >> j;
    return spectrum_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::invalid_argument, path.string() + ": " + e.what());
  }
}

// Single-writer contract: build the bytes first, then write-and-rename so
// readers never observe a torn file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp~";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::invalid_argument, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.flush()) fail(errc::invalid_argument, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// Content address of a solve request: every field that can change the output
// bytes, canonicalized, hashed.
inline std::string cache_key(const ProblemSpec& problem, const SolveConfig& config,
                             bool refine_mode) {
  ordered_json j;
  j["problem"] = problem_to_json(problem);
  ordered_json solver;
  solver["k"] = config.k;
  if (refine_mode) {
    solver["refine"] = {{"rel_tol", config.refine.rel_tol},
                        {"max_degree", config.refine.max_degree}};
  } else {
    solver["degrees"] = config.degrees;
    solver["quadrature"] = config.quadrature;
  }
  if (problem.domain.kind == DomainKind::cylinder) solver["mode_cutoff"] = config.mode_cutoff;
  j["solver"] = solver;
  j["version"] = version_string;
  return hex_digest(fnv1a64(j.dump()));
}

}  // namespace buckspec
