#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "denskit/bespoke.hpp"
#include "denskit/digest.hpp"
#include "denskit/inpca.hpp"
#include "denskit/pdf.hpp"

namespace denskit {

// Shortest round-trip decimal text; the same doubles always print the same
// bytes, which the determinism contract relies on.
inline std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw NumericalError("fmt_double: conversion failed");
  return std::string(buf, ptr);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  if (!out) throw ConfigError("write failed for " + path.string());
}

inline nlohmann::json pdf_to_json(const DiscretePdf& pdf) {
  nlohmann::json j;
  j["grid"] = {{"num_digits", pdf.grid.num_digits}, {"num_bins", pdf.grid.num_bins}};
  j["mass"] = pdf.mass;
  return j;
}

inline DiscretePdf pdf_from_json(const nlohmann::json& j) {
  Grid grid(j.at("grid").at("num_digits").get<int>());
  DiscretePdf pdf{grid, j.at("mass").get<std::vector<double>>()};
  pdf.validate();
  return pdf;
}

inline nlohmann::json trajectory_to_json(const Trajectory& traj) {
  nlohmann::json j;
  j["label"] = traj.label;
  j["context_lengths"] = traj.context_lengths;
  nlohmann::json pdfs = nlohmann::json::array();
  for (const auto& p : traj.pdfs) pdfs.push_back(p.mass);
  j["pdfs"] = pdfs;
  return j;
}

inline Trajectory trajectory_from_json(const nlohmann::json& j, const Grid& grid) {
  Trajectory traj;
  traj.label = j.at("label").get<std::string>();
  traj.context_lengths = j.at("context_lengths").get<std::vector<int>>();
  for (const auto& mass : j.at("pdfs")) {
    DiscretePdf pdf{grid, mass.get<std::vector<double>>()};
    pdf.validate();
    traj.pdfs.push_back(std::move(pdf));
  }
  return traj;
}

inline nlohmann::json trajectories_to_json(const Grid& grid, const DiscretePdf& target,
                                           const std::vector<Trajectory>& trajectories) {
  nlohmann::json j;
  j["grid"] = {{"num_digits", grid.num_digits}, {"num_bins", grid.num_bins}};
  j["target"] = target.mass;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& t : trajectories) list.push_back(trajectory_to_json(t));
  j["trajectories"] = list;
  return j;
}

// Columns: label, coord_1..coord_d.
inline std::string embedding_to_csv(const Embedding& emb, int max_dims = 0) {
  const Eigen::Index d = (max_dims > 0) ? std::min<Eigen::Index>(max_dims, emb.coords.cols())
                                        : emb.coords.cols();
  std::string out = "label";
  for (Eigen::Index k = 0; k < d; ++k) out += ",coord_" + std::to_string(k + 1);
  out += "\n";
  for (Eigen::Index i = 0; i < emb.coords.rows(); ++i) {
    out += emb.labels[i];
    for (Eigen::Index k = 0; k < d; ++k) out += "," + fmt_double(emb.coords(i, k));
    out += "\n";
  }
  return out;
}

// Spectrum companion to the CSV: eigenvalues and cumulative explained
// fractions.
inline nlohmann::json embedding_spectrum_json(const Embedding& emb) {
  nlohmann::json j;
  j["eigenvalues"] = emb.eigenvalues;
  j["explained"] = emb.explained;
  return j;
}

// Contract columns for a fitted schedule.
inline std::string fit_schedule_to_csv(const FitSchedule& schedule) {
  std::string out = "n,h,sigma_h,s,sigma_s,residual,converged\n";
  for (const FitPoint& p : schedule.points) {
    out += std::to_string(p.context_length) + "," + fmt_double(p.h) + "," + fmt_double(p.sigma_h) +
           "," + fmt_double(p.s) + "," + fmt_double(p.sigma_s) + "," + fmt_double(p.residual) +
           "," + (p.converged ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace denskit
