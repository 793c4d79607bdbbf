// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <fstream>
#include <sstream>

namespace segmap::cli {

void check(sm_status s) {
  if (s != SM_OK) throw ApiError(s, std::string(sm_status_name(s)) + ": " + sm_last_error());
}

std::string take(char* s) {
  std::string out = s ? s : "";
  sm_string_free(s);
  return out;
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

std::string sha256_of(const std::filesystem::path& p) {
  char* hex = nullptr;
  check(sm_sha256_file(p.c_str(), &hex));
  return take(hex);
}

RunManifest::RunManifest(std::string subcommand, std::filesystem::path out_dir, nlohmann::json config)
    : subcommand_(std::move(subcommand)), out_dir_(std::move(out_dir)), config_(std::move(config)) {}

void RunManifest::input(const std::filesystem::path& p) {
  inputs_.push_back({{"path", p.string()}, {"sha256", sha256_of(p)}});
}

std::filesystem::path RunManifest::output(const std::filesystem::path& rel, const std::string& content) {
  auto full = out_dir_ / rel;
  write_text(full, content);
  outputs_.push_back({{"path", rel.generic_string()}, {"sha256", sha256_of(full)}});
  return full;
}

void RunManifest::produced(const std::filesystem::path& rel) {
  outputs_.push_back({{"path", rel.generic_string()}, {"sha256", sha256_of(out_dir_ / rel)}});
}

void RunManifest::seed(const std::string& name, std::uint64_t value) { seeds_[name] = value; }

void RunManifest::note(const std::string& key, nlohmann::json value) { notes_[key] = std::move(value); }

void RunManifest::write() const {
  nlohmann::json j = {{"subcommand", subcommand_}, {"version", sm_version()}, {"config", config_},
                      {"seeds", seeds_},           {"inputs", inputs_},       {"outputs", outputs_}};
  if (!notes_.empty()) j["notes"] = notes_;
  write_text(out_dir_ / "manifests" / (subcommand_ + ".json"), j.dump(2) + "\n");
}

void require_artifact(const std::filesystem::path& p, const std::string& producer) {
  if (!std::filesystem::exists(p)) {
    throw MissingArtifact("missing " + p.string() + "; run '" + producer + "' first");
  }
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::istringstream in(read_text(p));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    std::size_t i = line.find_first_not_of(" \t");
    if (i == std::string::npos || line[i] == '#') continue;
    out.push_back(line.substr(i));
  }
  return out;
}

}  // namespace segmap::cli
