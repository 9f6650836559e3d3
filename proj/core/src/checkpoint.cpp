// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "gdpp/errors.hpp"
#include "gdpp/report.hpp"

namespace gdpp {

const ParamBlock* Checkpoint::find(const std::string& name) const {
  for (const auto& b : blocks)
    if (b.name == name) return &b;
  return nullptr;
}

std::string Checkpoint::meta_or(const std::string& key, const std::string& fallback) const {
  auto it = meta.find(key);
  return it == meta.end() ? fallback : it->second;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("save_checkpoint: cannot write " + path);
  out << "gdpp-checkpoint v1\n";
  for (const auto& [key, value] : ckpt.meta) out << "meta " << key << " " << value << "\n";
  for (const auto& block : ckpt.blocks) {
    out << "block " << block.name << " " << block.value.rows() << " "
        << block.value.cols() << "\n";
    for (std::int64_t i = 0; i < block.value.size(); ++i) {
      if (i) out << " ";
      out << full_precision(block.value[i]);
    }
    out << "\n";
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_checkpoint: cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != "gdpp-checkpoint v1")
    throw ConfigError("load_checkpoint: " + path + " is not a v1 checkpoint");

  Checkpoint ckpt;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "meta") {
      std::string key, value;
      ls >> key;
      std::getline(ls, value);
      if (!value.empty() && value.front() == ' ') value.erase(0, 1);
      ckpt.meta[key] = value;
    } else if (tag == "block") {
      std::string name;
      int rows = 0, cols = 0;
      ls >> name >> rows >> cols;
      Tensor t(rows, cols);
      for (std::int64_t i = 0; i < t.size(); ++i)
        if (!(in >> t[i]))
          throw ConfigError("load_checkpoint: truncated values for block " + name);
      in.ignore();  // trailing newline
      ckpt.blocks.push_back({name, std::move(t)});
    } else {
      throw ConfigError("load_checkpoint: unexpected line '" + line + "'");
    }
  }
  return ckpt;
}

void load_into(const Checkpoint& ckpt, Mlp& mlp) {
  for (auto& block : mlp.blocks()) {
    const ParamBlock* src = ckpt.find(block.name);
    if (!src) throw ConfigError("checkpoint: missing block " + block.name);
    if (!src->value.same_shape(block.value))
      throw ConfigError("checkpoint: block " + block.name + " has shape " +
                        std::to_string(src->value.rows()) + "x" +
                        std::to_string(src->value.cols()) + ", expected " +
                        std::to_string(block.value.rows()) + "x" +
                        std::to_string(block.value.cols()));
    block.value = src->value;
  }
}

}  // namespace gdpp
