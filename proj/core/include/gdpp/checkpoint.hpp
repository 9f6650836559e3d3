// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "gdpp/mlp.hpp"

namespace gdpp {

/// Named parameter blocks plus free-form metadata. Serialized as a
/// structured text file (see save_checkpoint) so any tool can parse it.
struct Checkpoint {
  std::map<std::string, std::string> meta;
  std::vector<ParamBlock> blocks;

  const ParamBlock* find(const std::string& name) const;
  std::string meta_or(const std::string& key, const std::string& fallback) const;
};

/// Text format, one block per record:
///   gdpp-checkpoint v1
///   meta <key> <value>            (repeated, sorted by key)
///   block <name> <rows> <cols>
///   <rows*cols values, 17 significant digits, space-separated>
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

/// Copy block values into a model whose block names must all be present.
void load_into(const Checkpoint& ckpt, Mlp& mlp);

}  // namespace gdpp
