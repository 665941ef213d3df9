// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/types.hpp>

#include <filesystem>
#include <string>

namespace accept {

/// Genesis file: JSON array of {"amount": "<decimal>", "owner": "<64 lowercase hex>"}.
Genesis parse_genesis_json(std::string_view text);
std::string genesis_to_json(const Genesis &genesis);

Genesis load_genesis(const std::filesystem::path &path);
void save_genesis(const std::filesystem::path &path, const Genesis &genesis);

} // namespace accept
