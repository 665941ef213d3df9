// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

namespace accept {

/// Validator population and the byzantine bound derived from it.
struct SystemParams {
    std::size_t n = 0;
    std::size_t f = 0;
    std::size_t quorum = 0;

    bool operator==(const SystemParams &) const = default;
};

/// f = floor((n-1)/3), quorum = 2f+1. Throws InvalidParameter for n = 0.
SystemParams quorum_params(std::size_t n);

} // namespace accept
