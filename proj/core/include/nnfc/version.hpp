// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace nnfc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nnfc
