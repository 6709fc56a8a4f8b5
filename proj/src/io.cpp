// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0

namespace dp4 {
}  // namespace dp4
