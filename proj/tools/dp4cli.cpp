// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0

int main() { return 0; }
