/*
 * Copyright 2026 The mot1d Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <ostream>

namespace mot::cli {

/// Entry point of the `mot` tool. Returns the process exit code:
/// 0 success, 2 malformed input, 3 infeasible pair, 4 verification failure.
int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

} // namespace mot::cli
