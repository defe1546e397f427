// SPDX-License-Identifier: Apache-2.0
//
// mirrorroom: mirror-source radio channel toolkit for rectangular rooms
// Copyright (C) 2026 The mirrorroom authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mirrorroom
{
    // Process exit codes.
    enum ExitCode : int
    {
        exit_ok = 0,
        exit_check_failed = 1,
        exit_usage = 2,
        exit_io = 3
    };

    // Entry point behind the `mirrorroom` executable. `args` excludes argv[0].
    int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace mirrorroom
