/*
   Copyright 2026 The mvlevy Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#pragma once

#include "mvlevy/cli/config.hpp"

#include <iosfwd>
#include <string>

namespace mvlevy::cli {

enum ExitCode : int { Success = 0, ConfigFailure = 2, NumericalFailure = 3, ProbeFailure = 4 };

/// Runs one subcommand and writes its files under cfg.output.dir.  Returns
/// Success or ProbeFailure; library errors propagate.
int run_command(const std::string &command, const ExperimentConfig &cfg, std::ostream &log);

/// run_command with every library error mapped to its exit code and
/// reported on `err` together with its category.
int run_guarded(const std::string &command, const ExperimentConfig &cfg, std::ostream &log, std::ostream &err);

} // namespace mvlevy::cli
