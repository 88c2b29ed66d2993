// Copyright 2025 The qarsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <ostream>
#include <string>

#include "qarsim/experiment.hpp"

namespace qarsim::cli {

// CSV output is deterministic: provenance lines start with '#', fields follow
// RFC 4180 quoting, and wall-clock times are left to the JSON summary.
void write_csv(std::ostream& os, const SweepResult& r, const std::string& verb);
void write_csv(std::ostream& os, const EvolveResult& r);
void write_csv(std::ostream& os, const Report& r, const std::string& verb);

void write_json(std::ostream& os, const SweepResult& r, const std::string& verb);
void write_json(std::ostream& os, const EvolveResult& r);
void write_json(std::ostream& os, const Report& r, const std::string& verb);

std::string csv_field(const std::string& s);

}  // namespace qarsim::cli
