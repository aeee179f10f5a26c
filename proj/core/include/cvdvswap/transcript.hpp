// Copyright 2026 The cvdvswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cvdvswap {

enum class Party { Alice, Bob, Charlie };

std::string_view to_string(Party party);

/// One entry of the classical side channel between the three parties.
struct ClassicalMessage {
  enum class Kind { ModeDispatch, HomodyneOutcome };

  Party sender = Party::Alice;
  Party receiver = Party::Charlie;
  Kind kind = Kind::ModeDispatch;
  double x_d = 0.0;  // HomodyneOutcome only
  double p_d = 0.0;  // HomodyneOutcome only

  static ClassicalMessage dispatch(Party from) { return {from, Party::Charlie, Kind::ModeDispatch}; }
  static ClassicalMessage homodyne(Party to, double x_d, double p_d) {
    return {Party::Charlie, to, Kind::HomodyneOutcome, x_d, p_d};
  }

  bool operator==(const ClassicalMessage&) const = default;
};

using Transcript = std::vector<ClassicalMessage>;

/// True iff the transcript is exactly: Alice->Charlie dispatch, Bob->Charlie
/// dispatch, Charlie->Alice outcome, Charlie->Bob outcome, with both outcome
/// messages carrying the same values.
bool transcript_complete(const Transcript& transcript);

/// Line format, tab separated, floats printed with 17 significant digits:
///   <sender> <receiver> dispatch
///   <sender> <receiver> homodyne <x_D> <p_D>
std::string format_message(const ClassicalMessage& message);
ClassicalMessage parse_message(std::string_view line);

void write_transcript(std::ostream& out, const Transcript& transcript);
Transcript read_transcript(std::istream& in);

}  // namespace cvdvswap
