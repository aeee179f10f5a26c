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

#include "cvdvswap/transcript.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cvdvswap/errors.hpp"

namespace cvdvswap {
namespace {

Party parse_party(const std::string& name) {
  if (name == "Alice") return Party::Alice;
  if (name == "Bob") return Party::Bob;
  if (name == "Charlie") return Party::Charlie;
  throw InvalidParameter("transcript: unknown party '" + name + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Party party) {
  switch (party) {
    case Party::Alice: return "Alice";
    case Party::Bob: return "Bob";
    case Party::Charlie: return "Charlie";
  }
  return "?";
}

bool transcript_complete(const Transcript& transcript) {
  if (transcript.size() != 4) return false;
  const auto& m = transcript;
  return m[0] == ClassicalMessage::dispatch(Party::Alice) &&
         m[1] == ClassicalMessage::dispatch(Party::Bob) &&
         m[2] == ClassicalMessage::homodyne(Party::Alice, m[2].x_d, m[2].p_d) &&
         m[3] == ClassicalMessage::homodyne(Party::Bob, m[2].x_d, m[2].p_d);
}

std::string format_message(const ClassicalMessage& message) {
  std::string line;
  line += to_string(message.sender);
  line += '\t';
  line += to_string(message.receiver);
  if (message.kind == ClassicalMessage::Kind::ModeDispatch) {
    line += "\tdispatch";
  } else {
    line += "\thomodyne\t" + format_double(message.x_d) + '\t' + format_double(message.p_d);
  }
  return line;
}

ClassicalMessage parse_message(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string sender, receiver, kind;
  if (!(in >> sender >> receiver >> kind)) {
    throw InvalidParameter("transcript: malformed line '" + std::string(line) + "'");
  }
  ClassicalMessage message;
  message.sender = parse_party(sender);
  message.receiver = parse_party(receiver);
  if (kind == "dispatch") {
    message.kind = ClassicalMessage::Kind::ModeDispatch;
  } else if (kind == "homodyne") {
    message.kind = ClassicalMessage::Kind::HomodyneOutcome;
    std::string xs, ps;
    if (!(in >> xs >> ps)) throw InvalidParameter("transcript: homodyne line lacks values");
    message.x_d = std::stod(xs);
    message.p_d = std::stod(ps);
  } else {
    throw InvalidParameter("transcript: unknown payload '" + kind + "'");
  }
  return message;
}

void write_transcript(std::ostream& out, const Transcript& transcript) {
  for (const auto& m : transcript) out << format_message(m) << '\n';
}

Transcript read_transcript(std::istream& in) {
  Transcript transcript;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    transcript.push_back(parse_message(line));
  }
  return transcript;
}

}  // namespace cvdvswap
