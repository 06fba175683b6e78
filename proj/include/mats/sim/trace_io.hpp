#pragma once

#include <iosfwd>
#include <stdexcept>

#include "json.hpp"
#include "mats/sim/simulator.hpp"

namespace mats {

/// Malformed or non-replayable trace. CLI exit code 2.
class TraceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::ordered_json to_json(const Policy& p);
/// Fields missing from `j` keep their value in `base`.
Policy policy_from_json(const nlohmann::json& j, Policy base = {});

/// Header line, then one line per step:
/// {"step","schema","participants","active","params","digest"}.
void write_trace_jsonl(std::ostream& out, const Trace& trace);

/// Parses and replays from c0: each step must be enabled where it occurs and
/// reproduce its recorded digest and active set.
Trace read_trace_jsonl(std::istream& in);

}  // namespace mats
