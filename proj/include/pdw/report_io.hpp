#pragma once

// JSON and CSV serialisation of reports and samples.

#include "pdw/checks.hpp"
#include "pdw/lyapunov.hpp"
#include "pdw/walks.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace pdw {

using Json = nlohmann::ordered_json;

// Ordered key/value list echoed as "# key=value" lines (CSV) or a header
// object (JSON).
using ParamEcho = std::vector<std::pair<std::string, std::string>>;

const char* version();

Json to_json(const SubTest& t);
Json to_json(const TestReport& r);
Json to_json(const LyapunovReport& r);
Json to_json(const ModelParams& p);
Json matrix_to_json(const Mat& m);

void write_csv_header(std::ostream& os, const ParamEcho& echo);
Json header_json(const ParamEcho& echo);

// Scalar functionals of a walk trace: rows (step, functional_name, value).
void write_trace_csv(std::ostream& os, const WalkTrace& tr);
// Full matrices of a walk trace.
Json trace_to_json(const WalkTrace& tr);

}  // namespace pdw
