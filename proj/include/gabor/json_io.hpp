#ifndef GABOR_JSON_IO_HPP
#define GABOR_JSON_IO_HPP

#include <json.hpp>

#include "gabor/frame_bounds.hpp"
#include "gabor/poh.hpp"
#include "gabor/stability.hpp"
#include "gabor/verifier.hpp"

// Stable JSON shapes for everything the CLI emits or consumes; see
// docs/formats.md. Numbers are IEEE doubles and round-trip losslessly.

namespace gabor {

using json = nlohmann::ordered_json;

json to_json(const FrameBounds& b);
FrameBounds bounds_from_json(const json& j);

json to_json(const JitterProfile& p);
JitterProfile jitter_profile_from_json(const json& j);

json to_json(const Certificate& c);
Certificate certificate_from_json(const json& j);

json to_json(const PeriodizationCheck& c);
json to_json(const VerificationReport& r);
json to_json(const ExperimentReport& r);

} // namespace gabor

#endif
