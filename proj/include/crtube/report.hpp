#pragma once

#include <json.hpp>

#include <string>

#include "crtube/exact.hpp"
#include "crtube/fields.hpp"
#include "crtube/liealg.hpp"
#include "crtube/series.hpp"

namespace crtube {

inline constexpr const char* kVersion = "1.0.0";

using Json = nlohmann::json;

/// Canonical encodings: rationals as "p/q" strings, scalars as objects with
/// the four tower components, fields as coordinate -> monomial -> scalar
/// maps. nlohmann::json objects keep keys sorted, so dumps are canonical.
Json jsonRational(const Rational& r);
Json jsonScalar(const Scalar& s);
Json jsonField(const HoloVectorField& f);
Json jsonSeries(const TruncatedSeries& s);
Json jsonKilling(const KillingData& k);

/// Skeleton with the command echo, parameter block and toolchain version.
Json reportSkeleton(const std::string& command, const Json& params);

/// Canonical serialization: 2-space indent, sorted keys, trailing newline.
std::string dumpReport(const Json& report);

/// Atomic write (temp file + rename). Throws std::runtime_error on I/O
/// failure with the underlying message.
void emitReport(const Json& report, const std::string& path);

}  // namespace crtube
