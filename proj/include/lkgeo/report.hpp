#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "lkgeo/props.hpp"
#include "lkgeo/verification.hpp"

namespace lkgeo {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ReportFormat { json, csv, text };

/// Throws std::invalid_argument for anything but json, csv, text.
ReportFormat parse_format(const std::string& s);

/// {meta: {...}, results: {...}} with matrices as row-major nested arrays.
nlohmann::json to_json(const VerificationReport& rep);

void write_report(std::ostream& os, const VerificationReport& rep, ReportFormat fmt);
void write_props(std::ostream& os, const PropsSummary& sum);

}  // namespace lkgeo
