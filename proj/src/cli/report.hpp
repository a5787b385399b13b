#pragma once

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace depwatch::cli {

using ojson = nlohmann::ordered_json;

inline constexpr std::string_view kReportSchema = "depwatch.report/1";

enum class Format { json, text };

/// Envelope shared by every command; payload and summary are filled by the command.
struct Report {
    std::string command;
    ojson payload = ojson::object();
    ojson summary = ojson::object();
    std::vector<std::string> warnings;

    ojson to_json() const;
};

/// SOURCE_DATE_EPOCH when set, otherwise the current time (RFC 3339, UTC).
std::string generation_time();

/// Writes to a sibling temporary file and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill);

/// JSON number for a double: integers stay integral, non-finite values become null.
ojson number(double v);

void emit(const Report& report, Format format, std::ostream& out,
          const std::function<void(std::ostream&)>& text_body);

}  // namespace depwatch::cli
