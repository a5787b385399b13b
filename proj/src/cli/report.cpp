#include "report.hpp"

#include "depwatch/error.hpp"
#include "depwatch/time.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#ifndef DEPWATCH_VERSION
#define DEPWATCH_VERSION "0.0.0"
#endif

namespace depwatch::cli {

ojson Report::to_json() const {
    ojson j;
    j["schema"] = kReportSchema;
    j["tool"] = {{"name", "depwatch"}, {"version", DEPWATCH_VERSION}};
    j["command"] = command;
    j["generated_at"] = generation_time();
    j["payload"] = payload;
    j["summary"] = summary;
    j["warnings"] = warnings;
    return j;
}

std::string generation_time() {
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
        char* end = nullptr;
        const long long secs = std::strtoll(epoch, &end, 10);
        if (end && *end == '\0') return format_timestamp(Timestamp{std::chrono::seconds{secs}});
    }
    return format_timestamp(std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
}

void write_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
        fill(out);
        out.flush();
        if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
    }
    std::filesystem::rename(tmp, path);
}

ojson number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

void emit(const Report& report, Format format, std::ostream& out,
          const std::function<void(std::ostream&)>& text_body) {
    if (format == Format::json) {
        out << report.to_json().dump(2) << '\n';
        return;
    }
    text_body(out);
    for (const auto& w : report.warnings) out << "warning: " << w << '\n';
}

}  // namespace depwatch::cli
