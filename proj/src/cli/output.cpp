/*
   Copyright 2026 The mvlevy Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "mvlevy/cli/output.hpp"

#include "mvlevy/error.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mvlevy::cli {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string make_header(const std::string &command, const std::string &resolved_yaml) {
    std::string h = "mvlevy " MVLEVY_VERSION " " + command + "\n" + resolved_yaml;
    return h;
}

namespace {

void write_comment(std::ostream &out, const std::string &header) {
    std::istringstream in(header);
    for (std::string line; std::getline(in, line);) out << "# " << line << '\n';
}

std::ofstream open_output(const std::filesystem::path &path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write " + path.string());
    return out;
}

} // namespace

CsvWriter::CsvWriter(const std::filesystem::path &path, const std::string &header,
                     const std::vector<std::string> &columns)
    : out_(open_output(path)), columns_(columns.size()) {
    write_comment(out_, header);
    for (const auto &c : columns) field(c);
    end_row();
}

void CsvWriter::field(const std::string &s) {
    if (filled_ == columns_) throw ArgumentError("CSV row has too many fields");
    if (filled_++) out_ << ',';
    if (s.find_first_of(",\"\n") == std::string::npos) {
        out_ << s;
        return;
    }
    out_ << '"';
    for (char c : s) out_ << (c == '"' ? "\"\"" : std::string(1, c));
    out_ << '"';
}

CsvWriter &CsvWriter::operator<<(double v) {
    field(format_double(v));
    return *this;
}

CsvWriter &CsvWriter::operator<<(const std::string &s) {
    field(s);
    return *this;
}

CsvWriter &CsvWriter::operator<<(long long v) {
    field(std::to_string(v));
    return *this;
}

void CsvWriter::end_row() {
    if (filled_ != columns_) throw ArgumentError("CSV row has too few fields");
    out_ << '\n';
    filled_ = 0;
}

void write_text(const std::filesystem::path &path, const std::string &header, const std::string &body) {
    auto out = open_output(path);
    write_comment(out, header);
    out << body;
}

} // namespace mvlevy::cli
