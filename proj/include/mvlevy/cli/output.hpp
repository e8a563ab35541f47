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


#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace mvlevy::cli {

/// Doubles with 17 significant digits, '.' decimal point.
std::string format_double(double v);

/// CSV file whose first lines are '#' comments echoing `header`.  Fields
/// containing commas or quotes are quoted; lines end with '\n'.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path &path, const std::string &header, const std::vector<std::string> &columns);

    CsvWriter &operator<<(double v);
    CsvWriter &operator<<(const std::string &s);
    CsvWriter &operator<<(const char *s) { return *this << std::string(s); }
    CsvWriter &operator<<(long long v);
    CsvWriter &operator<<(std::size_t v) { return *this << static_cast<long long>(v); }
    CsvWriter &operator<<(int v) { return *this << static_cast<long long>(v); }
    void end_row();

private:
    void field(const std::string &s);

    std::ofstream out_;
    std::size_t columns_;
    std::size_t filled_ = 0;
};

/// Header text: version line followed by the resolved configuration.
std::string make_header(const std::string &command, const std::string &resolved_yaml);

/// Writes text prefixed by the same comment header.
void write_text(const std::filesystem::path &path, const std::string &header, const std::string &body);

} // namespace mvlevy::cli
