// SPDX-License-Identifier: Apache-2.0
//
// psoamsim - plane spiral OAM mode-group MIMO link simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace psoam {

/// Locale-independent shortest-round-trip formatting (period decimal
/// separator, no grouping) so emitted CSV bytes are reproducible.
inline std::string format_double(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Minimal CSV builder: header row plus numeric/string cells.
class CsvWriter
{
  public:
    explicit CsvWriter(std::vector<std::string> header)
    {
        append_row(header);
    }

    void append_row(const std::vector<std::string> &cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            if (i)
                body_ += ',';
            body_ += cells[i];
        }
        body_ += '\n';
    }

    const std::string &str() const { return body_; }

    void write(const std::string &path) const
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + path);
        out << body_;
    }

  private:
    std::string body_;
};

} // namespace psoam
