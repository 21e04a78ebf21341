#pragma once

// Minimal comma-separated reader. Fields are never quoted in the formats this
// project reads, so a plain split is sufficient.

#include "flowcast/core.hpp"

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace flowcast::csv {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\xEF' ||
                          s.front() == '\xBB' || s.front() == '\xBF'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

/// Reads lines, tracking 1-based line numbers and skipping blank lines.
class Reader
{
  public:
    explicit Reader(std::istream& in) : in_(in) {}

    bool next(std::vector<std::string>& fields)
    {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (trim(line).empty())
                continue;
            fields = split(line);
            return true;
        }
        return false;
    }

    int line() const { return line_no_; }

    InputError error(const std::string& what) const
    {
        return InputError("line " + std::to_string(line_no_) + ": " + what);
    }

  private:
    std::istream& in_;
    int line_no_ = 0;
};

inline bool header_is(const std::vector<std::string>& fields, std::initializer_list<std::string_view> expected)
{
    if (fields.size() != expected.size())
        return false;
    std::size_t i = 0;
    for (auto e : expected)
        if (fields[i++] != e)
            return false;
    return true;
}

} // namespace flowcast::csv
