#pragma once

#include <string>
#include <vector>

namespace hubsim::io {

// Full-precision decimal form of a double (17 significant digits, %.17g).
std::string format_double(double v);

// Writes content through a temp file in the same directory plus rename, so a
// reader never sees a partially written file.
void atomic_write(const std::string& path, const std::string& content);

// Comma-separated table with a fixed header; every row must match its width.
class Csv {
  public:
    explicit Csv(const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    const std::string& str() const { return buf_; }

  private:
    size_t width_;
    std::string buf_;
};

}  // namespace hubsim::io
