#include "hubsim/io.hpp"

#include <cstdio>
#include <fstream>

#include "hubsim/core.hpp"

namespace hubsim::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) throw Error("write to " + tmp + " failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("cannot move " + tmp + " into place at " + path);
    }
}

Csv::Csv(const std::vector<std::string>& header) : width_(header.size()) {
    if (width_ == 0) throw DomainError("csv needs at least one column");
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += header[i];
    }
    buf_ += '\n';
}

void Csv::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_)
        throw DomainError("csv row has " + std::to_string(cells.size()) + " cells, header has " +
                          std::to_string(width_));
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += cells[i];
    }
    buf_ += '\n';
}

}  // namespace hubsim::io
