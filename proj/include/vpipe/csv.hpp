#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "vpipe/errors.hpp"

namespace vpipe {

/// Fixed 9-significant-digit rendering used for every numeric CSV field,
/// so identical inputs produce byte-identical files.
inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

/// Newline-terminated CSV writer with a fixed column order.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) {
            throw ValidationError("cannot_open_file", "cannot open for writing: " + path);
        }
    }

    void header(const std::vector<std::string>& columns) { write_line(columns); }

    void row(const std::vector<std::string>& fields) {
        write_line(fields);
        ++rows_;
    }

    std::size_t rows() const { return rows_; }

private:
    void write_line(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) {
                out_ << ',';
            }
            out_ << fields[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
    std::size_t rows_ = 0;
};

}  // namespace vpipe
