#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "nlwave/field.hpp"

namespace nlwave {

/// Shortest round-trip decimal for a double (printf %.17g).
std::string fmt_g17(double v);

/// Creates the directory (and parents); throws ErrorCode::io on failure.
void ensure_directory(const std::string& path);

/// Minimal RFC-4180-style CSV writer: comma separator, "\n" row ends, fields
/// quoted (with doubled quotes) only when they contain a comma, quote, or
/// newline. Numeric cells are formatted with fmt_g17 so outputs are
/// byte-reproducible.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();

    void row(const std::vector<std::string>& cells);
    void numeric_row(const std::vector<double>& cells);
    void close();

private:
    std::ofstream out_;
    std::string path_;
};

/// Binary field dump: one-line UTF-8 JSON header {"n": dim, "N": points per
/// axis, "L": box length, "time": t} terminated by '\n', followed by the
/// row-major physical samples as little-endian 8-byte IEEE doubles.
void write_field_dump(const std::string& path, const Field& f, double time);

struct FieldDump {
    int dim = 0;
    int n = 0;
    double length = 0.0;
    double time = 0.0;
    std::vector<double> samples;
};

FieldDump read_field_dump(const std::string& path);

/// 1-D slice of a field as CSV rows (x, u). For dim > 1 the slice runs along
/// the first axis through the middle of the other axes.
void write_slice_csv(const std::string& path, const Field& f);

/// Writes text exactly as given; throws ErrorCode::io on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace nlwave
