#include "nlwave/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include <json.hpp>

#include "nlwave/errors.hpp"

namespace nlwave {

namespace {

void throw_io(const std::string& what, const std::string& path) {
    throw SolverError(ErrorCode::io, what + ": " + path);
}

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string csv_escape(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::uint64_t to_le_bits(double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r = (r << 8) | ((bits >> (8 * i)) & 0xffu);
        bits = r;
    }
    return bits;
}

double from_le_bits(std::uint64_t bits) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r = (r << 8) | ((bits >> (8 * i)) & 0xffu);
        bits = r;
    }
    double v = 0.0;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw_io("cannot create directory (" + ec.message() + ")", path);
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw_io("cannot open CSV for writing", path);
}

CsvWriter::~CsvWriter() {
    if (out_.is_open()) out_.close();
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(cells[i]);
    }
    out_ << '\n';
    if (!out_) throw_io("write failed on CSV", path_);
}

void CsvWriter::numeric_row(const std::vector<double>& cells) {
    std::vector<std::string> text;
    text.reserve(cells.size());
    for (double v : cells) text.push_back(fmt_g17(v));
    row(text);
}

void CsvWriter::close() {
    if (!out_.is_open()) return;
    out_.close();
    if (out_.fail()) throw_io("close failed on CSV", path_);
}

void write_field_dump(const std::string& path, const Field& f, double time) {
    const Grid& g = f.grid();
    nlohmann::json header;
    header["n"] = g.dim();
    header["N"] = g.n();
    header["L"] = g.length();
    header["time"] = time;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot open field dump for writing", path);
    out << header.dump() << '\n';
    for (double v : f.physical()) {
        const std::uint64_t bits = to_le_bits(v);
        char raw[8];
        std::memcpy(raw, &bits, 8);
        out.write(raw, 8);
    }
    out.close();
    if (out.fail()) throw_io("write failed on field dump", path);
}

FieldDump read_field_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open field dump", path);
    std::string line;
    if (!std::getline(in, line)) throw_io("field dump missing header line", path);

    FieldDump dump;
    try {
        const auto header = nlohmann::json::parse(line);
        dump.dim = header.at("n").get<int>();
        dump.n = header.at("N").get<int>();
        dump.length = header.at("L").get<double>();
        dump.time = header.at("time").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw_io(std::string("malformed field dump header (") + e.what() + ")", path);
    }
    if (dump.dim < 1 || dump.dim > 3 || dump.n < 1)
        throw_io("field dump header out of range", path);

    std::size_t total = 1;
    for (int k = 0; k < dump.dim; ++k) total *= static_cast<std::size_t>(dump.n);
    dump.samples.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        char raw[8];
        if (!in.read(raw, 8)) throw_io("field dump truncated", path);
        std::uint64_t bits = 0;
        std::memcpy(&bits, raw, 8);
        dump.samples[i] = from_le_bits(bits);
    }
    return dump;
}

void write_slice_csv(const std::string& path, const Field& f) {
    const Grid& g = f.grid();
    const auto& phys = f.physical();
    CsvWriter csv(path);
    csv.row({"x", "u"});

    // Stride of the first axis in row-major storage, and the flat offset of
    // the mid-point of every other axis.
    std::size_t stride = 1;
    for (int k = 1; k < g.dim(); ++k) stride *= static_cast<std::size_t>(g.n());
    std::size_t offset = 0;
    for (int k = 1; k < g.dim(); ++k) {
        std::size_t axis_stride = 1;
        for (int j = k + 1; j < g.dim(); ++j) axis_stride *= static_cast<std::size_t>(g.n());
        offset += axis_stride * static_cast<std::size_t>(g.n() / 2);
    }
    for (int i = 0; i < g.n(); ++i) {
        const double x = -0.5 * g.length() + i * g.h();
        csv.numeric_row({x, phys[offset + stride * static_cast<std::size_t>(i)]});
    }
    csv.close();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot open file for writing", path);
    out << content;
    out.close();
    if (out.fail()) throw_io("write failed", path);
}

}  // namespace nlwave
