#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace cprl::io {

// Small helpers for the versioned binary files (checkpoints, embedder state).
// Values are written in host byte order; the files are desk-scale artifacts,
// not an interchange format.

inline void write_bytes(std::ostream& os, const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

inline void read_bytes(std::istream& is, void* p, std::size_t n) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!is) throw std::runtime_error("binary file truncated");
}

inline void write_u32(std::ostream& os, std::uint32_t v) { write_bytes(os, &v, sizeof v); }
inline void write_u64(std::ostream& os, std::uint64_t v) { write_bytes(os, &v, sizeof v); }
inline void write_f64(std::ostream& os, double v) { write_bytes(os, &v, sizeof v); }

inline std::uint32_t read_u32(std::istream& is) {
    std::uint32_t v = 0;
    read_bytes(is, &v, sizeof v);
    return v;
}

inline std::uint64_t read_u64(std::istream& is) {
    std::uint64_t v = 0;
    read_bytes(is, &v, sizeof v);
    return v;
}

inline double read_f64(std::istream& is) {
    double v = 0;
    read_bytes(is, &v, sizeof v);
    return v;
}

inline void write_magic(std::ostream& os, const char magic[8]) { write_bytes(os, magic, 8); }

inline void expect_magic(std::istream& is, const char magic[8], const std::string& what) {
    char buf[8] = {};
    read_bytes(is, buf, 8);
    if (std::memcmp(buf, magic, 8) != 0) throw std::runtime_error(what + ": bad magic");
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return is;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    std::string out((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
}

}  // namespace cprl::io
