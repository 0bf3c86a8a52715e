#include "swe_carleman/format.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace swe {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("fmt_double: conversion failed");
  return std::string(buf, ptr);
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    try {
      writer(os);
    } catch (...) {
      os.close();
      fs::remove(tmp);
      throw;
    }
    os.flush();
    if (!os) {
      os.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed: " + path.string());
    }
  }
  fs::rename(tmp, path);
}

}  // namespace swe
