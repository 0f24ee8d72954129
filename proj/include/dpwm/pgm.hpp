#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "dpwm/image.hpp"

namespace dpwm {

class PgmError : public Error {
public:
    enum class Kind { malformed_header, unsupported_maxval, truncated_payload, io };

    PgmError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Parses a binary P5 PGM with maxval 255. Header comments are skipped.
GrayImage load_pgm(std::span<const std::byte> bytes);

/// Emits `P5\n<w> <h>\n255\n` followed by the raw samples.
std::vector<std::byte> save_pgm(const GrayImage& img);

GrayImage read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const std::filesystem::path& path, const GrayImage& img);

} // namespace dpwm
