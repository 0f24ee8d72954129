#include "dpwm/pgm.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace dpwm {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

    bool at_end() const { return pos_ >= bytes_.size(); }
    char peek() const { return static_cast<char>(bytes_[pos_]); }
    std::size_t pos() const { return pos_; }

    void skip_space_and_comments()
    {
        while (!at_end()) {
            const char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n')
                    ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                return;
            }
        }
    }

    long read_uint(const char* field)
    {
        skip_space_and_comments();
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
        if (start == pos_)
            throw PgmError(PgmError::Kind::malformed_header, std::string("missing PGM ") + field);
        long value = 0;
        const char* first = reinterpret_cast<const char*>(bytes_.data() + start);
        const auto [ptr, ec] = std::from_chars(first, first + (pos_ - start), value);
        if (ec != std::errc{} || value > std::numeric_limits<int>::max())
            throw PgmError(PgmError::Kind::malformed_header, std::string("PGM ") + field + " out of range");
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    void expect_single_space()
    {
        if (at_end() || !std::isspace(static_cast<unsigned char>(peek())))
            throw PgmError(PgmError::Kind::malformed_header, "PGM header not terminated by whitespace");
        ++pos_;
    }

private:
    std::span<const std::byte> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

GrayImage load_pgm(std::span<const std::byte> bytes)
{
    if (bytes.size() < 2 || static_cast<char>(bytes[0]) != 'P' || static_cast<char>(bytes[1]) != '5')
        throw PgmError(PgmError::Kind::malformed_header, "not a binary PGM (magic P5 expected)");

    HeaderReader reader(bytes.subspan(2));
    if (reader.at_end() || !std::isspace(static_cast<unsigned char>(reader.peek())))
        throw PgmError(PgmError::Kind::malformed_header, "PGM magic not followed by whitespace");
    const long width = reader.read_uint("width");
    const long height = reader.read_uint("height");
    const long maxval = reader.read_uint("maxval");
    if (width == 0 || height == 0)
        throw PgmError(PgmError::Kind::malformed_header, "PGM dimensions must be positive");
    if (maxval != 255)
        throw PgmError(PgmError::Kind::unsupported_maxval,
                       "PGM maxval " + std::to_string(maxval) + " unsupported (only 255)");
    reader.expect_single_space();

    const std::size_t offset = 2 + reader.pos();
    const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - offset < need)
        throw PgmError(PgmError::Kind::truncated_payload,
                       "PGM payload truncated: expected " + std::to_string(need) + " bytes, found " +
                           std::to_string(bytes.size() - offset));

    std::vector<std::uint8_t> samples(need);
    for (std::size_t i = 0; i < need; ++i)
        samples[i] = static_cast<std::uint8_t>(bytes[offset + i]);
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(samples));
}

std::vector<std::byte> save_pgm(const GrayImage& img)
{
    const std::string header =
        "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::byte> out;
    out.reserve(header.size() + img.size());
    for (char c : header)
        out.push_back(static_cast<std::byte>(c));
    for (std::uint8_t s : img.values())
        out.push_back(static_cast<std::byte>(s));
    return out;
}

GrayImage read_pgm_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw PgmError(PgmError::Kind::io, "cannot open " + path.string());
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return load_pgm(std::as_bytes(std::span(raw)));
    } catch (const PgmError& e) {
        throw PgmError(e.kind(), path.string() + ": " + e.what());
    }
}

void write_pgm_file(const std::filesystem::path& path, const GrayImage& img)
{
    const auto bytes = save_pgm(img);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw PgmError(PgmError::Kind::io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw PgmError(PgmError::Kind::io, "short write to " + path.string());
}

} // namespace dpwm
