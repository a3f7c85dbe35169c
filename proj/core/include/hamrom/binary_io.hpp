// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HAMROM_BINARY_IO_HPP
#define HAMROM_BINARY_IO_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>
#include <vector>
#include "hamrom/errors.hpp"
#include "hamrom/hamiltonian.hpp"

// Little-endian primitives shared by the snapshot, trajectory and ROM artifact containers.

namespace hamrom::io
{

namespace detail
{

template <typename T>
T ToLittle(T value)
{
  if constexpr (std::endian::native == std::endian::little)
  {
    return value;
  }
  else
  {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; i++)
    {
      std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
  }
}

}  // namespace detail

class BinaryWriter
{
public:
  explicit BinaryWriter(const std::filesystem::path &path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc)
  {
    if (!out_)
    {
      throw IoError("cannot open " + path.string() + " for writing");
    }
  }

  void Magic(std::string_view magic) { Raw(magic.data(), magic.size()); }

  template <typename T>
  void Scalar(T value)
  {
    value = detail::ToLittle(value);
    Raw(&value, sizeof(T));
  }

  void Doubles(const double *data, std::size_t count)
  {
    if constexpr (std::endian::native == std::endian::little)
    {
      Raw(data, count * sizeof(double));
    }
    else
    {
      for (std::size_t i = 0; i < count; i++)
      {
        Scalar(data[i]);
      }
    }
  }

  void Vec(const Vector &v) { Doubles(v.data(), static_cast<std::size_t>(v.size())); }

  // Column-major payload.
  void Mat(const Matrix &m) { Doubles(m.data(), static_cast<std::size_t>(m.size())); }

  void String(const std::string &s)
  {
    Scalar<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    Raw(s.data(), s.size());
  }

  void Close()
  {
    out_.close();
    if (!out_)
    {
      throw IoError("failed to finish writing " + path_.string());
    }
  }

private:
  void Raw(const void *data, std::size_t bytes)
  {
    out_.write(static_cast<const char *>(data), static_cast<std::streamsize>(bytes));
    if (!out_)
    {
      throw IoError("write failed on " + path_.string());
    }
  }

  std::filesystem::path path_;
  std::ofstream out_;
};

class BinaryReader
{
public:
  explicit BinaryReader(const std::filesystem::path &path)
    : path_(path), in_(path, std::ios::binary)
  {
    if (!in_)
    {
      throw IoError("cannot open " + path.string() + " for reading");
    }
    std::error_code ec;
    size_ = std::filesystem::file_size(path, ec);
    if (ec)
    {
      throw IoError("cannot stat " + path.string());
    }
  }

  void ExpectMagic(std::string_view magic)
  {
    std::string got(magic.size(), '\0');
    Raw(got.data(), got.size(), "magic");
    if (got != magic)
    {
      throw FormatError(path_.string() + ": bad magic, expected \"" + std::string(magic) + "\"");
    }
  }

  template <typename T>
  T Scalar(const char *section)
  {
    T value;
    Raw(&value, sizeof(T), section);
    return detail::ToLittle(value);
  }

  // Reads count doubles after checking that the file still holds them.
  void Doubles(double *data, std::uint64_t count, const char *section)
  {
    CheckRemaining(count, sizeof(double), section);
    if constexpr (std::endian::native == std::endian::little)
    {
      Raw(data, static_cast<std::size_t>(count) * sizeof(double), section);
    }
    else
    {
      for (std::uint64_t i = 0; i < count; i++)
      {
        data[i] = Scalar<double>(section);
      }
    }
  }

  Vector Vec(std::uint64_t n, const char *section)
  {
    CheckRemaining(n, sizeof(double), section);
    Vector v(static_cast<Index>(n));
    Doubles(v.data(), n, section);
    return v;
  }

  Matrix Mat(std::uint64_t rows, std::uint64_t cols, const char *section)
  {
    if (cols != 0 && rows > std::numeric_limits<std::uint64_t>::max() / cols)
    {
      throw FormatError(path_.string() + ": dimension overflow in " + section);
    }
    CheckRemaining(rows * cols, sizeof(double), section);
    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    Doubles(m.data(), rows * cols, section);
    return m;
  }

  std::string String(const char *section)
  {
    const auto len = Scalar<std::uint32_t>(section);
    CheckRemaining(len, 1, section);
    std::string s(len, '\0');
    Raw(s.data(), len, section);
    return s;
  }

  // Throws FormatError unless count items of item_bytes each fit in the unread part of the
  // file.
  void CheckRemaining(std::uint64_t count, std::uint64_t item_bytes, const char *section)
  {
    const std::uint64_t remaining = size_ - offset_;
    if (count > std::numeric_limits<std::uint64_t>::max() / item_bytes)
    {
      throw FormatError(path_.string() + ": dimension overflow in " + section);
    }
    if (count * item_bytes > remaining)
    {
      throw FormatError(path_.string() + ": truncated file, missing section \"" + section +
                        "\"");
    }
  }

  bool AtEnd() const { return offset_ == size_; }
  const std::filesystem::path &path() const { return path_; }

private:
  void Raw(void *data, std::size_t bytes, const char *section)
  {
    if (bytes > size_ - offset_)
    {
      throw FormatError(path_.string() + ": truncated file, missing section \"" + section +
                        "\"");
    }
    in_.read(static_cast<char *>(data), static_cast<std::streamsize>(bytes));
    if (!in_)
    {
      throw IoError("read failed on " + path_.string());
    }
    offset_ += bytes;
  }

  std::filesystem::path path_;
  std::ifstream in_;
  std::uint64_t size_ = 0;
  std::uint64_t offset_ = 0;
};

}  // namespace hamrom::io

#endif  // HAMROM_BINARY_IO_HPP
