#include "vpa/blobfile.hpp"

#include <cstring>
#include <fstream>

#include "vpa/error.hpp"

namespace vpa {

namespace {

template <typename T>
std::vector<std::uint8_t> to_bytes(std::span<const T> v) {
    std::vector<std::uint8_t> out(v.size_bytes());
    if (!v.empty()) std::memcpy(out.data(), v.data(), v.size_bytes());
    return out;
}

template <typename T>
std::vector<T> from_bytes(const std::vector<std::uint8_t>& bytes) {
    std::vector<T> out(bytes.size() / sizeof(T));
    if (!out.empty()) std::memcpy(out.data(), bytes.data(), out.size() * sizeof(T));
    return out;
}

std::vector<std::int64_t> default_shape(std::vector<std::int64_t> shape, std::size_t n) {
    if (shape.empty()) shape = {static_cast<std::int64_t>(n)};
    return shape;
}

}  // namespace

void BlobFile::put_f32(const std::string& name, std::span<const float> v,
                       std::vector<std::int64_t> shape) {
    sections_[name] = {"f32", default_shape(std::move(shape), v.size()), to_bytes(v)};
}
void BlobFile::put_u32(const std::string& name, std::span<const std::uint32_t> v,
                       std::vector<std::int64_t> shape) {
    sections_[name] = {"u32", default_shape(std::move(shape), v.size()), to_bytes(v)};
}
void BlobFile::put_i32(const std::string& name, std::span<const std::int32_t> v,
                       std::vector<std::int64_t> shape) {
    sections_[name] = {"i32", default_shape(std::move(shape), v.size()), to_bytes(v)};
}
void BlobFile::put_u8(const std::string& name, std::span<const std::uint8_t> v,
                      std::vector<std::int64_t> shape) {
    sections_[name] = {"u8", default_shape(std::move(shape), v.size()), to_bytes(v)};
}

const BlobFile::Section& BlobFile::section(const std::string& name, const std::string& dtype) const {
    auto it = sections_.find(name);
    require(it != sections_.end(), "blob section missing: ", name);
    require(it->second.dtype == dtype, "blob section ", name, " has dtype ", it->second.dtype,
            ", expected ", dtype);
    return it->second;
}

std::vector<float> BlobFile::get_f32(const std::string& name) const {
    return from_bytes<float>(section(name, "f32").bytes);
}
std::vector<std::uint32_t> BlobFile::get_u32(const std::string& name) const {
    return from_bytes<std::uint32_t>(section(name, "u32").bytes);
}
std::vector<std::int32_t> BlobFile::get_i32(const std::string& name) const {
    return from_bytes<std::int32_t>(section(name, "i32").bytes);
}
std::vector<std::uint8_t> BlobFile::get_u8(const std::string& name) const {
    auto it = sections_.find(name);
    require(it != sections_.end(), "blob section missing: ", name);
    require(it->second.dtype == "u8", "blob section ", name, " has dtype ", it->second.dtype);
    return it->second.bytes;
}

std::vector<std::int64_t> BlobFile::shape(const std::string& name) const {
    auto it = sections_.find(name);
    require(it != sections_.end(), "blob section missing: ", name);
    return it->second.shape;
}

void BlobFile::write(const std::string& path, const std::string& magic) const {
    require(magic.size() == 4, "magic must be 4 bytes");
    nlohmann::json header;
    header["meta"] = meta;
    header["sections"] = nlohmann::json::array();
    std::uint64_t offset = 0;
    for (const auto& [name, sec] : sections_) {
        header["sections"].push_back({{"name", name},
                                      {"dtype", sec.dtype},
                                      {"shape", sec.shape},
                                      {"offset", offset},
                                      {"bytes", sec.bytes.size()}});
        offset += sec.bytes.size();
    }
    std::string htext = header.dump();
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot write: ", path);
    out.write(magic.data(), 4);
    std::uint32_t hlen = static_cast<std::uint32_t>(htext.size());
    out.write(reinterpret_cast<const char*>(&hlen), 4);
    out.write(htext.data(), hlen);
    for (const auto& [name, sec] : sections_)
        out.write(reinterpret_cast<const char*>(sec.bytes.data()),
                  static_cast<std::streamsize>(sec.bytes.size()));
    require(out.good(), "write failed: ", path);
}

BlobFile BlobFile::read(const std::string& path, const std::string& expected_magic) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open: ", path);
    char magic[4];
    in.read(magic, 4);
    require(in.good() && std::string(magic, 4) == expected_magic,
            path, ": bad magic, expected ", expected_magic);
    std::uint32_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), 4);
    require(in.good(), path, ": truncated header length");
    std::string htext(hlen, '\0');
    in.read(htext.data(), hlen);
    require(in.good(), path, ": truncated header");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(htext);
    } catch (const std::exception& e) {
        fail(path, ": bad header json: ", e.what());
    }
    BlobFile bf;
    bf.meta = header.value("meta", nlohmann::json::object());
    for (const auto& s : header["sections"]) {
        Section sec;
        sec.dtype = s.at("dtype").get<std::string>();
        sec.shape = s.at("shape").get<std::vector<std::int64_t>>();
        std::uint64_t nbytes = s.at("bytes").get<std::uint64_t>();
        sec.bytes.resize(nbytes);
        in.read(reinterpret_cast<char*>(sec.bytes.data()), static_cast<std::streamsize>(nbytes));
        require(in.good(), path, ": truncated section ", s.at("name").get<std::string>());
        bf.sections_[s.at("name").get<std::string>()] = std::move(sec);
    }
    return bf;
}

}  // namespace vpa
