#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace vpa {

// Little-endian binary container: 4-byte magic, u32 header length, JSON
// header describing named sections (name, dtype, shape, byte offset), then
// the raw section data. Used for rig files and training checkpoints.
class BlobFile {
  public:
    struct Section {
        std::string dtype;  // "f32" | "u32" | "i32" | "u8"
        std::vector<std::int64_t> shape;
        std::vector<std::uint8_t> bytes;
    };

    nlohmann::json meta = nlohmann::json::object();

    bool has(const std::string& name) const { return sections_.count(name) > 0; }

    void put_f32(const std::string& name, std::span<const float> v,
                 std::vector<std::int64_t> shape = {});
    void put_u32(const std::string& name, std::span<const std::uint32_t> v,
                 std::vector<std::int64_t> shape = {});
    void put_i32(const std::string& name, std::span<const std::int32_t> v,
                 std::vector<std::int64_t> shape = {});
    void put_u8(const std::string& name, std::span<const std::uint8_t> v,
                std::vector<std::int64_t> shape = {});

    std::vector<float> get_f32(const std::string& name) const;
    std::vector<std::uint32_t> get_u32(const std::string& name) const;
    std::vector<std::int32_t> get_i32(const std::string& name) const;
    std::vector<std::uint8_t> get_u8(const std::string& name) const;
    std::vector<std::int64_t> shape(const std::string& name) const;

    const std::map<std::string, Section>& sections() const { return sections_; }

    void write(const std::string& path, const std::string& magic) const;
    static BlobFile read(const std::string& path, const std::string& expected_magic);

  private:
    const Section& section(const std::string& name, const std::string& dtype) const;
    std::map<std::string, Section> sections_;
};

}  // namespace vpa
