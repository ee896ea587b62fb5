#include "beamtraffic/manifest.hpp"

#include <array>
#include <fstream>
#include <iterator>
#include <memory>

#include <openssl/evp.h>

#include "beamtraffic/csv.hpp"
#include "beamtraffic/error.hpp"
#include "json.hpp"

namespace beamtraffic {

namespace {

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
            throw InvariantViolation("SHA-256 initialisation failed");
        }
    }

    void update(const char* data, std::size_t n) {
        if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) {
            throw InvariantViolation("SHA-256 update failed");
        }
    }

    std::string hex() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
        unsigned len = 0;
        if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) {
            throw InvariantViolation("SHA-256 finalisation failed");
        }
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        for (unsigned i = 0; i < len; ++i) {
            out += digits[md[i] >> 4];
            out += digits[md[i] & 0xF];
        }
        return out;
    }

private:
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    Sha256 h;
    h.update(bytes.data(), bytes.size());
    return h.hex();
}

std::string sha256_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot open input file '" + file.string() + "'");
    }
    Sha256 h;
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.hex();
}

void RunManifest::add_input(const std::string& role, const std::filesystem::path& file) {
    inputs.push_back({role, file.filename().string(), sha256_file(file)});
}

std::string RunManifest::config_hash() const {
    std::string text;
    for (const auto& [k, v] : config) {
        text += k + " = " + v + "\n";
    }
    return sha256_hex(text);
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["tool_version"] = tool_version;
    j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
    auto& cfg = j["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config) {
        cfg[k] = v;
    }
    j["config_sha256"] = config_hash();
    j["inputs"] = nlohmann::ordered_json::array();
    for (const auto& in : inputs) {
        j["inputs"].push_back({{"role", in.role}, {"file", in.name}, {"sha256", in.sha256}});
    }
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

void RunManifest::write(const std::filesystem::path& file) const {
    auto out = csv::open_output(file);
    out << to_json();
}

}  // namespace beamtraffic
