// Copyright 2026 The bcqzk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "bcqzk/core/errors.hpp"

namespace bcqzk {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

inline std::string to_hex(const std::uint8_t *data, std::size_t n) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(kDigits[data[i] >> 4]);
        out.push_back(kDigits[data[i] & 0xF]);
    }
    return out;
}

inline std::string to_hex(const Bytes &b) {
    return to_hex(b.data(), b.size());
}

inline std::string to_hex(const Digest &d) {
    return to_hex(d.data(), d.size());
}

inline Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) {
        throw LengthError("hex string has odd length");
    }
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) {
            throw ValidationError("invalid hex digit");
        }
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

/// Incremental SHA-256 over OpenSSL's EVP interface.
class Sha256 {
   public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
            throw std::runtime_error("sha256 init failed");
        }
    }
    Sha256(const Sha256 &) = delete;
    Sha256 &operator=(const Sha256 &) = delete;
    ~Sha256() {
        EVP_MD_CTX_free(ctx_);
    }

    Sha256 &update(const std::uint8_t *data, std::size_t n) {
        EVP_DigestUpdate(ctx_, data, n);
        return *this;
    }
    Sha256 &update(const Bytes &b) {
        return update(b.data(), b.size());
    }

    Digest finish() {
        Digest d{};
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx_, d.data(), &len);
        EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr);
        return d;
    }

   private:
    EVP_MD_CTX *ctx_;
};

inline Digest sha256(const std::uint8_t *data, std::size_t n) {
    thread_local Sha256 h;
    h.update(data, n);
    return h.finish();
}

inline Digest sha256(const Bytes &b) {
    return sha256(b.data(), b.size());
}

/// Length-prefixed field concatenation used for every canonical encoding:
/// each field is a 4-byte big-endian length followed by its bytes.
class FieldWriter {
   public:
    FieldWriter &field(const std::uint8_t *data, std::size_t n) {
        put_u32(static_cast<std::uint32_t>(n));
        out_.insert(out_.end(), data, data + n);
        return *this;
    }
    FieldWriter &field(const Bytes &b) {
        return field(b.data(), b.size());
    }
    FieldWriter &field(const Digest &d) {
        return field(d.data(), d.size());
    }
    FieldWriter &u64(std::uint64_t v) {
        std::uint8_t buf[8];
        for (int i = 0; i < 8; ++i) {
            buf[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
        }
        return field(buf, 8);
    }
    FieldWriter &byte(std::uint8_t v) {
        return field(&v, 1);
    }
    const Bytes &bytes() const {
        return out_;
    }
    Digest digest() const {
        return sha256(out_);
    }

   private:
    void put_u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            out_.push_back(static_cast<std::uint8_t>(v >> (24 - 8 * i)));
        }
    }
    Bytes out_;
};

}  // namespace bcqzk
