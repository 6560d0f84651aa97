#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "resumeft/gateway.hpp"

namespace resumeft {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dimension() const noexcept { return values.size(); }
    bool is_zero() const noexcept;
};

/// Cosine similarity; 0.0 when either vector is all zeros.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual EmbeddingVector embed(std::string_view text) = 0;
    virtual std::size_t dimension() const noexcept = 0;
    virtual std::string describe() const = 0;
};

inline constexpr std::size_t kDefaultOfflineDimension = 384;

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Character-trigram hashing embedder.
///
/// Every window of three consecutive bytes of the UTF-8 input (no padding,
/// no case folding) adds 1.0 to bucket fnv1a64(window) % dimension. Inputs of
/// one or two bytes count as a single window. The count vector is then
/// L2-normalized. "" embeds to the zero vector.
EmbeddingVector offline_embed(std::string_view text, std::size_t dimension = kDefaultOfflineDimension);

class OfflineEmbedder final : public EmbeddingProvider {
public:
    explicit OfflineEmbedder(std::size_t dimension = kDefaultOfflineDimension);

    EmbeddingVector embed(std::string_view text) override { return offline_embed(text, dimension_); }
    std::size_t dimension() const noexcept override { return dimension_; }
    std::string describe() const override;

private:
    std::size_t dimension_;
};

/// `POST {base_url}/embeddings` with {"model", "input"}; returns
/// data[0].embedding verbatim. Throws EndpointError on a dimension mismatch.
class HttpEmbeddingProvider final : public EmbeddingProvider {
public:
    HttpEmbeddingProvider(EndpointConfig config, std::size_t dimension);

    EmbeddingVector embed(std::string_view text) override;
    std::size_t dimension() const noexcept override { return dimension_; }
    std::string describe() const override;

private:
    EndpointConfig config_;
    std::size_t dimension_;
    std::mutex transcript_mutex_;
};

}  // namespace resumeft
