#include "resumeft/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resumeft {

bool EmbeddingVector::is_zero() const noexcept {
    for (double v : values)
        if (v != 0.0) return false;
    return true;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("cosine: dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    double c = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(c, -1.0, 1.0);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

EmbeddingVector offline_embed(std::string_view text, std::size_t dimension) {
    if (dimension < 64) throw std::invalid_argument("offline_embed: dimension must be >= 64");
    EmbeddingVector v;
    v.values.assign(dimension, 0.0);
    if (text.empty()) return v;
    if (text.size() < 3) {
        v.values[fnv1a64(text) % dimension] = 1.0;
        return v;
    }
    for (std::size_t i = 0; i + 3 <= text.size(); ++i)
        v.values[fnv1a64(text.substr(i, 3)) % dimension] += 1.0;
    double norm = 0.0;
    for (double x : v.values) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v.values) x /= norm;
    return v;
}

OfflineEmbedder::OfflineEmbedder(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ < 64) throw std::invalid_argument("offline embedder: dimension must be >= 64");
}

std::string OfflineEmbedder::describe() const {
    return "offline-trigram-fnv1a/" + std::to_string(dimension_);
}

HttpEmbeddingProvider::HttpEmbeddingProvider(EndpointConfig config, std::size_t dimension)
    : config_(std::move(config)), dimension_(dimension) {
    config_.validate();
    if (dimension_ == 0) throw std::invalid_argument("embedding dimension must be positive");
}

EmbeddingVector HttpEmbeddingProvider::embed(std::string_view text) {
    nlohmann::json body = {{"model", config_.model_id}, {"input", std::string(text)}};
    auto response = post_json_with_retry(config_, "/embeddings", body, &transcript_mutex_);
    EmbeddingVector v;
    try {
        v.values = response.at("data").at(0).at("embedding").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw EndpointError(EndpointError::Kind::bad_response,
                            std::string("unexpected embeddings response shape: ") + e.what(), 1);
    }
    if (v.dimension() != dimension_)
        throw EndpointError(EndpointError::Kind::bad_response,
                            "embedding dimension " + std::to_string(v.dimension()) +
                                " does not match declared " + std::to_string(dimension_),
                            1);
    return v;
}

std::string HttpEmbeddingProvider::describe() const {
    return "remote:" + config_.base_url + "#" + config_.model_id + "/" + std::to_string(dimension_);
}

}  // namespace resumeft
