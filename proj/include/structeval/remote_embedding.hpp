#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "structeval/http.hpp"
#include "structeval/similarity.hpp"

namespace structeval {

/// What to do when the embedding service fails.
enum class FailurePolicy { FailHard, ScoreZero };

struct EmbeddingConfig {
    std::string endpoint;
    std::chrono::milliseconds timeout{30'000};
    std::size_t batch_size = 64;
    std::size_t max_in_flight = 8;
    FailurePolicy on_error = FailurePolicy::FailHard;
};

inline double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

/// Similarity from a sentence-embedding service speaking
/// `{"texts": [...]}` -> `{"vectors": [[...], ...]}`. Scores are the cosine
/// of the two embeddings, clamped to [0, 1].
class RemoteEmbeddingBackend final : public SimilarityBackend {
public:
    explicit RemoteEmbeddingBackend(EmbeddingConfig config)
        : config_(std::move(config)),
          endpoint_(http::parse_endpoint(config_.endpoint)),
          gate_(static_cast<std::ptrdiff_t>(config_.max_in_flight)) {
        if (config_.batch_size == 0) config_.batch_size = 1;
    }

    std::string name() const override { return "remote"; }

    double score(std::string_view a, std::string_view b) const override {
        const TextPair pair{a, b};
        return score_pairs(std::span<const TextPair>(&pair, 1)).front();
    }

    std::vector<double> score_pairs(std::span<const TextPair> pairs) const override {
        if (pairs.empty()) return {};
        try {
            return score_pairs_or_throw(pairs);
        } catch (const std::runtime_error&) {
            if (config_.on_error == FailurePolicy::FailHard) throw;
            failures_.fetch_add(1, std::memory_order_relaxed);
            return std::vector<double>(pairs.size(), 0.0);
        }
    }

    /// Embeds `texts` in batches. Throws TransportError / MalformedResponse.
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) const {
        std::vector<std::vector<double>> out;
        out.reserve(texts.size());
        for (std::size_t start = 0; start < texts.size(); start += config_.batch_size) {
            const std::size_t end = std::min(texts.size(), start + config_.batch_size);
            JsonValue::Array batch;
            for (std::size_t i = start; i < end; ++i) batch.emplace_back(texts[i]);
            JsonValue reply;
            {
                auto ticket = gate_.enter();
                reply = http::post_json(endpoint_, JsonValue::object({{"texts", JsonValue(std::move(batch))}}),
                                        config_.timeout);
            }
            auto vectors = decode_vectors(reply, end - start);
            for (auto& v : vectors) out.push_back(std::move(v));
        }
        return out;
    }

    /// Number of calls that degraded to zero scores under ScoreZero.
    std::size_t failures() const noexcept { return failures_.load(std::memory_order_relaxed); }

private:
    static std::vector<std::vector<double>> decode_vectors(const JsonValue& reply, std::size_t expected) {
        const JsonValue* vectors = reply.find("vectors");
        if (vectors == nullptr || !vectors->is_array()) throw MalformedResponse("embedding response lacks a \"vectors\" array");
        if (vectors->as_array().size() != expected) {
            throw MalformedResponse("embedding response has " + std::to_string(vectors->as_array().size()) +
                                    " vectors for " + std::to_string(expected) + " texts");
        }
        std::vector<std::vector<double>> out;
        for (const auto& vec : vectors->as_array()) {
            if (!vec.is_array() || vec.as_array().empty()) throw MalformedResponse("embedding vector must be a non-empty array");
            std::vector<double> values;
            values.reserve(vec.as_array().size());
            for (const auto& x : vec.as_array()) {
                if (!x.is_number()) throw MalformedResponse("embedding vector holds a non-number");
                values.push_back(x.as_double());
            }
            out.push_back(std::move(values));
        }
        return out;
    }

    std::vector<double> score_pairs_or_throw(std::span<const TextPair> pairs) const {
        std::vector<std::string> texts;
        std::unordered_map<std::string_view, std::size_t> index;
        const auto slot = [&](std::string_view t) {
            auto [it, inserted] = index.emplace(t, texts.size());
            if (inserted) texts.emplace_back(t);
            return it->second;
        };
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        slots.reserve(pairs.size());
        for (const auto& [a, b] : pairs) {
            const auto ia = slot(a);
            const auto ib = slot(b);
            slots.emplace_back(ia, ib);
        }
        const auto vectors = embed(texts);
        std::vector<double> scores;
        scores.reserve(pairs.size());
        for (const auto& [ia, ib] : slots) {
            if (vectors[ia].size() != vectors[ib].size()) throw MalformedResponse("embedding vectors differ in dimension");
            scores.push_back(std::clamp(cosine_similarity(vectors[ia], vectors[ib]), 0.0, 1.0));
        }
        return scores;
    }

    EmbeddingConfig config_;
    http::Endpoint endpoint_;
    mutable http::RequestGate gate_;
    mutable std::atomic<std::size_t> failures_{0};
};

}  // namespace structeval
