#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "structeval/json.hpp"

namespace structeval {

/// Pairwise string similarity in [0, 1]. Implementations must be symmetric
/// and safe to call concurrently.
class SimilarityBackend {
public:
    using TextPair = std::pair<std::string_view, std::string_view>;

    virtual ~SimilarityBackend() = default;
    virtual std::string name() const = 0;
    virtual double score(std::string_view a, std::string_view b) const = 0;

    /// Scores many pairs at once. Remote backends override this to batch.
    virtual std::vector<double> score_pairs(std::span<const TextPair> pairs) const {
        std::vector<double> out;
        out.reserve(pairs.size());
        for (const auto& [a, b] : pairs) out.push_back(score(a, b));
        return out;
    }
};

namespace detail {

inline std::set<std::string> lowercase_tokens(std::string_view s) {
    std::set<std::string> tokens;
    std::string current;
    for (const char c : s) {
        if (is_ascii_space(c)) {
            if (!current.empty()) tokens.insert(std::move(current));
            current.clear();
        } else {
            current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
        }
    }
    if (!current.empty()) tokens.insert(std::move(current));
    return tokens;
}

}  // namespace detail

/// 1 when the strings are equal after trimming surrounding whitespace, else 0.
class ExactBackend final : public SimilarityBackend {
public:
    std::string name() const override { return "exact"; }
    double score(std::string_view a, std::string_view b) const override {
        return detail::trim(a) == detail::trim(b) ? 1.0 : 0.0;
    }
};

/// |A ∩ B| / max(|A|, |B|) over the sets of lowercased whitespace tokens.
class TokenOverlapBackend final : public SimilarityBackend {
public:
    std::string name() const override { return "token"; }
    double score(std::string_view a, std::string_view b) const override {
        const auto ta = detail::lowercase_tokens(a);
        const auto tb = detail::lowercase_tokens(b);
        if (ta.empty() && tb.empty()) return 1.0;
        if (ta.empty() || tb.empty()) return 0.0;
        std::size_t shared = 0;
        for (const auto& t : ta) shared += tb.count(t);
        return static_cast<double>(shared) / static_cast<double>(std::max(ta.size(), tb.size()));
    }
};

// ---------------------------------------------------------------------------
// Leaf pairing and soft precision / recall
// ---------------------------------------------------------------------------

struct LeafPairing {
    std::vector<std::pair<FlatEntry, FlatEntry>> matched;  // (gold, pred), gold order
    std::vector<FlatEntry> gold_only;
    std::vector<FlatEntry> pred_only;
};

/// Pairs leaves whose key paths are identical in every segment.
inline LeafPairing pair_leaves(const std::vector<FlatEntry>& gold, const std::vector<FlatEntry>& pred) {
    std::map<KeyPath, std::size_t> pred_index;
    for (std::size_t i = 0; i < pred.size(); ++i) pred_index.emplace(pred[i].path, i);

    LeafPairing out;
    std::vector<bool> pred_used(pred.size(), false);
    for (const auto& g : gold) {
        auto it = pred_index.find(g.path);
        if (it == pred_index.end()) {
            out.gold_only.push_back(g);
        } else {
            out.matched.emplace_back(g, pred[it->second]);
            pred_used[it->second] = true;
        }
    }
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!pred_used[i]) out.pred_only.push_back(pred[i]);
    }
    return out;
}

/// Mean of matched-pair scores over `matched + unmatched` leaves; 0 when there are none.
inline double soft_mean(std::span<const double> matched_scores, std::size_t unmatched) {
    const std::size_t total = matched_scores.size() + unmatched;
    if (total == 0) return 0.0;
    double sum = 0.0;
    for (const double s : matched_scores) sum += s;
    return sum / static_cast<double>(total);
}

/// Mean over all prediction leaves of the score against the gold leaf at the
/// same path; unmatched prediction leaves score 0.
inline double soft_precision(const std::vector<std::pair<FlatEntry, FlatEntry>>& matched,
                             const std::vector<FlatEntry>& pred_only, const SimilarityBackend& backend) {
    std::vector<SimilarityBackend::TextPair> pairs;
    pairs.reserve(matched.size());
    for (const auto& [g, p] : matched) pairs.emplace_back(p.rendered, g.rendered);
    const auto scores = backend.score_pairs(pairs);
    return soft_mean(scores, pred_only.size());
}

/// Mean over all gold leaves; gold leaves missing from the prediction score 0.
inline double soft_recall(const std::vector<std::pair<FlatEntry, FlatEntry>>& matched,
                          const std::vector<FlatEntry>& gold_only, const SimilarityBackend& backend) {
    std::vector<SimilarityBackend::TextPair> pairs;
    pairs.reserve(matched.size());
    for (const auto& [g, p] : matched) pairs.emplace_back(g.rendered, p.rendered);
    const auto scores = backend.score_pairs(pairs);
    return soft_mean(scores, gold_only.size());
}

inline double harmonic_mean(double p, double r) {
    if (p + r == 0.0) return 0.0;
    if (p == r) return p;
    return 2.0 * p * r / (p + r);
}

/// Per-instance result of both metrics.
struct InstanceScore {
    bool schema_ok = false;
    double sim_p = 0.0;
    double sim_r = 0.0;
    double sim_c = 0.0;
    std::size_t matched_pairs = 0;
    std::size_t gold_leaves = 0;
    std::size_t pred_leaves = 0;
};

/// Content similarity of `pred` against `gold`. `schema_ok` is left false;
/// callers fill it from the schema check.
///
/// When neither tree has any scalar leaf the two are treated as identical
/// and all three scores are 1.
inline InstanceScore content_similarity(const JsonValue& gold, const JsonValue& pred, const SimilarityBackend& backend) {
    const auto gold_leaves = flatten(gold);
    const auto pred_leaves = flatten(pred);
    InstanceScore s;
    s.gold_leaves = gold_leaves.size();
    s.pred_leaves = pred_leaves.size();
    if (gold_leaves.empty() && pred_leaves.empty()) {
        s.sim_p = s.sim_r = s.sim_c = 1.0;
        return s;
    }
    const LeafPairing pairing = pair_leaves(gold_leaves, pred_leaves);
    s.matched_pairs = pairing.matched.size();

    // Shipped backends are symmetric, so one scoring pass serves both directions.
    std::vector<SimilarityBackend::TextPair> pairs;
    pairs.reserve(pairing.matched.size());
    for (const auto& [g, p] : pairing.matched) pairs.emplace_back(p.rendered, g.rendered);
    const auto scores = backend.score_pairs(pairs);

    s.sim_p = soft_mean(scores, pairing.pred_only.size());
    s.sim_r = soft_mean(scores, pairing.gold_only.size());
    s.sim_c = harmonic_mean(s.sim_p, s.sim_r);
    return s;
}

}  // namespace structeval
