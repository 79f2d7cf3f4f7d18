#pragma once

/**
 * @file fuzzysim.hpp
 * @brief Fuzzy cosine-amplitude similarity and ranked retrieval.
 *
 * Linguistic terms are defuzzified onto a 0..5 ordinal scale and records are
 * compared as raw feature vectors:
 *
 *   r = |Σ y_k x_k| / sqrt(Σ y_k² · Σ x_k²),   0 ≤ r ≤ 1
 *
 * No per-dimension weighting or scaling is applied unless the caller opts
 * into min-max normalization through RankOptions.
 */

#include "frp/records.hpp"

#include <span>
#include <string>
#include <vector>

namespace frp::fuzzysim {

/// Nil→0, Poor→1, Fair→2, Good→3, VeryGood→4, Excellent→5.
double linguistic_to_crisp(matdb::LinguisticTerm term);

struct FeatureVector {
    matdb::RecordSchema schema = matdb::RecordSchema::Polymer;
    std::vector<double> values;

    bool operator==(const FeatureVector&) const = default;
};

FeatureVector to_feature_vector(const matdb::PolymerRecord& record);
FeatureVector to_feature_vector(const matdb::FiberRecord& record);
FeatureVector to_feature_vector(const matdb::RequirementVector& requirement);

/// Throws ValidationError("undefined_similarity") if either vector is all zeros.
double cosine_amplitude(std::span<const double> y, std::span<const double> x);

/// As above, and additionally rejects schema or length mismatches.
double cosine_amplitude(const FeatureVector& y, const FeatureVector& x);

struct SimilarityResult {
    std::string record_name;
    double strength = 0.0;
    std::size_t rank = 0;  ///< 1-based

    bool operator==(const SimilarityResult&) const = default;
};

struct RankOptions {
    /// Rescale each dimension to [0, 1] over the query and candidate set
    /// before scoring. Off by default.
    bool normalize = false;
};

struct Candidate {
    std::string name;
    FeatureVector features;
};

/**
 * @brief Score every candidate against the query and sort.
 *
 * Order is strength descending, ties by ascending name. A candidate whose
 * vector is all zeros scores 0. A zero query, an empty candidate set or a
 * schema mismatch throws ValidationError.
 */
std::vector<SimilarityResult> rank_by_similarity(const FeatureVector& query,
                                                 std::span<const Candidate> candidates,
                                                 const RankOptions& options = {});

std::vector<SimilarityResult> rank_by_similarity(const matdb::RequirementVector& query,
                                                 std::span<const matdb::PolymerRecord> records,
                                                 const RankOptions& options = {});

std::vector<SimilarityResult> rank_by_similarity(const matdb::RequirementVector& query,
                                                 std::span<const matdb::FiberRecord> records,
                                                 const RankOptions& options = {});

template <typename Record>
struct BestMatch {
    Record record;
    double strength = 0.0;
};

/// Head of rank_by_similarity.
BestMatch<matdb::PolymerRecord> select_best(const matdb::RequirementVector& query,
                                            std::span<const matdb::PolymerRecord> records,
                                            const RankOptions& options = {});
BestMatch<matdb::FiberRecord> select_best(const matdb::RequirementVector& query,
                                          std::span<const matdb::FiberRecord> records,
                                          const RankOptions& options = {});

}  // namespace frp::fuzzysim
