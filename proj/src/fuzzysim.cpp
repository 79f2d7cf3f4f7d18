#include "frp/fuzzysim.hpp"

#include "frp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frp::fuzzysim {

using matdb::RecordSchema;

double linguistic_to_crisp(matdb::LinguisticTerm term) {
    switch (term) {
        case matdb::LinguisticTerm::Nil: return 0.0;
        case matdb::LinguisticTerm::Poor: return 1.0;
        case matdb::LinguisticTerm::Fair: return 2.0;
        case matdb::LinguisticTerm::Good: return 3.0;
        case matdb::LinguisticTerm::VeryGood: return 4.0;
        case matdb::LinguisticTerm::Excellent: return 5.0;
    }
    return 0.0;
}

namespace {

double crisp(const matdb::PropertyValue& v) {
    if (matdb::is_numeric(v)) return std::get<double>(v);
    return linguistic_to_crisp(std::get<matdb::LinguisticTerm>(v));
}

template <typename It>
FeatureVector make_vector(RecordSchema schema, It first, It last) {
    FeatureVector fv{schema, {}};
    fv.values.reserve(static_cast<std::size_t>(std::distance(first, last)));
    for (; first != last; ++first) fv.values.push_back(crisp(*first));
    return fv;
}

struct Products {
    double dot = 0.0;
    double yy = 0.0;
    double xx = 0.0;
};

Products products(std::span<const double> y, std::span<const double> x) {
    Products p;
    for (std::size_t k = 0; k < y.size(); ++k) {
        p.dot += y[k] * x[k];
        p.yy += y[k] * y[k];
        p.xx += x[k] * x[k];
    }
    return p;
}

double strength(const Products& p) {
    const double r = std::abs(p.dot) / std::sqrt(p.yy * p.xx);
    // Rounding can push collinear vectors a hair past 1.
    return std::min(r, 1.0);
}

void check_query(const FeatureVector& query) {
    if (query.values.size() != matdb::schema_slots(query.schema).size())
        throw ValidationError("invalid_requirement", "query length does not match its schema");
    for (double v : query.values) {
        if (!std::isfinite(v) || v < 0.0)
            throw ValidationError("invalid_requirement", "query values must be finite and >= 0");
    }
}

// Per-dimension min-max over the query and all candidates.
void normalize_in_place(FeatureVector& query, std::vector<FeatureVector>& cands) {
    const std::size_t m = query.values.size();
    for (std::size_t k = 0; k < m; ++k) {
        double lo = query.values[k];
        double hi = query.values[k];
        for (const auto& c : cands) {
            lo = std::min(lo, c.values[k]);
            hi = std::max(hi, c.values[k]);
        }
        const double span = hi - lo;
        auto scale = [&](double v) { return span > 0.0 ? (v - lo) / span : 0.0; };
        query.values[k] = scale(query.values[k]);
        for (auto& c : cands) c.values[k] = scale(c.values[k]);
    }
}

}  // namespace

FeatureVector to_feature_vector(const matdb::PolymerRecord& record) {
    return make_vector(RecordSchema::Polymer, record.properties.begin(), record.properties.end());
}

FeatureVector to_feature_vector(const matdb::FiberRecord& record) {
    const auto v = record.values();
    return {RecordSchema::Fiber, {v.begin(), v.end()}};
}

FeatureVector to_feature_vector(const matdb::RequirementVector& requirement) {
    return make_vector(requirement.schema, requirement.values.begin(), requirement.values.end());
}

double cosine_amplitude(std::span<const double> y, std::span<const double> x) {
    if (y.size() != x.size())
        throw ValidationError("dimension_mismatch", "feature vectors differ in length");
    const Products p = products(y, x);
    if (p.yy == 0.0 || p.xx == 0.0)
        throw ValidationError("undefined_similarity", "similarity is undefined for a zero vector");
    return strength(p);
}

double cosine_amplitude(const FeatureVector& y, const FeatureVector& x) {
    if (y.schema != x.schema)
        throw ValidationError("dimension_mismatch", "feature vectors use different schemas");
    return cosine_amplitude(std::span<const double>(y.values), std::span<const double>(x.values));
}

std::vector<SimilarityResult> rank_by_similarity(const FeatureVector& query,
                                                 std::span<const Candidate> candidates,
                                                 const RankOptions& options) {
    if (candidates.empty()) throw ValidationError("empty_collection", "no records to rank");
    check_query(query);
    for (const auto& c : candidates) {
        if (c.features.schema != query.schema || c.features.values.size() != query.values.size())
            throw ValidationError("dimension_mismatch",
                                  "record '" + c.name + "' does not match the query schema", c.name);
    }

    FeatureVector q = query;
    std::vector<FeatureVector> xs;
    xs.reserve(candidates.size());
    for (const auto& c : candidates) xs.push_back(c.features);
    if (options.normalize) normalize_in_place(q, xs);

    if (std::all_of(q.values.begin(), q.values.end(), [](double v) { return v == 0.0; }))
        throw ValidationError("undefined_similarity", "similarity is undefined for a zero query");

    std::vector<SimilarityResult> out;
    out.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Products p = products(q.values, xs[i].values);
        out.push_back({candidates[i].name, p.xx == 0.0 ? 0.0 : strength(p), 0});
    }
    std::stable_sort(out.begin(), out.end(), [](const SimilarityResult& a, const SimilarityResult& b) {
        if (a.strength != b.strength) return a.strength > b.strength;
        return a.record_name < b.record_name;
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
    return out;
}

namespace {

template <typename Record>
std::vector<SimilarityResult> rank_records(const matdb::RequirementVector& query,
                                           std::span<const Record> records,
                                           RecordSchema expected, const RankOptions& options) {
    if (query.schema != expected) {
        throw ValidationError("invalid_requirement",
                              "requirement schema is '" +
                                  std::string(matdb::schema_name(query.schema)) + "', expected '" +
                                  std::string(matdb::schema_name(expected)) + "'",
                              "schema");
    }
    std::vector<Candidate> cands;
    cands.reserve(records.size());
    for (const auto& r : records) cands.push_back({r.name, to_feature_vector(r)});
    return rank_by_similarity(to_feature_vector(query), cands, options);
}

template <typename Record>
BestMatch<Record> best_of(const std::vector<SimilarityResult>& ranking,
                          std::span<const Record> records) {
    const auto& top = ranking.front();
    auto it = std::find_if(records.begin(), records.end(),
                           [&](const Record& r) { return r.name == top.record_name; });
    return {*it, top.strength};
}

}  // namespace

std::vector<SimilarityResult> rank_by_similarity(const matdb::RequirementVector& query,
                                                 std::span<const matdb::PolymerRecord> records,
                                                 const RankOptions& options) {
    return rank_records(query, records, RecordSchema::Polymer, options);
}

std::vector<SimilarityResult> rank_by_similarity(const matdb::RequirementVector& query,
                                                 std::span<const matdb::FiberRecord> records,
                                                 const RankOptions& options) {
    return rank_records(query, records, RecordSchema::Fiber, options);
}

BestMatch<matdb::PolymerRecord> select_best(const matdb::RequirementVector& query,
                                            std::span<const matdb::PolymerRecord> records,
                                            const RankOptions& options) {
    return best_of(rank_by_similarity(query, records, options), records);
}

BestMatch<matdb::FiberRecord> select_best(const matdb::RequirementVector& query,
                                          std::span<const matdb::FiberRecord> records,
                                          const RankOptions& options) {
    return best_of(rank_by_similarity(query, records, options), records);
}

}  // namespace frp::fuzzysim
