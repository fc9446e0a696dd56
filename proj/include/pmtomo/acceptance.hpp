#pragma once

// The ten acceptance checks, shared by the acceptance test binary and the
// CLI report command.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace pmtomo::acceptance {

struct Options {
    std::uint64_t seed = 20240611;
    std::size_t statistical_samples = 10'000'000;
    std::size_t lemma_constructions = 100;
    std::size_t adversarial_attempts = 1000;
    unsigned threads = 0; ///< sampling threads, 0 = hardware concurrency
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    nlohmann::json details;
    double seconds = 0.0; ///< wall time; kept out of the JSON form
};

inline constexpr int kCriterionCount = 10;

/// Runs criterion `id` (1..10). Library errors are caught and reported as a
/// failure with the error kind and message in `details`.
CriterionResult run(int id, const Options& options = {});
std::vector<CriterionResult> run_all(const std::vector<int>& ids, const Options& options = {});

const char* criterion_name(int id);

/// {"id", "name", "pass", "details"}.
nlohmann::json to_json(const CriterionResult& r);
/// "[PASS] 3 moment recovery, statistical (12.3 s)".
std::string summary_line(const CriterionResult& r);

} // namespace pmtomo::acceptance
