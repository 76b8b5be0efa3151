#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cesaro/appendix.hpp"
#include "cesaro/field.hpp"
#include "cesaro/lab.hpp"
#include "cesaro/weights.hpp"

namespace cesaro {

using Json = nlohmann::ordered_json;

Json to_json(const TailProfile& profile);
/// Accepts {"family": ..., "p": ..., "q": ..., "mu": ..., "x0": ...}; missing
/// keys take the factory defaults.
TailProfile profile_from_json(const Json& j);

Json to_json(const CesaroOrder& order);
Json to_json(const MomentRequirement& req);
Json to_json(const SeriesGrowth& growth);
Json to_json(const ProbabilityResult& result);
Json to_json(const TrajectoryResult& result);
Json to_json(const IntegralGrowth& growth);
Json to_json(const EquivalenceReport& report);

// ---------------------------------------------------------------------------
// Single verdicts.

struct VerdictConfig {
    Mode mode = Mode::almost_sure;
    TailProfile profile;
    CesaroOrder order = CesaroOrder::two_dim(0.75, 0.75);
    std::uint64_t master_seed = 1;
    std::uint64_t stream = 0;
    unsigned threads = 1;

    // in_probability
    std::vector<Checkpoint> checkpoints{{64, 64}, {256, 256}, {1024, 1024}};
    double prob_eps = 0.25;
    std::size_t prob_replicates = 400;
    double small_exceedance = 0.05;  ///< last exceedance at or below this counts as concentrated

    // almost_sure
    unsigned log2_extent = 11;
    std::size_t as_replicates = 20;
    double as_eps = 0.1;

    // complete
    std::size_t N = 128;
    GrowthRule rule;
};

struct ConvergenceVerdict {
    Mode mode = Mode::almost_sure;
    bool predicted = false;
    Observation observed = Observation::inconclusive;
    Json statistics;

    /// True when the observation is decisive and agrees with the prediction.
    bool concordant() const noexcept;
};

/// Weak-law observation from exceedance fractions along the checkpoints:
/// consistent if the last fraction is small, or the sequence decreases with
/// a drop above three standard errors; divergent if the last fraction is not
/// small and the drop is below one standard error.
Observation observe_probability(const ProbabilityResult& result, std::size_t replicates, double small_exceedance);

ConvergenceVerdict run_verdict(const VerdictConfig& config);

/// {mode, predicted, observed, observation, concordant, statistics}; observed
/// is null when inconclusive.
Json to_json(const ConvergenceVerdict& verdict);

// ---------------------------------------------------------------------------
// The theory-versus-experiment matrix.

enum class MatrixScale { full, quick };

std::string_view to_string(MatrixScale s);
MatrixScale parse_scale(std::string_view name);

struct MatrixConfig {
    std::uint64_t master_seed = 20240601;
    unsigned threads = 1;
    MatrixScale scale = MatrixScale::full;
};

/// The (alpha, beta) regimes of the complete convergence table, one per row.
std::vector<CesaroOrder> complete_regimes();

/// Orders used for the Rademacher strong-law baseline and the algorithm
/// equivalence checks.
std::vector<CesaroOrder> order_matrix();

/// Just-finite and just-infinite pareto_log profiles at the exact power
/// boundary r of a requirement: q = s + 3 and q = s.
TailProfile just_finite(const MomentRequirement& req);
TailProfile just_infinite(const MomentRequirement& req);

struct StrongLawScenario {
    std::string name;
    TailProfile profile;
    CesaroOrder order = CesaroOrder::two_dim(0.75, 0.75);
};

std::vector<StrongLawScenario> strong_law_scenarios();

using SectionTimer = std::function<void(std::string_view section, double seconds)>;

Json run_weak_law_section(const MatrixConfig& config);
Json run_strong_law_section(const MatrixConfig& config);
Json run_complete_section(const MatrixConfig& config);
Json run_appendix_section(const MatrixConfig& config);

/// Runs every section and adds a summary. The only wall-clock dependent key
/// is the top-level "generated_at"; `timer` (if set) receives each section's
/// duration and is not recorded in the report.
Json run_matrix(const MatrixConfig& config, const SectionTimer& timer = {});

/// The report without its "generated_at" key, serialized.
std::string canonical_dump(Json report);

}  // namespace cesaro
