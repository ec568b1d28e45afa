#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sbe {

/// Thrown when a genome does not fit its search space.
class InvalidGenome : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct GeneSpec {
    std::string name;
    std::vector<double> values;  // strictly increasing

    std::size_t arity() const { return values.size(); }
};

/// Ordered list of discrete genes. The default space is the 30-gene game
/// parameter table; smaller spaces are used by tests and surrogate runs.
class SearchSpace {
public:
    SearchSpace() = default;
    explicit SearchSpace(std::vector<GeneSpec> genes);

    /// Builds a space of unnamed genes with levels 0..arity-1.
    static SearchSpace from_arities(const std::vector<std::size_t>& arities);

    std::size_t size() const { return genes_.size(); }
    const GeneSpec& gene(std::size_t g) const { return genes_.at(g); }
    std::size_t arity(std::size_t g) const { return genes_.at(g).arity(); }
    const std::vector<GeneSpec>& genes() const { return genes_; }

    /// Product of arities. Saturates at UINT64_MAX.
    std::uint64_t cardinality() const;
    /// Number of genomes at Hamming distance exactly 1 from any point.
    std::size_t neighbourhood_size() const;

private:
    std::vector<GeneSpec> genes_;
};

struct Genome {
    std::vector<int> levels;

    friend bool operator==(const Genome&, const Genome&) = default;
    friend auto operator<=>(const Genome&, const Genome&) = default;
};

struct GenomeHash {
    std::size_t operator()(const Genome& g) const noexcept;
};

void validate(const Genome& genome, const SearchSpace& space);
bool is_valid(const Genome& genome, const SearchSpace& space) noexcept;
std::size_t hamming_distance(const Genome& a, const Genome& b);

// Gene layout of the game parameter space.
namespace gene {
inline constexpr std::size_t kMissileMaxSpeed = 0;
inline constexpr std::size_t kMissileCooldown = 1;
inline constexpr std::size_t kMissileRadius = 2;
inline constexpr std::size_t kMissileMaxTtl = 3;
inline constexpr std::size_t kGridSize = 4;
inline constexpr std::size_t kFirstCell = 5;
inline constexpr std::size_t kCellCount = 16;
inline constexpr std::size_t kBlackholeRadius = 21;
inline constexpr std::size_t kBlackholeForce = 22;
inline constexpr std::size_t kBlackholePenalty = 23;
inline constexpr std::size_t kSafeZone = 24;
inline constexpr std::size_t kBombRadius = 25;
inline constexpr std::size_t kMissileType = 26;
inline constexpr std::size_t kResourceTtl = 27;
inline constexpr std::size_t kResourceCooldown = 28;
inline constexpr std::size_t kEnemyId = 29;
inline constexpr std::size_t kCount = 30;

constexpr bool is_cell(std::size_t g) { return g >= kFirstCell && g < kFirstCell + kCellCount; }
}  // namespace gene

/// The 30-gene game design space.
SearchSpace default_search_space();

enum class MissileType : std::uint8_t { normal = 0, twin = 1, bomb = 2 };

/// Agent identifiers; the numbering is the ENEMY_ID gene encoding.
enum class AgentId : std::uint8_t { do_nothing = 0, random = 1, osla = 2, ras = 3, mcts = 4, mea = 5 };
inline constexpr int kAgentCount = 6;

std::string_view to_string(AgentId id);
AgentId agent_from_int(int id);

/// Decoded game configuration. Units: pixels and ticks.
struct GameParams {
    double missileMaxSpeed = 1;
    int missileCooldown = 1;
    double missileRadius = 2;
    int missileMaxTtl = 40;
    int gridSize = 1;
    std::array<bool, gene::kCellCount> blackholeCell{};
    double blackholeRadius = 25;
    double blackholeForce = 0;
    double blackholePenalty = 0;
    double safeZone = 0;
    double bombRadius = 10;
    MissileType missileType = MissileType::normal;
    int resourceTtl = 400;
    int resourceCooldown = 200;
    AgentId enemyId = AgentId::do_nothing;

    friend bool operator==(const GameParams&, const GameParams&) = default;
};

/// Maps levels to values. Requires the default 30-gene layout.
GameParams decode(const Genome& genome, const SearchSpace& space);

Genome random_genome(const SearchSpace& space, std::mt19937_64& rng);

/// One gene (forced or uniformly chosen) moves to a different level, drawn
/// uniformly from the arity-1 alternatives.
Genome mutate(const Genome& genome, const SearchSpace& space, std::mt19937_64& rng,
              std::optional<std::size_t> forcedGene = std::nullopt);

/// Up to k distinct genomes at Hamming distance 1. Returns the whole
/// 1-neighbourhood when it has at most k members.
std::vector<Genome> neighbours(const Genome& genome, const SearchSpace& space, std::size_t k,
                               std::mt19937_64& rng);

// Serialization: genomes as one comma-separated line of levels, parameters
// as KEY=value lines keyed by gene name.
std::string format_genome(const Genome& genome);
Genome parse_genome(std::string_view text);
Genome load_genome_file(const std::string& path);
std::string format_params(const GameParams& params);

}  // namespace sbe
