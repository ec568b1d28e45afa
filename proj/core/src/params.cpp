#include "sbe/params.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace sbe {

namespace {

std::vector<double> range_values(double lo, double hi, double step) {
    std::vector<double> values;
    const auto count = static_cast<int>((hi - lo) / step + 0.5) + 1;
    values.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) values.push_back(lo + step * i);
    return values;
}

std::string format_value(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

SearchSpace::SearchSpace(std::vector<GeneSpec> genes) : genes_(std::move(genes)) {
    for (const auto& g : genes_) {
        if (g.arity() < 2) throw std::invalid_argument("gene '" + g.name + "' needs at least two levels");
        if (!std::is_sorted(g.values.begin(), g.values.end(), std::less_equal<>{}))
            throw std::invalid_argument("gene '" + g.name + "' values must be strictly increasing");
    }
}

SearchSpace SearchSpace::from_arities(const std::vector<std::size_t>& arities) {
    std::vector<GeneSpec> genes;
    genes.reserve(arities.size());
    for (std::size_t i = 0; i < arities.size(); ++i) {
        GeneSpec spec{"G" + std::to_string(i), {}};
        for (std::size_t v = 0; v < arities[i]; ++v) spec.values.push_back(static_cast<double>(v));
        genes.push_back(std::move(spec));
    }
    return SearchSpace(std::move(genes));
}

std::uint64_t SearchSpace::cardinality() const {
    std::uint64_t total = 1;
    for (const auto& g : genes_) {
        if (total > std::numeric_limits<std::uint64_t>::max() / g.arity())
            return std::numeric_limits<std::uint64_t>::max();
        total *= g.arity();
    }
    return total;
}

std::size_t SearchSpace::neighbourhood_size() const {
    std::size_t n = 0;
    for (const auto& g : genes_) n += g.arity() - 1;
    return n;
}

std::size_t GenomeHash::operator()(const Genome& g) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int level : g.levels) {
        h ^= static_cast<std::size_t>(level) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

bool is_valid(const Genome& genome, const SearchSpace& space) noexcept {
    if (genome.levels.size() != space.size()) return false;
    for (std::size_t g = 0; g < space.size(); ++g) {
        const int level = genome.levels[g];
        if (level < 0 || static_cast<std::size_t>(level) >= space.gene(g).arity()) return false;
    }
    return true;
}

void validate(const Genome& genome, const SearchSpace& space) {
    if (genome.levels.size() != space.size()) {
        throw InvalidGenome("genome has " + std::to_string(genome.levels.size()) + " genes, expected " +
                            std::to_string(space.size()));
    }
    for (std::size_t g = 0; g < space.size(); ++g) {
        const int level = genome.levels[g];
        if (level < 0 || static_cast<std::size_t>(level) >= space.arity(g)) {
            throw InvalidGenome("gene " + std::to_string(g) + " (" + space.gene(g).name + ") level " +
                                std::to_string(level) + " out of range [0," + std::to_string(space.arity(g)) +
                                ")");
        }
    }
}

std::size_t hamming_distance(const Genome& a, const Genome& b) {
    if (a.levels.size() != b.levels.size()) throw std::invalid_argument("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.levels.size(); ++i) d += a.levels[i] != b.levels[i];
    return d;
}

SearchSpace default_search_space() {
    std::vector<GeneSpec> genes;
    genes.reserve(gene::kCount);
    genes.push_back({"MISSILE_MAX_SPEED", range_values(1, 10, 1)});
    genes.push_back({"MISSILE_COOLDOWN", range_values(1, 9, 1)});
    genes.push_back({"MISSILE_RADIUS", range_values(2, 10, 2)});
    genes.push_back({"MISSILE_MAX_TTL", range_values(40, 160, 20)});
    genes.push_back({"GRID_SIZE", range_values(1, 4, 1)});
    for (int row = 1; row <= 4; ++row) {
        for (int col = 1; col <= 4; ++col) {
            genes.push_back({"BLACKHOLE_CELL_" + std::to_string(row) + "_" + std::to_string(col), {0, 1}});
        }
    }
    genes.push_back({"BLACKHOLE_RADIUS", range_values(25, 200, 25)});
    genes.push_back({"BLACKHOLE_FORCE", range_values(0, 3, 1)});
    genes.push_back({"BLACKHOLE_PENALTY", range_values(0, 9, 1)});
    genes.push_back({"SAFE_ZONE", range_values(0, 20, 10)});
    genes.push_back({"BOMB_RADIUS", range_values(10, 50, 10)});
    genes.push_back({"MISSILE_TYPE", range_values(0, 2, 1)});
    genes.push_back({"RESOURCE_TTL", range_values(400, 600, 100)});
    genes.push_back({"RESOURCE_COOLDOWN", range_values(200, 300, 50)});
    genes.push_back({"ENEMY_ID", range_values(0, 5, 1)});
    return SearchSpace(std::move(genes));
}

std::string_view to_string(AgentId id) {
    switch (id) {
        case AgentId::do_nothing: return "DoNothing";
        case AgentId::random: return "Random";
        case AgentId::osla: return "OSLA";
        case AgentId::ras: return "RAS";
        case AgentId::mcts: return "MCTS";
        case AgentId::mea: return "MEA";
    }
    return "?";
}

AgentId agent_from_int(int id) {
    if (id < 0 || id >= kAgentCount) throw std::invalid_argument("unknown agent id " + std::to_string(id));
    return static_cast<AgentId>(id);
}

GameParams decode(const Genome& genome, const SearchSpace& space) {
    if (space.size() != gene::kCount) {
        throw std::invalid_argument("decode: space has " + std::to_string(space.size()) + " genes, expected " +
                                    std::to_string(gene::kCount));
    }
    validate(genome, space);
    auto value = [&](std::size_t g) { return space.gene(g).values[static_cast<std::size_t>(genome.levels[g])]; };
    auto as_int = [&](std::size_t g) { return static_cast<int>(value(g)); };

    GameParams p;
    p.missileMaxSpeed = value(gene::kMissileMaxSpeed);
    p.missileCooldown = as_int(gene::kMissileCooldown);
    p.missileRadius = value(gene::kMissileRadius);
    p.missileMaxTtl = as_int(gene::kMissileMaxTtl);
    p.gridSize = as_int(gene::kGridSize);
    for (std::size_t c = 0; c < gene::kCellCount; ++c) p.blackholeCell[c] = value(gene::kFirstCell + c) != 0.0;
    p.blackholeRadius = value(gene::kBlackholeRadius);
    p.blackholeForce = value(gene::kBlackholeForce);
    p.blackholePenalty = value(gene::kBlackholePenalty);
    p.safeZone = value(gene::kSafeZone);
    p.bombRadius = value(gene::kBombRadius);
    p.missileType = static_cast<MissileType>(as_int(gene::kMissileType));
    p.resourceTtl = as_int(gene::kResourceTtl);
    p.resourceCooldown = as_int(gene::kResourceCooldown);
    p.enemyId = agent_from_int(as_int(gene::kEnemyId));
    return p;
}

Genome random_genome(const SearchSpace& space, std::mt19937_64& rng) {
    Genome g;
    g.levels.reserve(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        std::uniform_int_distribution<int> level(0, static_cast<int>(space.arity(i)) - 1);
        g.levels.push_back(level(rng));
    }
    return g;
}

Genome mutate(const Genome& genome, const SearchSpace& space, std::mt19937_64& rng,
              std::optional<std::size_t> forcedGene) {
    validate(genome, space);
    if (forcedGene && *forcedGene >= space.size()) {
        throw std::out_of_range("mutate: gene " + std::to_string(*forcedGene) + " out of range");
    }
    std::size_t g = 0;
    if (forcedGene) {
        g = *forcedGene;
    } else {
        std::uniform_int_distribution<std::size_t> pick(0, space.size() - 1);
        g = pick(rng);
    }
    // Draw from the other arity-1 levels by skipping over the current one.
    std::uniform_int_distribution<int> other(0, static_cast<int>(space.arity(g)) - 2);
    int level = other(rng);
    if (level >= genome.levels[g]) ++level;

    Genome out = genome;
    out.levels[g] = level;
    return out;
}

std::vector<Genome> neighbours(const Genome& genome, const SearchSpace& space, std::size_t k,
                               std::mt19937_64& rng) {
    validate(genome, space);
    if (k == 0) throw std::invalid_argument("neighbours: k must be at least 1");

    std::vector<Genome> out;
    if (k >= space.neighbourhood_size()) {
        out.reserve(space.neighbourhood_size());
        for (std::size_t g = 0; g < space.size(); ++g) {
            for (int level = 0; level < static_cast<int>(space.arity(g)); ++level) {
                if (level == genome.levels[g]) continue;
                Genome n = genome;
                n.levels[g] = level;
                out.push_back(std::move(n));
            }
        }
        return out;
    }

    std::unordered_set<Genome, GenomeHash> seen;
    out.reserve(k);
    while (out.size() < k) {
        Genome n = mutate(genome, space, rng);
        if (seen.insert(n).second) out.push_back(std::move(n));
    }
    return out;
}

std::string format_genome(const Genome& genome) {
    std::string out;
    for (std::size_t i = 0; i < genome.levels.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(genome.levels[i]);
    }
    return out;
}

Genome parse_genome(std::string_view text) {
    Genome g;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(',', pos), text.size());
        std::string_view token = text.substr(pos, end - pos);
        while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
        while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
        int level = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), level);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
            throw InvalidGenome("malformed genome token '" + std::string(token) + "'");
        }
        g.levels.push_back(level);
        pos = end + 1;
    }
    return g;
}

Genome load_genome_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open genome file " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        return parse_genome(line);
    }
    throw InvalidGenome("genome file " + path + " is empty");
}

std::string format_params(const GameParams& p) {
    const SearchSpace space = default_search_space();
    std::ostringstream os;
    auto put = [&](std::size_t g, double v) { os << space.gene(g).name << '=' << format_value(v) << '\n'; };
    put(gene::kMissileMaxSpeed, p.missileMaxSpeed);
    put(gene::kMissileCooldown, p.missileCooldown);
    put(gene::kMissileRadius, p.missileRadius);
    put(gene::kMissileMaxTtl, p.missileMaxTtl);
    put(gene::kGridSize, p.gridSize);
    for (std::size_t c = 0; c < gene::kCellCount; ++c) put(gene::kFirstCell + c, p.blackholeCell[c] ? 1 : 0);
    put(gene::kBlackholeRadius, p.blackholeRadius);
    put(gene::kBlackholeForce, p.blackholeForce);
    put(gene::kBlackholePenalty, p.blackholePenalty);
    put(gene::kSafeZone, p.safeZone);
    put(gene::kBombRadius, p.bombRadius);
    put(gene::kMissileType, static_cast<int>(p.missileType));
    put(gene::kResourceTtl, p.resourceTtl);
    put(gene::kResourceCooldown, p.resourceCooldown);
    put(gene::kEnemyId, static_cast<int>(p.enemyId));
    return os.str();
}

}  // namespace sbe
