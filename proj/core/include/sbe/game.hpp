#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "sbe/params.hpp"

namespace sbe {

struct Vec2 {
    double x = 0;
    double y = 0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Where a black hole's no-penalty band sits.
enum class SafeZonePlacement : std::uint8_t { center, border };

/// Fixed world constants. The game parameters evolve; these do not.
struct WorldConfig {
    double width = 640;
    double height = 480;
    int maxTicks = 2000;
    int startLives = 1000;
    int startMissiles = 100;
    double rotationRate = std::numbers::pi / 30;
    double thrustAccel = 0.2;
    double friction = 0.99;
    double shipRadius = 10;
    double hitScore = 100;
    double winBonus = 1000;
    int resourcePackSize = 20;
    double scoreDivisor = 100;
    double resourceRadius = 10;
    double blackholeAccelScale = 0.05;  // px/tick^2 per unit of BLACKHOLE_FORCE
    SafeZonePlacement safeZonePlacement = SafeZonePlacement::center;

    void validate() const;
};

enum class Player : std::uint8_t { one = 0, two = 1 };

constexpr std::size_t index_of(Player p) { return static_cast<std::size_t>(p); }
constexpr Player opponent(Player p) { return p == Player::one ? Player::two : Player::one; }

enum class Turn : std::uint8_t { none = 0, clockwise = 1, anticlockwise = 2 };

struct Action {
    Turn turn = Turn::none;
    bool thrust = false;
    bool shoot = false;

    static constexpr int kCount = 12;

    constexpr int index() const { return static_cast<int>(turn) * 4 + (thrust ? 2 : 0) + (shoot ? 1 : 0); }
    static constexpr Action from_index(int i) {
        return Action{static_cast<Turn>(i / 4), (i & 2) != 0, (i & 1) != 0};
    }
    static constexpr Action noop() { return {}; }

    friend bool operator==(const Action&, const Action&) = default;
};

struct Ship {
    Vec2 position;
    Vec2 velocity;
    double heading = 0;  // radians; clockwise is increasing on a y-down screen
    int lives = 0;
    int missilesLeft = 0;
    double score = 0;
    int shotCooldownRemaining = 0;
    // Bookkeeping for score and budget identities.
    int hits = 0;
    int penalizedTicks = 0;
    int shotsFired = 0;
    int packsCollected = 0;

    friend bool operator==(const Ship&, const Ship&) = default;
};

enum class MissileKind : std::uint8_t { normal = 0, bomb = 1 };

struct Missile {
    Player owner = Player::one;
    Vec2 position;
    Vec2 velocity;
    int ttlRemaining = 0;
    MissileKind kind = MissileKind::normal;
    double radius = 0;

    friend bool operator==(const Missile&, const Missile&) = default;
};

struct BlackHole {
    Vec2 center;
    double radius = 0;
    double force = 0;
    double safeZone = 0;

    friend bool operator==(const BlackHole&, const BlackHole&) = default;
};

struct Resource {
    Vec2 position;
    int ttlRemaining = 0;

    friend bool operator==(const Resource&, const Resource&) = default;
};

struct GameState {
    int tick = 0;
    std::array<Ship, 2> ships{};
    std::vector<Missile> missiles;
    std::vector<BlackHole> blackHoles;
    std::optional<Resource> resource;
    int respawnCountdown = 0;
    std::minstd_rand rng;

    Ship& ship(Player p) { return ships[index_of(p)]; }
    const Ship& ship(Player p) const { return ships[index_of(p)]; }

    friend bool operator==(const GameState&, const GameState&) = default;
};

struct Outcome {
    std::optional<Player> winner;  // empty on a draw

    bool draw() const { return !winner.has_value(); }
    friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Raised when stepping a finished game.
class TerminalStateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Forward model: the game rules bound to one parameter set.
class Game {
public:
    Game(GameParams params, WorldConfig world);

    const GameParams& params() const { return params_; }
    const WorldConfig& world() const { return world_; }

    GameState init(std::uint64_t seed) const;
    /// Advances one tick in place; both actions apply simultaneously.
    void advance(GameState& state, Action first, Action second) const;
    GameState step(const GameState& state, Action first, Action second) const;
    std::optional<Outcome> outcome(const GameState& state) const;
    bool is_terminal(const GameState& state) const { return outcome(state).has_value(); }

    /// Shortest displacement from a to b on the torus.
    Vec2 wrapped_delta(Vec2 a, Vec2 b) const;
    /// Whether a ship at this position is charged the black-hole penalty.
    bool penalized_at(const GameState& state, Vec2 position) const;

private:
    void spawn_shots(GameState& state, Player p) const;
    void explode(GameState& state, const Missile& bomb) const;
    void damage(GameState& state, Player target, Player shooter) const;
    void wrap(Vec2& p) const;

    GameParams params_;
    WorldConfig world_;
};

// Free-function forms of the forward model.
GameState init_game(const GameParams& params, const WorldConfig& world, std::uint64_t seed);
GameState step(const GameState& state, Action first, Action second, const GameParams& params,
               const WorldConfig& world);
std::optional<Outcome> is_terminal(const GameState& state, const WorldConfig& world);
inline GameState copy(const GameState& state) { return state; }

}  // namespace sbe
