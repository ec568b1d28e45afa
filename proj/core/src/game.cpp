#include "sbe/game.hpp"

#include <algorithm>
#include <cmath>

namespace sbe {

namespace {

double length_sq(Vec2 v) { return v.x * v.x + v.y * v.y; }

double wrap_axis(double v, double extent) {
    if (v >= extent) {
        v -= extent;
    } else if (v < 0) {
        v += extent;
    }
    if (v < 0 || v >= extent) {
        v = std::fmod(v, extent);
        if (v < 0) v += extent;
    }
    return v;
}

Vec2 direction(double heading) { return {std::cos(heading), std::sin(heading)}; }

inline double shortest(double d, double extent) {
    if (d > extent / 2) return d - extent;
    if (d < -extent / 2) return d + extent;
    return d;
}

inline Vec2 torus_delta(Vec2 a, Vec2 b, const WorldConfig& w) {
    return {shortest(b.x - a.x, w.width), shortest(b.y - a.y, w.height)};
}

}  // namespace

void WorldConfig::validate() const {
    if (!(width > 0) || !(height > 0)) throw std::invalid_argument("world dimensions must be positive");
    if (maxTicks <= 0) throw std::invalid_argument("maxTicks must be positive");
    if (startLives <= 0) throw std::invalid_argument("startLives must be positive");
    if (startMissiles < 0) throw std::invalid_argument("startMissiles must be non-negative");
    if (!(scoreDivisor > 0)) throw std::invalid_argument("scoreDivisor must be positive");
}

Game::Game(GameParams params, WorldConfig world) : params_(params), world_(world) { world_.validate(); }

inline void Game::wrap(Vec2& p) const {
    p.x = wrap_axis(p.x, world_.width);
    p.y = wrap_axis(p.y, world_.height);
}

Vec2 Game::wrapped_delta(Vec2 a, Vec2 b) const { return torus_delta(a, b, world_); }

GameState Game::init(std::uint64_t seed) const {
    GameState s;
    s.rng.seed(static_cast<std::minstd_rand::result_type>(seed % 2147483646ULL + 1));

    // Mirrored starts on the horizontal midline, noses pointing at each other.
    const double midY = world_.height / 2;
    s.ships[0].position = {world_.width / 4, midY};
    s.ships[0].heading = 0;
    s.ships[1].position = {3 * world_.width / 4, midY};
    s.ships[1].heading = std::numbers::pi;
    for (auto& ship : s.ships) {
        ship.lives = world_.startLives;
        ship.missilesLeft = world_.startMissiles;
    }

    const int grid = params_.gridSize;
    const double cellW = world_.width / grid;
    const double cellH = world_.height / grid;
    for (int i = 0; i < grid * grid; ++i) {
        if (!params_.blackholeCell[static_cast<std::size_t>(i)]) continue;
        const int row = i / grid;
        const int col = i % grid;
        s.blackHoles.push_back(BlackHole{{(col + 0.5) * cellW, (row + 0.5) * cellH},
                                         params_.blackholeRadius,
                                         params_.blackholeForce,
                                         params_.safeZone});
    }
    s.respawnCountdown = params_.resourceCooldown;
    return s;
}

bool Game::penalized_at(const GameState& state, Vec2 position) const {
    for (const auto& hole : state.blackHoles) {
        const double dSq = length_sq(torus_delta(position, hole.center, world_));
        if (dSq > hole.radius * hole.radius) continue;
        const double d = std::sqrt(dSq);
        const bool safe = world_.safeZonePlacement == SafeZonePlacement::center ? d < hole.safeZone
                                                                               : d > hole.radius - hole.safeZone;
        if (!safe) return true;
    }
    return false;
}

void Game::damage(GameState& state, Player target, Player shooter) const {
    Ship& victim = state.ship(target);
    if (victim.lives > 0) --victim.lives;
    if (target != shooter) {
        Ship& owner = state.ship(shooter);
        owner.score += world_.hitScore;
        ++owner.hits;
    }
}

void Game::explode(GameState& state, const Missile& bomb) const {
    for (Player p : {Player::one, Player::two}) {
        if (length_sq(torus_delta(bomb.position, state.ship(p).position, world_)) <= params_.bombRadius * params_.bombRadius) {
            damage(state, p, bomb.owner);
        }
    }
}

void Game::spawn_shots(GameState& state, Player p) const {
    Ship& ship = state.ship(p);
    const Vec2 dir = direction(ship.heading);
    Vec2 nose{ship.position.x + dir.x * world_.shipRadius, ship.position.y + dir.y * world_.shipRadius};
    wrap(nose);

    auto launch = [&](double heading, MissileKind kind) {
        const Vec2 d = direction(heading);
        state.missiles.push_back(Missile{p,
                                         nose,
                                         {d.x * params_.missileMaxSpeed, d.y * params_.missileMaxSpeed},
                                         params_.missileMaxTtl,
                                         kind,
                                         params_.missileRadius});
    };
    switch (params_.missileType) {
        case MissileType::normal: launch(ship.heading, MissileKind::normal); break;
        case MissileType::twin:
            launch(ship.heading + std::numbers::pi / 4, MissileKind::normal);
            launch(ship.heading - std::numbers::pi / 4, MissileKind::normal);
            break;
        case MissileType::bomb: launch(ship.heading, MissileKind::bomb); break;
    }
}

void Game::advance(GameState& s, Action first, Action second) const {
    if (is_terminal(s)) throw TerminalStateError("step called on a terminal state");
    const std::array<Action, 2> actions{first, second};

    // (1) rotation, (2) thrust, friction and movement.
    for (std::size_t i = 0; i < 2; ++i) {
        Ship& ship = s.ships[i];
        if (actions[i].turn == Turn::clockwise) ship.heading += world_.rotationRate;
        if (actions[i].turn == Turn::anticlockwise) ship.heading -= world_.rotationRate;
        if (ship.heading > std::numbers::pi) ship.heading -= 2 * std::numbers::pi;
        if (ship.heading <= -std::numbers::pi) ship.heading += 2 * std::numbers::pi;
        if (actions[i].thrust) {
            const Vec2 dir = direction(ship.heading);
            ship.velocity.x += dir.x * world_.thrustAccel;
            ship.velocity.y += dir.y * world_.thrustAccel;
        }
        ship.velocity.x *= world_.friction;
        ship.velocity.y *= world_.friction;
        ship.position.x += ship.velocity.x;
        ship.position.y += ship.velocity.y;
        wrap(ship.position);
    }
    for (auto& m : s.missiles) {
        m.position.x += m.velocity.x;
        m.position.y += m.velocity.y;
        wrap(m.position);
    }

    // (3) shooting.
    for (std::size_t i = 0; i < 2; ++i) {
        Ship& ship = s.ships[i];
        if (ship.shotCooldownRemaining > 0) --ship.shotCooldownRemaining;
        if (actions[i].shoot && ship.shotCooldownRemaining == 0 && ship.missilesLeft > 0) {
            --ship.missilesLeft;
            ++ship.shotsFired;
            ship.shotCooldownRemaining = params_.missileCooldown;
            spawn_shots(s, static_cast<Player>(i));
        }
    }

    // (4) black-hole pull.
    if (params_.blackholeForce > 0) {
        const double accel = params_.blackholeForce * world_.blackholeAccelScale;
        auto pull = [&](Vec2 position, Vec2& velocity) {
            for (const auto& hole : s.blackHoles) {
                const Vec2 d = torus_delta(position, hole.center, world_);
                const double distSq = length_sq(d);
                if (distSq > hole.radius * hole.radius || distSq == 0.0) continue;
                const double dist = std::sqrt(distSq);
                velocity.x += d.x / dist * accel;
                velocity.y += d.y / dist * accel;
            }
        };
        for (auto& ship : s.ships) pull(ship.position, ship.velocity);
        for (auto& m : s.missiles) pull(m.position, m.velocity);
    }

    // (5) collisions with the non-owner ship.
    const double reach = world_.shipRadius + params_.missileRadius;
    std::size_t kept = 0;
    for (std::size_t k = 0; k < s.missiles.size(); ++k) {
        const Missile& m = s.missiles[k];
        const Player target = opponent(m.owner);
        if (length_sq(torus_delta(m.position, s.ship(target).position, world_)) <= reach * reach) {
            if (m.kind == MissileKind::bomb) {
                explode(s, m);
            } else {
                damage(s, target, m.owner);
            }
        } else {
            if (kept != k) s.missiles[kept] = m;
            ++kept;
        }
    }
    s.missiles.resize(kept);

    // (6) black-hole penalty.
    if (params_.blackholePenalty > 0) {
        for (auto& ship : s.ships) {
            if (penalized_at(s, ship.position)) {
                ship.score -= params_.blackholePenalty;
                ++ship.penalizedTicks;
            }
        }
    }

    // (7) resource pack.
    if (s.resource) {
        bool collected = false;
        for (auto& ship : s.ships) {
            const double touch = world_.shipRadius + world_.resourceRadius;
            if (length_sq(torus_delta(ship.position, s.resource->position, world_)) <= touch * touch) {
                ship.missilesLeft += world_.resourcePackSize;
                ++ship.packsCollected;
                collected = true;
                break;
            }
        }
        if (!collected && --s.resource->ttlRemaining <= 0) collected = true;
        if (collected) {
            s.resource.reset();
            s.respawnCountdown = params_.resourceCooldown;
        }
    } else if (--s.respawnCountdown <= 0) {
        std::uniform_real_distribution<double> ux(0.0, world_.width);
        std::uniform_real_distribution<double> uy(0.0, world_.height);
        const double x = ux(s.rng);
        const double y = uy(s.rng);
        s.resource = Resource{{x, y}, params_.resourceTtl};
    }

    // (8) missile lifetime; bombs detonate when their fuse runs out.
    kept = 0;
    for (std::size_t k = 0; k < s.missiles.size(); ++k) {
        Missile& m = s.missiles[k];
        if (--m.ttlRemaining <= 0) {
            if (m.kind == MissileKind::bomb) explode(s, m);
        } else {
            if (kept != k) s.missiles[kept] = m;
            ++kept;
        }
    }
    s.missiles.resize(kept);

    // (9)
    ++s.tick;
}

GameState Game::step(const GameState& state, Action first, Action second) const {
    GameState next = state;
    advance(next, first, second);
    return next;
}

std::optional<Outcome> Game::outcome(const GameState& s) const {
    if (s.tick < world_.maxTicks && s.ships[0].lives > 0 && s.ships[1].lives > 0) return std::nullopt;
    Outcome o;
    if (s.ships[0].score > s.ships[1].score) o.winner = Player::one;
    if (s.ships[1].score > s.ships[0].score) o.winner = Player::two;
    return o;
}

GameState init_game(const GameParams& params, const WorldConfig& world, std::uint64_t seed) {
    return Game(params, world).init(seed);
}

GameState step(const GameState& state, Action first, Action second, const GameParams& params,
               const WorldConfig& world) {
    return Game(params, world).step(state, first, second);
}

std::optional<Outcome> is_terminal(const GameState& state, const WorldConfig& world) {
    if (state.tick < world.maxTicks && state.ships[0].lives > 0 && state.ships[1].lives > 0) return std::nullopt;
    return Game(GameParams{}, world).outcome(state);
}

}  // namespace sbe
