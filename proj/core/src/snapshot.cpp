#include "sbe/snapshot.hpp"

#include <nlohmann/json.hpp>

namespace sbe {

using nlohmann::ordered_json;

std::string state_frame(const GameState& s) {
    ordered_json ships = ordered_json::array();
    for (std::size_t i = 0; i < s.ships.size(); ++i) {
        const Ship& sh = s.ships[i];
        ships.push_back({{"id", i + 1},
                         {"x", sh.position.x},
                         {"y", sh.position.y},
                         {"vx", sh.velocity.x},
                         {"vy", sh.velocity.y},
                         {"heading", sh.heading},
                         {"lives", sh.lives},
                         {"missilesLeft", sh.missilesLeft},
                         {"score", sh.score},
                         {"cooldown", sh.shotCooldownRemaining}});
    }
    ordered_json missiles = ordered_json::array();
    for (const Missile& m : s.missiles) {
        missiles.push_back({{"owner", index_of(m.owner) + 1},
                            {"x", m.position.x},
                            {"y", m.position.y},
                            {"vx", m.velocity.x},
                            {"vy", m.velocity.y},
                            {"ttl", m.ttlRemaining},
                            {"kind", m.kind == MissileKind::bomb ? "bomb" : "normal"},
                            {"radius", m.radius}});
    }
    ordered_json holes = ordered_json::array();
    for (const BlackHole& h : s.blackHoles) {
        holes.push_back({{"x", h.center.x}, {"y", h.center.y}, {"radius", h.radius}, {"force", h.force},
                         {"safeZone", h.safeZone}});
    }
    ordered_json resource = nullptr;
    if (s.resource) {
        resource = {{"x", s.resource->position.x}, {"y", s.resource->position.y}, {"ttl", s.resource->ttlRemaining}};
    }

    ordered_json frame;
    frame["type"] = "state";
    frame["tick"] = s.tick;
    frame["ships"] = std::move(ships);
    frame["missiles"] = std::move(missiles);
    frame["blackHoles"] = std::move(holes);
    frame["resource"] = std::move(resource);
    frame["respawnCountdown"] = s.respawnCountdown;
    frame["scores"] = {s.ships[0].score, s.ships[1].score};
    frame["lives"] = {s.ships[0].lives, s.ships[1].lives};
    frame["missilesLeft"] = {s.ships[0].missilesLeft, s.ships[1].missilesLeft};
    return frame.dump();
}

std::string result_frame(const GameState& s, const Outcome& outcome) {
    ordered_json frame;
    frame["type"] = "result";
    frame["winner"] = outcome.winner ? static_cast<int>(index_of(*outcome.winner)) + 1 : 0;
    frame["scores"] = {s.ships[0].score, s.ships[1].score};
    frame["tick"] = s.tick;
    return frame.dump();
}

}  // namespace sbe
