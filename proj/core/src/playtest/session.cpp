#include "sbe/playtest/session.hpp"

#include <nlohmann/json.hpp>

#include "sbe/seeding.hpp"
#include "sbe/snapshot.hpp"

namespace sbe::playtest {

using nlohmann::ordered_json;

Session::Session(std::string id, const GameParams& params, SessionOptions options)
    : id_(std::move(id)),
      game_(params, options.world),
      options_(std::move(options)),
      enemy_(options_.enemyOverride.value_or(params.enemyId)),
      enemyRng_(derive_seed(options_.seed, index_of(opponent(options_.humanSide)) + 1)),
      state_(game_.init(derive_seed(options_.seed, 0))) {
    options_.enemyBudgets.validate();
    if (options_.tickInterval.count() <= 0) throw std::invalid_argument("tick interval must be positive");
}

void Session::set_pending_action(Action action) {
    std::lock_guard lock(mutex_);
    pending_ = action;
}

TickOutput Session::tick() {
    std::lock_guard lock(mutex_);
    if (game_.is_terminal(state_)) throw TerminalStateError("session " + id_ + " has finished");
    const Action human = pending_.value_or(Action::noop());
    pending_.reset();
    const Player enemySide = opponent(options_.humanSide);
    const Action enemy = act(enemy_, game_, state_, enemySide, options_.enemyBudgets, enemyRng_);
    if (options_.humanSide == Player::one) {
        game_.advance(state_, human, enemy);
    } else {
        game_.advance(state_, enemy, human);
    }
    TickOutput out{state_.tick, state_frame(state_), std::nullopt};
    if (const auto result = game_.outcome(state_)) out.resultFrame = result_frame(state_, *result);
    return out;
}

bool Session::finished() const {
    std::lock_guard lock(mutex_);
    return game_.is_terminal(state_);
}

GameState Session::state() const {
    std::lock_guard lock(mutex_);
    return state_;
}

std::string Session::session_frame() const {
    std::lock_guard lock(mutex_);
    ordered_json frame;
    frame["type"] = "session";
    frame["sessionId"] = id_;
    frame["humanSide"] = index_of(options_.humanSide) + 1;
    frame["enemy"] = static_cast<int>(enemy_);
    frame["tickIntervalMs"] = options_.tickInterval.count();
    frame["lockstep"] = options_.lockstep;
    frame["maxTicks"] = options_.world.maxTicks;
    frame["tick"] = state_.tick;
    return frame.dump();
}

std::shared_ptr<Session> make_session(std::string id, const Genome& genome, SessionOptions options) {
    const SearchSpace space = default_search_space();
    validate(genome, space);
    return std::make_shared<Session>(std::move(id), decode(genome, space), std::move(options));
}

std::shared_ptr<Session> SessionRegistry::create(const Genome& genome, SessionOptions options) {
    std::string id;
    {
        std::lock_guard lock(mutex_);
        const std::uint64_t token = derive_seed((static_cast<std::uint64_t>(entropy_()) << 32) ^ entropy_(), ++counter_);
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(token));
        id = buf;
    }
    auto session = make_session(id, genome, std::move(options));
    std::lock_guard lock(mutex_);
    sessions_[id] = Entry{session, std::nullopt};
    return session;
}

std::shared_ptr<Session> SessionRegistry::find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second.session;
}

void SessionRegistry::park(const std::string& id, Clock::time_point now) {
    std::lock_guard lock(mutex_);
    if (const auto it = sessions_.find(id); it != sessions_.end()) it->second.parkedAt = now;
}

std::shared_ptr<Session> SessionRegistry::resume(const std::string& id, Clock::time_point now) {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end() || !it->second.parkedAt) return nullptr;
    if (now - *it->second.parkedAt > grace_) {
        sessions_.erase(it);
        return nullptr;
    }
    it->second.parkedAt.reset();
    return it->second.session;
}

void SessionRegistry::close(const std::string& id) {
    std::lock_guard lock(mutex_);
    sessions_.erase(id);
}

std::size_t SessionRegistry::expire(Clock::time_point now) {
    std::lock_guard lock(mutex_);
    return std::erase_if(sessions_, [&](const auto& kv) {
        return kv.second.parkedAt && now - *kv.second.parkedAt > grace_;
    });
}

std::size_t SessionRegistry::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

namespace {

template <typename T>
T required(const ordered_json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument(std::string("field '") + key + "' has the wrong type");
    }
}

template <typename T>
std::optional<T> optional_field(const ordered_json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return required<T>(j, key);
}

}  // namespace

ClientMessage parse_client_message(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
        throw std::invalid_argument("message is not valid JSON");
    }
    if (!j.is_object()) throw std::invalid_argument("message must be a JSON object");
    const auto type = required<std::string>(j, "type");

    if (type == "action") {
        const int turn = required<int>(j, "turn");
        if (turn < -1 || turn > 1) throw std::invalid_argument("turn must be -1, 0 or 1");
        Action a;
        a.turn = turn == 1 ? Turn::clockwise : turn == -1 ? Turn::anticlockwise : Turn::none;
        a.thrust = optional_field<bool>(j, "thrust").value_or(false);
        a.shoot = optional_field<bool>(j, "shoot").value_or(false);
        return ActionMessage{a};
    }
    if (type == "start") {
        StartMessage m;
        if (const auto levels = optional_field<std::vector<int>>(j, "genome")) m.genome = Genome{*levels};
        const int side = optional_field<int>(j, "humanSide").value_or(1);
        if (side != 1 && side != 2) throw std::invalid_argument("humanSide must be 1 or 2");
        m.humanSide = side == 1 ? Player::one : Player::two;
        if (const auto enemy = optional_field<int>(j, "enemy")) {
            if (*enemy < 0 || *enemy >= kAgentCount) throw std::invalid_argument("enemy must be in 0..5");
            m.enemy = agent_from_int(*enemy);
        }
        m.seed = optional_field<std::uint64_t>(j, "seed");
        m.tickIntervalMs = optional_field<int>(j, "tickIntervalMs");
        if (m.tickIntervalMs && *m.tickIntervalMs <= 0) throw std::invalid_argument("tickIntervalMs must be positive");
        m.maxTicks = optional_field<int>(j, "maxTicks");
        if (m.maxTicks && *m.maxTicks <= 0) throw std::invalid_argument("maxTicks must be positive");
        m.mctsIterations = optional_field<int>(j, "mctsIterations");
        if (m.mctsIterations && *m.mctsIterations < 1) throw std::invalid_argument("mctsIterations must be at least 1");
        m.lockstep = optional_field<bool>(j, "lockstep").value_or(false);
        return m;
    }
    if (type == "resume") return ResumeMessage{required<std::string>(j, "sessionId")};
    throw std::invalid_argument("unknown message type '" + type + "'");
}

std::string action_message(const Action& action) {
    ordered_json j;
    j["type"] = "action";
    j["turn"] = action.turn == Turn::clockwise ? 1 : action.turn == Turn::anticlockwise ? -1 : 0;
    j["thrust"] = action.thrust;
    j["shoot"] = action.shoot;
    return j.dump();
}

std::string error_frame(const std::string& message) {
    ordered_json j;
    j["type"] = "error";
    j["message"] = message;
    return j.dump();
}

}  // namespace sbe::playtest
