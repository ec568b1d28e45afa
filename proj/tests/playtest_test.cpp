#include <gtest/gtest.h>

#include <boost/asio.hpp>
#include <boost/beast.hpp>
#include <fstream>
#include <nlohmann/json.hpp>
#include <thread>

#include "sbe/playtest/server.hpp"
#include "sbe/snapshot.hpp"

namespace sbe::playtest {
namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

Genome test_genome(AgentId enemy = AgentId::random) {
    Genome g{std::vector<int>(gene::kCount, 1)};
    g.levels[gene::kEnemyId] = static_cast<int>(enemy);
    return g;
}

SessionOptions fast_options(std::uint64_t seed, int maxTicks = 200) {
    SessionOptions o;
    o.seed = seed;
    o.world.maxTicks = maxTicks;
    o.enemyBudgets.mcts.iterations = 10;
    o.lockstep = true;
    return o;
}

Action scripted_action(int i) { return Action::from_index(static_cast<std::size_t>((i * 7) % 12)); }

TEST(Session, SameSeedAndInputsGiveSameFrames) {
    auto a = make_session("a", test_genome(), fast_options(3));
    auto b = make_session("b", test_genome(), fast_options(3));
    for (int i = 0; i < 100; ++i) {
        a->set_pending_action(scripted_action(i));
        b->set_pending_action(scripted_action(i));
        EXPECT_EQ(a->tick().stateFrame, b->tick().stateFrame);
    }
}

TEST(Session, WithoutInputTheHumanShipIdles) {
    auto s = make_session("s", test_genome(AgentId::do_nothing), fast_options(4));
    const Vec2 start = s->state().ships[0].position;
    for (int i = 0; i < 50; ++i) s->tick();
    EXPECT_EQ(s->state().ships[0].position.x, start.x);
    EXPECT_EQ(s->state().ships[0].position.y, start.y);
    EXPECT_EQ(s->state().ships[0].shotsFired, 0);
}

TEST(Session, PendingActionIsConsumedOnce) {
    auto s = make_session("s", test_genome(AgentId::do_nothing), fast_options(5));
    s->set_pending_action(Action{Turn::clockwise, false, false});
    s->set_pending_action(Action{Turn::none, false, true});  // latest wins
    s->tick();
    EXPECT_EQ(s->state().ships[0].heading, 0);
    EXPECT_EQ(s->state().ships[0].shotsFired, 1);
    s->tick();
    EXPECT_EQ(s->state().ships[0].shotsFired, 1);
}

TEST(Session, EnemyOverrideAndSides) {
    SessionOptions o = fast_options(6);
    o.enemyOverride = AgentId::ras;
    o.humanSide = Player::two;
    auto s = make_session("s", test_genome(AgentId::do_nothing), o);
    EXPECT_EQ(s->enemy(), AgentId::ras);
    for (int i = 0; i < 5; ++i) s->tick();
    EXPECT_GT(s->state().ships[0].shotsFired, 0);
    EXPECT_EQ(s->state().ships[1].shotsFired, 0);
    const json frame = json::parse(s->session_frame());
    EXPECT_EQ(frame["humanSide"], 2);
    EXPECT_EQ(frame["enemy"], static_cast<int>(AgentId::ras));
}

TEST(Session, RejectsInvalidGenome) {
    EXPECT_THROW(make_session("s", Genome{std::vector<int>(3, 0)}, fast_options(1)), InvalidGenome);
    Genome g = test_genome();
    g.levels[gene::kGridSize] = 99;
    EXPECT_THROW(make_session("s", g, fast_options(1)), InvalidGenome);
}

TEST(Session, TerminalTickCarriesResult) {
    auto s = make_session("s", test_genome(AgentId::do_nothing), fast_options(7, 2000));
    TickOutput out;
    int ticks = 0;
    while (!s->finished()) {
        out = s->tick();
        ++ticks;
        if (!s->finished()) {
            EXPECT_FALSE(out.resultFrame);
        }
    }
    EXPECT_EQ(ticks, 2000);
    ASSERT_TRUE(out.resultFrame);
    const json result = json::parse(*out.resultFrame);
    EXPECT_EQ(result["type"], "result");
    EXPECT_EQ(result["winner"], 0);
    EXPECT_EQ(result["tick"], 2000);
    EXPECT_THROW(s->tick(), TerminalStateError);
}

TEST(Registry, ParkResumeAndExpire) {
    SessionRegistry reg(std::chrono::milliseconds(100));
    const auto s = reg.create(test_genome(), fast_options(1));
    const auto other = reg.create(test_genome(), fast_options(1));
    EXPECT_NE(s->id(), other->id());
    EXPECT_EQ(reg.find(s->id()), s);
    EXPECT_EQ(reg.resume(s->id()), nullptr);  // still attached

    const auto t0 = SessionRegistry::Clock::now();
    reg.park(s->id(), t0);
    EXPECT_EQ(reg.resume(s->id(), t0 + std::chrono::milliseconds(50)), s);
    reg.park(s->id(), t0);
    EXPECT_EQ(reg.expire(t0 + std::chrono::milliseconds(50)), 0u);
    EXPECT_EQ(reg.expire(t0 + std::chrono::milliseconds(150)), 1u);
    EXPECT_EQ(reg.find(s->id()), nullptr);
    EXPECT_EQ(reg.resume("nope"), nullptr);
    EXPECT_EQ(reg.size(), 1u);
    reg.close(other->id());
    EXPECT_EQ(reg.size(), 0u);
}

TEST(Messages, ParsesActions) {
    const auto m = std::get<ActionMessage>(parse_client_message(R"({"type":"action","turn":-1,"thrust":true,"shoot":false})"));
    EXPECT_EQ(m.action.turn, Turn::anticlockwise);
    EXPECT_TRUE(m.action.thrust);
    EXPECT_FALSE(m.action.shoot);
    for (std::size_t i = 0; i < 12; ++i) {
        const Action a = Action::from_index(i);
        EXPECT_EQ(std::get<ActionMessage>(parse_client_message(action_message(a))).action.index(), i);
    }
}

TEST(Messages, ParsesStart) {
    const auto m = std::get<StartMessage>(parse_client_message(
        R"({"type":"start","genome":[0,1,2],"humanSide":2,"enemy":3,"seed":9,"lockstep":true,"maxTicks":50})"));
    ASSERT_TRUE(m.genome);
    EXPECT_EQ(m.genome->levels, (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(m.humanSide, Player::two);
    EXPECT_EQ(m.enemy, agent_from_int(3));
    EXPECT_EQ(m.seed, 9u);
    EXPECT_TRUE(m.lockstep);
    EXPECT_EQ(m.maxTicks, 50);
    const auto bare = std::get<StartMessage>(parse_client_message(R"({"type":"start"})"));
    EXPECT_FALSE(bare.genome);
    EXPECT_EQ(bare.humanSide, Player::one);
    EXPECT_EQ(std::get<ResumeMessage>(parse_client_message(R"({"type":"resume","sessionId":"ab"})")).sessionId, "ab");
}

TEST(Messages, RejectsMalformed) {
    for (const char* bad : {"not json", "[1,2]", R"({"turn":0})", R"({"type":"fly"})", R"({"type":"action"})",
                            R"({"type":"action","turn":2})", R"({"type":"action","turn":"left"})",
                            R"({"type":"start","humanSide":3})", R"({"type":"start","enemy":6})",
                            R"({"type":"start","tickIntervalMs":0})", R"({"type":"resume"})"}) {
        EXPECT_THROW(parse_client_message(bad), std::invalid_argument) << bad;
    }
    const json err = json::parse(error_frame("boom"));
    EXPECT_EQ(err["type"], "error");
    EXPECT_EQ(err["message"], "boom");
}

TEST(Frames, StateFrameFields) {
    const Game game(decode(test_genome(), default_search_space()), WorldConfig{});
    const GameState s = game.init(1);
    const json f = json::parse(state_frame(s));
    EXPECT_EQ(f["type"], "state");
    EXPECT_EQ(f["tick"], 0);
    ASSERT_EQ(f["ships"].size(), 2u);
    EXPECT_EQ(f["ships"][0]["x"], 160.0);
    EXPECT_EQ(f["ships"][1]["x"], 480.0);
    EXPECT_EQ(f["blackHoles"].size(), s.blackHoles.size());
    EXPECT_EQ(f["missiles"].size(), 0u);
    EXPECT_EQ(f["scores"], json::array({0, 0}));
    EXPECT_EQ(state_frame(s), state_frame(copy(s)));
}

struct TestServer {
    std::filesystem::path dir;
    std::unique_ptr<Server> server;

    TestServer() {
        dir = std::filesystem::temp_directory_path() / ("sbe_playtest_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir);
        ServerOptions o;
        o.port = 0;
        o.resultsDir = dir;
        o.enemyMctsIterations = 10;
        server = std::make_unique<Server>(o);
        server->start();
    }
    ~TestServer() {
        server->stop();
        std::filesystem::remove_all(dir);
    }
};

struct Client {
    net::io_context ioc;
    websocket::stream<tcp::socket> ws{ioc};

    explicit Client(std::uint16_t port) {
        tcp::resolver resolver(ioc);
        net::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
        ws.handshake("127.0.0.1", "/");
    }
    void send(const std::string& text) { ws.write(net::buffer(text)); }
    json receive() {
        beast::flat_buffer buffer;
        ws.read(buffer);
        return json::parse(beast::buffers_to_string(buffer.data()));
    }
};

std::pair<int, std::string> http_get(std::uint16_t port, const std::string& target) {
    net::io_context ioc;
    beast::tcp_stream stream(ioc);
    tcp::resolver resolver(ioc);
    stream.connect(resolver.resolve("127.0.0.1", std::to_string(port)));
    http::request<http::empty_body> req{http::verb::get, target, 11};
    req.set(http::field::host, "127.0.0.1");
    http::write(stream, req);
    beast::flat_buffer buffer;
    http::response<http::string_body> res;
    http::read(stream, buffer, res);
    return {res.result_int(), res.body()};
}

TEST(Server, LockstepRoundTripMatchesOfflineSession) {
    TestServer ts;
    Client client(ts.server->port());
    const Genome genome = test_genome(AgentId::mcts);
    json start{{"type", "start"}, {"genome", genome.levels}, {"seed", 11}, {"lockstep", true}, {"maxTicks", 200},
               {"mctsIterations", 10}};
    client.send(start.dump());
    const json session = client.receive();
    ASSERT_EQ(session["type"], "session") << session.dump();
    EXPECT_EQ(session["lockstep"], true);

    SessionOptions o = fast_options(11, 200);
    auto offline = make_session("offline", genome, o);
    int lastTick = 0;
    for (int i = 0; i < 200; ++i) {
        client.send(action_message(scripted_action(i)));
        const json frame = client.receive();
        ASSERT_EQ(frame["type"], "state");
        EXPECT_GT(frame["tick"].get<int>(), lastTick);
        lastTick = frame["tick"];
        offline->set_pending_action(scripted_action(i));
        const TickOutput expected = offline->tick();
        EXPECT_EQ(frame, json::parse(expected.stateFrame)) << "tick " << i;
        if (i == 199) {
            ASSERT_TRUE(expected.resultFrame);
            EXPECT_EQ(client.receive(), json::parse(*expected.resultFrame));
        }
    }
    client.send(action_message(Action::noop()));
    EXPECT_EQ(client.receive()["type"], "error");
}

TEST(Server, ErrorsKeepTheConnectionOpen) {
    TestServer ts;
    Client client(ts.server->port());
    client.send(R"({"type":"action","turn":0})");
    EXPECT_EQ(client.receive()["type"], "error");
    client.send("garbage");
    EXPECT_EQ(client.receive()["type"], "error");
    client.send(R"({"type":"start"})");  // no default genome configured
    EXPECT_EQ(client.receive()["type"], "error");
    client.send(json{{"type", "start"}, {"genome", test_genome().levels}, {"lockstep", true}}.dump());
    EXPECT_EQ(client.receive()["type"], "session");
}

TEST(Server, TimedSessionStreamsTicks) {
    TestServer ts;
    Client client(ts.server->port());
    client.send(json{{"type", "start"}, {"genome", test_genome(AgentId::do_nothing).levels}, {"tickIntervalMs", 5},
                     {"maxTicks", 20}}
                    .dump());
    EXPECT_EQ(client.receive()["type"], "session");
    for (int t = 1; t <= 20; ++t) EXPECT_EQ(client.receive()["tick"], t);
    EXPECT_EQ(client.receive()["type"], "result");
}

TEST(Server, DisconnectedSessionCanResume) {
    TestServer ts;
    std::string id;
    {
        Client client(ts.server->port());
        client.send(json{{"type", "start"}, {"genome", test_genome().levels}, {"lockstep", true}, {"seed", 2}}.dump());
        const json session = client.receive();
        id = session["sessionId"];
        client.send(action_message(Action::noop()));
        EXPECT_EQ(client.receive()["tick"], 1);
        client.ws.close(websocket::close_code::normal);
    }
    for (int i = 0; i < 200 && !ts.server->registry().resume(id); ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    // The probe above reattached it; park again so the protocol path is exercised.
    ts.server->registry().park(id);
    Client again(ts.server->port());
    again.send(json{{"type", "resume"}, {"sessionId", id}}.dump());
    const json session = again.receive();
    ASSERT_EQ(session["type"], "session") << session.dump();
    EXPECT_EQ(session["tick"], 1);
    again.send(action_message(Action::noop()));
    EXPECT_EQ(again.receive()["tick"], 2);
}

TEST(Server, GamesEndpointListsReport) {
    TestServer ts;
    EXPECT_EQ(http_get(ts.server->port(), "/games"), (std::pair<int, std::string>{200, "[]"}));
    {
        std::ofstream os(ts.dir / "report.csv");
        os << "algo,trial,mean,stderr,n,genome\n"
           << "ntbea,3,12.5,1,100,\"" << format_genome(test_genome()) << "\"\n";
    }
    const auto [status, body] = http_get(ts.server->port(), "/games");
    EXPECT_EQ(status, 200);
    const json games = json::parse(body);
    ASSERT_EQ(games.size(), 1u);
    EXPECT_EQ(games[0]["id"], "ntbea-3");
    EXPECT_EQ(games[0]["algo"], "ntbea");
    EXPECT_EQ(games[0]["meanFitness"], 12.5);
    EXPECT_EQ(games[0]["genome"].get<std::vector<int>>(), test_genome().levels);
    EXPECT_EQ(http_get(ts.server->port(), "/nothing").first, 404);
}

}  // namespace
}  // namespace sbe::playtest
