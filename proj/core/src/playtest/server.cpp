#include "sbe/playtest/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast.hpp>
#include <deque>
#include <fstream>
#include <nlohmann/json.hpp>
#include <thread>

#include "sbe/csv.hpp"

namespace sbe::playtest {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::ordered_json;

std::vector<GameListing> list_games(const std::filesystem::path& resultsDir) {
    std::vector<GameListing> games;
    std::ifstream in(resultsDir / "report.csv");
    if (!in) return games;
    std::string line;
    if (!std::getline(in, line)) return games;
    const auto header = split_csv_line(line);
    auto column = [&](std::string_view name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw std::runtime_error("report.csv lacks column " + std::string(name));
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t algo = column("algo");
    const std::size_t trial = column("trial");
    const std::size_t mean = column("mean");
    const std::size_t genome = column("genome");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size()) throw std::runtime_error("malformed row in report.csv");
        games.push_back({f[algo] + "-" + f[trial], f[algo], parse_number(f[mean]), parse_genome(f[genome])});
    }
    return games;
}

std::string games_json(const std::vector<GameListing>& games) {
    ordered_json out = ordered_json::array();
    for (const auto& g : games) {
        out.push_back({{"id", g.id}, {"algo", g.algo}, {"meanFitness", g.meanFitness}, {"genome", g.genome.levels}});
    }
    return out.dump();
}

struct Server::Impl {
    ServerOptions options;
    net::io_context ioc{1};
    tcp::acceptor acceptor{ioc};
    SessionRegistry registry;
    std::thread thread;

    explicit Impl(ServerOptions o) : options(std::move(o)), registry(options.grace) {
        const tcp::endpoint endpoint{net::ip::make_address(options.address), options.port};
        acceptor.open(endpoint.protocol());
        acceptor.set_option(net::socket_base::reuse_address(true));
        acceptor.bind(endpoint);
        acceptor.listen(net::socket_base::max_listen_connections);
    }

    void accept();
};

namespace {

class WsConnection : public std::enable_shared_from_this<WsConnection> {
public:
    WsConnection(tcp::socket socket, Server::Impl& server)
        : ws_(std::move(socket)), timer_(ws_.get_executor()), server_(server) {}

    void accept(http::request<http::string_body> req) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
            if (!ec) self->read();
        });
    }

private:
    void read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->on_closed();
                return;
            }
            std::string text = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            self->handle(text);
            self->read();
        });
    }

    void handle(const std::string& text) {
        try {
            ClientMessage msg = parse_client_message(text);
            std::visit([this](auto& m) { on_message(m); }, msg);
        } catch (const std::exception& e) {
            send(error_frame(e.what()));
        }
    }

    void on_message(StartMessage& m) {
        if (session_) throw std::invalid_argument("session already started");
        server_.registry.expire();
        std::optional<Genome> genome = m.genome ? m.genome : server_.options.defaultGenome;
        if (!genome) throw std::invalid_argument("start message needs a genome");
        SessionOptions opts;
        opts.humanSide = m.humanSide;
        opts.enemyOverride = m.enemy;
        opts.enemyBudgets.mcts.iterations = m.mctsIterations.value_or(server_.options.enemyMctsIterations);
        opts.lockstep = m.lockstep;
        if (m.tickIntervalMs) opts.tickInterval = std::chrono::milliseconds(*m.tickIntervalMs);
        if (m.maxTicks) opts.world.maxTicks = *m.maxTicks;
        opts.seed = m.seed.value_or(std::random_device{}());
        session_ = server_.registry.create(*genome, opts);
        send(session_->session_frame());
        if (!session_->options().lockstep) schedule();
    }

    void on_message(ActionMessage& m) {
        if (!session_) throw std::invalid_argument("no session; send start first");
        if (session_->finished()) throw std::invalid_argument("game is over");
        session_->set_pending_action(m.action);
        if (session_->options().lockstep) advance();
    }

    void on_message(ResumeMessage& m) {
        if (session_) throw std::invalid_argument("session already attached");
        session_ = server_.registry.resume(m.sessionId);
        if (!session_) throw std::invalid_argument("no resumable session " + m.sessionId);
        send(session_->session_frame());
        if (!session_->options().lockstep && !session_->finished()) schedule();
    }

    void advance() {
        TickOutput out = session_->tick();
        send(std::move(out.stateFrame));
        if (out.resultFrame) {
            send(std::move(*out.resultFrame));
            server_.registry.close(session_->id());
        }
    }

    void schedule() {
        nextTick_ = std::chrono::steady_clock::now() + session_->options().tickInterval;
        arm();
    }

    void arm() {
        timer_.expires_at(nextTick_);
        timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
            if (ec || self->closed_ || !self->session_ || self->session_->finished()) return;
            self->advance();
            if (self->session_->finished()) return;
            self->nextTick_ += self->session_->options().tickInterval;
            self->arm();
        });
    }

    void on_closed() {
        closed_ = true;
        timer_.cancel();
        if (session_ && !session_->finished()) server_.registry.park(session_->id());
    }

    void send(std::string frame) {
        if (closed_) return;
        outbox_.push_back(std::move(frame));
        if (!writing_) write_next();
    }

    void write_next() {
        writing_ = true;
        ws_.text(true);
        ws_.async_write(net::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            self->outbox_.pop_front();
            if (ec || self->outbox_.empty()) {
                self->writing_ = false;
                if (ec) self->outbox_.clear();
                return;
            }
            self->write_next();
        });
    }

    websocket::stream<beast::tcp_stream> ws_;
    net::steady_timer timer_;
    Server::Impl& server_;
    beast::flat_buffer buffer_;
    std::deque<std::string> outbox_;
    bool writing_ = false;
    bool closed_ = false;
    std::shared_ptr<Session> session_;
    std::chrono::steady_clock::time_point nextTick_;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
public:
    HttpConnection(tcp::socket socket, Server::Impl& server) : stream_(std::move(socket)), server_(server) {}

    void run() {
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, request_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (!ec) self->respond();
        });
    }

private:
    void respond() {
        if (websocket::is_upgrade(request_)) {
            stream_.expires_never();
            std::make_shared<WsConnection>(stream_.release_socket(), server_)->accept(std::move(request_));
            return;
        }
        auto res = std::make_shared<http::response<http::string_body>>();
        res->version(request_.version());
        res->keep_alive(false);
        res->set(http::field::access_control_allow_origin, "*");
        if (request_.method() == http::verb::get && request_.target() == "/games") {
            try {
                res->body() = games_json(list_games(server_.options.resultsDir));
                res->result(http::status::ok);
                res->set(http::field::content_type, "application/json");
            } catch (const std::exception& e) {
                res->result(http::status::internal_server_error);
                res->set(http::field::content_type, "application/json");
                res->body() = error_frame(e.what());
            }
        } else {
            res->result(http::status::not_found);
            res->set(http::field::content_type, "text/plain");
            res->body() = "not found\n";
        }
        res->prepare_payload();
        http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
            beast::error_code ignored;
            self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        });
    }

    beast::tcp_stream stream_;
    Server::Impl& server_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> request_;
};

}  // namespace

void Server::Impl::accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
        if (!ec) std::make_shared<HttpConnection>(std::move(socket), *this)->run();
        if (acceptor.is_open()) accept();
    });
}

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) { impl_->accept(); }

Server::~Server() { stop(); }

std::uint16_t Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::start() {
    impl_->thread = std::thread([this] { impl_->ioc.run(); });
}

void Server::run() { impl_->ioc.run(); }

void Server::stop() {
    impl_->ioc.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

SessionRegistry& Server::registry() { return impl_->registry; }

}  // namespace sbe::playtest
