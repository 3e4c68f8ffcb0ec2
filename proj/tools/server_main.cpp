// Session server: HTTP JSON API plus a WebSocket push channel per player.

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "seabattle/http_server.hpp"

using namespace seabattle::service;

int main(int argc, char** argv) {
    CLI::App app{"Battleships arbiter server"};
    std::string listen = "127.0.0.1:8080";
    std::string data_dir = "./data";
    unsigned tick_ms = 1000;
    unsigned threads = 2;
    bool test_mode = false;

    app.add_option("--listen", listen, "Listen address host:port")->envname("SEABATTLE_LISTEN");
    app.add_option("--data-dir", data_dir, "Directory for per-game event logs")->envname("SEABATTLE_DATA_DIR");
    app.add_option("--tick-ms", tick_ms, "Wall-clock milliseconds per logical tick (0 disables the scheduler)")
        ->envname("SEABATTLE_TICK_MS");
    app.add_option("--threads", threads, "I/O threads")->check(CLI::PositiveNumber);
    app.add_flag("--test-mode", test_mode, "Enable POST /games/{id}/clock for manual clock control")
        ->envname("SEABATTLE_TEST_MODE");
    CLI11_PARSE(app, argc, argv);

    const auto colon = listen.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "error: --listen expects host:port\n";
        return 2;
    }

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);  // inherited by every worker thread

    try {
        GameService service({std::filesystem::path(data_dir), nullptr});
        ServerOptions options;
        options.address = listen.substr(0, colon);
        options.port = static_cast<unsigned short>(std::stoul(listen.substr(colon + 1)));
        options.threads = threads;
        options.test_mode = test_mode;
        HttpServer server(service, options);
        server.start();
        std::optional<TickScheduler> scheduler;
        if (tick_ms > 0) scheduler.emplace(service, std::chrono::milliseconds(tick_ms));

        std::cout << "listening on " << options.address << ":" << server.port() << " ("
                  << service.game_ids().size() << " games restored from " << data_dir << ")" << std::endl;

        int sig = 0;
        sigwait(&signals, &sig);
        std::cout << "shutting down" << std::endl;
        scheduler.reset();
        server.stop();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
