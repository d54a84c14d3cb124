// konnect: command-line front end.
//
//   konnect ask <question> [--data DIR] [--format json|text]
//   konnect serve [--data DIR] [--host H] [--port N] ...
//   konnect validate [--data DIR]
//   konnect generate --out DIR [--persons N] [--events N] [--triples N] [--seed S]
//
// ask exits 0 on success, 2 when the question cannot be answered and 1 when
// the dataset fails to load.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "konnect/http.hpp"
#include "konnect/konnect.hpp"

#ifndef KONNECT_DEFAULT_DATA_DIR
#define KONNECT_DEFAULT_DATA_DIR "data/fixture"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitLoadError = 1;
constexpr int kExitQueryError = 2;

std::shared_ptr<const konnect::TextGeneratorClient> make_generator(const konnect::ServiceConfig& config)
{
    if (config.generator_url) return std::make_shared<konnect::HttpTextGenerator>(*config.generator_url);
    return std::make_shared<konnect::NullTextGenerator>();
}

std::unique_ptr<konnect::Engine> load_engine(const konnect::ServiceConfig& config)
{
    try {
        return konnect::Engine::load(config, make_generator(config));
    } catch (const konnect::DatasetError& e) {
        std::cerr << "konnect: failed to load dataset from " << config.data_dir << ":\n" << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "konnect: failed to load dataset from " << config.data_dir << ": " << e.what() << '\n';
    }
    return nullptr;
}

int run_ask(const konnect::ServiceConfig& config, const std::string& question, const std::string& format)
{
    auto engine = load_engine(config);
    if (!engine) return kExitLoadError;

    konnect::Service service;
    service.set_engine(std::shared_ptr<const konnect::Engine>(std::move(engine)));
    const auto reply = service.query(konnect::dump(konnect::Json{{"question", question}}));
    const auto body = konnect::Json::parse(reply.body);

    if (reply.status != 200) {
        if (format == "json") std::cout << reply.body << '\n';
        else std::cerr << "konnect: " << body.value("message", std::string("query failed")) << '\n';
        if (body.value("error", std::string()) == "no_persons_found") {
            std::cerr << "Try one of:\n";
            for (const auto& q : konnect::sample_queries()) std::cerr << "  " << q << '\n';
        }
        return kExitQueryError;
    }
    if (format == "json") {
        std::cout << reply.body << '\n';
        return kExitOk;
    }
    std::cout << body["answer"]["text"].get<std::string>() << '\n';
    if (!body["shared_events"].empty()) {
        std::cout << "\nShared events:\n";
        for (const auto& s : body["shared_events"]) {
            std::cout << "  - " << s["label"].get<std::string>() << " (";
            bool first = true;
            for (const auto& p : s["participants"]) {
                for (const auto& person : body["persons"])
                    if (person["id"] == p) std::cout << (first ? "" : ", ") << person["label"].get<std::string>();
                first = false;
            }
            std::cout << ")\n";
        }
    }
    for (const auto& w : body["warnings"]) std::cout << "note: " << w.get<std::string>() << '\n';
    return kExitOk;
}

int run_serve(const konnect::ServiceConfig& config)
{
    httplib::Server server;
    konnect::Service service;
    konnect::mount(server, service, config.cors_origin);
    if (!server.bind_to_port(config.host, config.port)) {
        std::cerr << "konnect: cannot bind " << config.host << ':' << config.port << '\n';
        return kExitLoadError;
    }
    std::thread listener([&server] { server.listen_after_bind(); });
    std::cerr << "konnect: listening on " << config.host << ':' << config.port << ", loading " << config.data_dir
              << '\n';
    auto engine = load_engine(config);
    if (!engine) {
        server.stop();
        listener.join();
        return kExitLoadError;
    }
    std::cerr << "konnect: loaded " << engine->graph().entities().size() << " entities, "
              << engine->graph().triples().size() << " triples\n";
    service.set_engine(std::shared_ptr<const konnect::Engine>(std::move(engine)));
    listener.join();
    return kExitOk;
}

int run_validate(const konnect::ServiceConfig& config)
{
    try {
        const auto graph = konnect::load_dataset(konnect::DatasetManifest::from_directory(config.data_dir));
        std::cout << graph.entities().size() << " entities, " << graph.triples().size() << " triples, "
                  << graph.ontology().size() << " classes\n";
        for (const auto& w : konnect::validate_graph(graph))
            std::cout << "warning: " << konnect::to_string(w.kind) << ": " << w.message << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kExitLoadError;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Question answering over an event-centric knowledge graph"};
    app.require_subcommand(1);

    konnect::ServiceConfig config;
    config.data_dir = KONNECT_DEFAULT_DATA_DIR;
    try {
        config = konnect::apply_env_overrides(config);
    } catch (const std::exception& e) {
        std::cerr << "konnect: " << e.what() << '\n';
        return kExitLoadError;
    }
    std::string data_dir = config.data_dir.string();

    auto* ask = app.add_subcommand("ask", "Answer one question and print the result");
    std::string question;
    std::string format = "text";
    ask->add_option("question", question, "Natural-language question")->required();
    ask->add_option("--data", data_dir, "Dataset directory");
    ask->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

    auto* serve = app.add_subcommand("serve", "Run the HTTP JSON API");
    serve->add_option("--data", data_dir, "Dataset directory");
    serve->add_option("--host", config.host, "Listen address");
    serve->add_option("--port", config.port, "Listen port")->check(CLI::Range(1, 65535));
    serve->add_option("--relevance-cap", config.relevance_cap, "Events kept per person")->check(CLI::PositiveNumber);
    serve->add_option("--intent-threshold", config.intent_threshold, "Minimum keyword similarity");
    serve->add_option("--generator-url", config.generator_url, "External text generator endpoint");
    serve->add_flag("--clamp-to-lifespan", config.clamp_to_lifespan, "Clamp timeline events to birth..death");
    serve->add_option("--cors-origin", config.cors_origin, "Access-Control-Allow-Origin value");

    auto* validate = app.add_subcommand("validate", "Load a dataset and list data warnings");
    validate->add_option("--data", data_dir, "Dataset directory");

    auto* generate = app.add_subcommand("generate", "Write a random synthetic dataset");
    std::string out_dir;
    konnect::synthetic::GraphSpec spec;
    generate->add_option("--out", out_dir, "Output directory")->required();
    generate->add_option("--persons", spec.persons);
    generate->add_option("--events", spec.events);
    generate->add_option("--others", spec.others);
    generate->add_option("--triples", spec.triples);
    generate->add_option("--seed", spec.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitQueryError;
    }
    config.data_dir = data_dir;
    try {
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "konnect: " << e.what() << '\n';
        return kExitLoadError;
    }

    if (*ask) return run_ask(config, question, format);
    if (*serve) return run_serve(config);
    if (*validate) return run_validate(config);
    if (*generate) {
        konnect::write_dataset(konnect::synthetic::random_graph(spec), out_dir);
        std::cout << "wrote " << out_dir << '\n';
    }
    return kExitOk;
}
