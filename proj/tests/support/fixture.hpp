#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>

#include "konnect/konnect.hpp"

namespace konnect::test {

inline std::filesystem::path fixture_dir() { return KONNECT_FIXTURE_DIR; }

inline const KnowledgeGraph& fixture_graph()
{
    static const KnowledgeGraph g = load_dataset(DatasetManifest::from_directory(fixture_dir()));
    return g;
}

inline const StopwordSet& fixture_stopwords()
{
    static const StopwordSet s = load_stopwords(fixture_dir() / "stopwords.txt");
    return s;
}

inline const EmbeddingTable& fixture_embeddings()
{
    static const EmbeddingTable t = EmbeddingTable::load(fixture_dir() / "embeddings.tsv");
    return t;
}

inline const NameIndex& fixture_index()
{
    static const NameIndex index(fixture_graph());
    return index;
}

inline std::shared_ptr<const Engine> fixture_engine()
{
    static const std::shared_ptr<const Engine> engine = [] {
        ServiceConfig config;
        config.data_dir = fixture_dir();
        return std::shared_ptr<const Engine>(Engine::load(config));
    }();
    return engine;
}

inline EntityId id(const char* s) { return EntityId(s); }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir()
    {
        static std::atomic<unsigned> counter{0};
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("konnect-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

    void write(const std::string& name, const std::string& content) const
    {
        std::ofstream(path_ / name, std::ios::binary) << content;
    }

private:
    std::filesystem::path path_;
};

}  // namespace konnect::test
