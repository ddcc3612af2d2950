#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "bigmodel/errors.hpp"
#include "bigmodel/io.hpp"
#include "bigmodel/pipeline.hpp"

namespace bigmodel {
namespace {

namespace fs = std::filesystem;

const fs::path kToy = BIGMODEL_TOY_DIR;

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("bigmodel_pipeline_" + name);
    fs::remove_all(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(BIGMODEL_CLI) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::vector<std::string_view> kAllArtifacts = {
    artifact::parcels,          artifact::density,
    artifact::identified,       artifact::identify_log,
    artifact::simulated,        artifact::simulation_summary,
    artifact::exposure_subdistricts, artifact::exposure_monthly,
    artifact::exposure_cities};

TEST(Pipeline, AllStagesProduceArtifactsAndManifests) {
    const fs::path out = fresh_dir("all");
    RunOptions options;
    options.out_dir = out;
    run_pipeline(PipelineConfig::load(kToy / "config.json"), Stage::all, options);
    for (const auto name : kAllArtifacts) {
        EXPECT_TRUE(fs::exists(out / name)) << name;
    }
    for (const auto stage : {"parcels", "density", "identify", "simulate", "exposure"}) {
        const fs::path manifest = out / (std::string(stage) + ".manifest.json");
        ASSERT_TRUE(fs::exists(manifest)) << stage;
        const auto doc = io::json::parse(io::read_text(manifest));
        EXPECT_TRUE(doc.contains("inputs"));
        EXPECT_TRUE(doc.contains("parameters"));
        EXPECT_TRUE(doc.contains("artifacts"));
        for (const auto& [name, sum] : doc["artifacts"].items()) {
            EXPECT_EQ(sum.get<std::string>(), io::file_checksum(out / name)) << name;
        }
    }
    const auto sim = io::json::parse(io::read_text(out / "simulate.manifest.json"));
    EXPECT_EQ(sim["parameters"]["simulate"]["seed"], 42);

    // Parcels keep their ids and geometry through every later stage.
    const auto parcels = io::parcels_from_features(io::load_geojson(out / artifact::parcels));
    const auto simulated = io::parcels_from_features(io::load_geojson(out / artifact::simulated));
    ASSERT_EQ(parcels.size(), simulated.size());
    std::size_t urban = 0;
    for (std::size_t i = 0; i < parcels.size(); ++i) {
        EXPECT_EQ(parcels[i].id, simulated[i].id);
        EXPECT_TRUE(bg::equals(parcels[i].geometry, simulated[i].geometry));
        urban += simulated[i].state == LandState::urban;
    }
    EXPECT_GT(urban, 0u);
    fs::remove_all(out);
}

TEST(Pipeline, RerunIsByteIdentical) {
    const fs::path a = fresh_dir("rerun_a"), b = fresh_dir("rerun_b");
    const PipelineConfig config = PipelineConfig::load(kToy / "config.json");
    RunOptions options;
    options.out_dir = a;
    run_pipeline(config, Stage::all, options);
    options.out_dir = b;
    options.jobs = 3;
    run_pipeline(config, Stage::all, options);
    for (const auto name : kAllArtifacts) {
        EXPECT_EQ(io::file_checksum(a / name), io::file_checksum(b / name)) << name;
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Pipeline, StagesDoNotModifyInputs) {
    const fs::path out = fresh_dir("inputs");
    std::map<fs::path, std::string> before;
    for (const auto& entry : fs::directory_iterator(kToy)) before[entry.path()] = io::file_checksum(entry.path());
    RunOptions options;
    options.out_dir = out;
    run_pipeline(PipelineConfig::load(kToy / "config.json"), Stage::all, options);
    run_pipeline(PipelineConfig::load(kToy / "config.json"), Stage::calibrate, options);
    for (const auto& [path, sum] : before) EXPECT_EQ(io::file_checksum(path), sum) << path;
    fs::remove_all(out);
}

TEST(Pipeline, MissingPriorStageIsDependencyError) {
    const fs::path out = fresh_dir("dependency");
    RunOptions options;
    options.out_dir = out;
    const PipelineConfig config = PipelineConfig::load(kToy / "config.json");
    try {
        run_pipeline(config, Stage::simulate, options);
        FAIL() << "expected DependencyError";
    } catch (const DependencyError& e) {
        EXPECT_NE(std::string(e.what()).find("identify"), std::string::npos) << e.what();
    }
    EXPECT_THROW(run_pipeline(config, Stage::density, options), DependencyError);
    fs::remove_all(out);
}

TEST(Pipeline, CalibrateWritesWeights) {
    const fs::path out = fresh_dir("calibrate");
    RunOptions options;
    options.out_dir = out;
    const PipelineConfig config = PipelineConfig::load(kToy / "config.json");
    for (const Stage s : {Stage::parcels, Stage::density, Stage::identify, Stage::calibrate}) {
        run_pipeline(config, s, options);
    }
    const auto doc = io::json::parse(io::read_text(out / artifact::weights));
    EXPECT_NO_THROW(io::weights_from_json(doc));
    EXPECT_GT(doc["samples"].get<int>(), 0);
    fs::remove_all(out);
}

TEST(PipelineConfig, RejectsMissingFileAndBadParameters) {
    auto doc = io::json::parse(io::read_text(kToy / "config.json"));
    doc["inputs"]["pois"] = "nowhere.csv";
    EXPECT_THROW(PipelineConfig::from_json(doc, kToy), InputError);

    doc = io::json::parse(io::read_text(kToy / "config.json"));
    doc["simulate"]["gamma"] = 1.5;
    EXPECT_THROW(PipelineConfig::from_json(doc, kToy).validate(Stage::simulate), InputError);

    doc = io::json::parse(io::read_text(kToy / "config.json"));
    doc["exposure"]["unit"] = "ppm";
    EXPECT_THROW(PipelineConfig::from_json(doc, kToy).validate(Stage::exposure), InputError);
}

TEST(Cli, ExitCodes) {
    const fs::path out = fresh_dir("cli");
    const std::string config = "--config " + (kToy / "config.json").string();
    const std::string to = " --out " + out.string();
    EXPECT_EQ(run_cli("simulate " + config + to), 3);
    EXPECT_EQ(run_cli("parcels --config /nonexistent/config.json" + to), 2);
    EXPECT_EQ(run_cli("parcels " + config + to + " --jobs 0"), 2);
    EXPECT_EQ(run_cli("simulate " + config + to + " --scenario growth"), 2);
    EXPECT_EQ(run_cli("frobnicate " + config), 2);
    EXPECT_EQ(run_cli("all " + config + to + " --seed 7 --scenario uao --jobs 2"), 0);
    const auto sim = io::json::parse(io::read_text(out / "simulate.manifest.json"));
    EXPECT_EQ(sim["parameters"]["simulate"]["seed"], 7);
    EXPECT_EQ(sim["parameters"]["simulate"]["scenario"]["scenario"], "uao");
    fs::remove_all(out);
}

}  // namespace
}  // namespace bigmodel
