#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "hyres/phantom.hpp"
#include "hyres/psf.hpp"
#include "hyres/restore.hpp"

using namespace hyres;
namespace fs = std::filesystem;

namespace {

// small synthetic scenario: blur-then-downsample pairs from one phantom cube
PairSet blur_scenario(double blur_sigma, std::uint64_t seed, int channels = 2) {
    std::vector<ChannelImage> chans;
    std::vector<double> labels;
    for (int c = 0; c < channels; ++c) {
        ChannelImage hr = make_phantom(96, 96, seed * 100 + c, 1.0);
        if (blur_sigma > 0.0)
            hr = simulate_observation(hr, ObservationConfig{blur_sigma, 0.0, 0});
        chans.push_back(std::move(hr));
        labels.push_back(100.0 + c);
    }
    const SpectralCube cube(std::move(chans), 100.0, std::move(labels));
    DegradationConfig dcfg;
    dcfg.scale = 4;
    dcfg.noise_sigma = 0.0;
    dcfg.seed = seed;
    TrainingConfig tcfg;
    tcfg.patch_size = 24;
    tcfg.seed = seed;
    return make_training_pairs(cube, dcfg, tcfg);
}

} // namespace

TEST_CASE("zero epochs leaves the delta kernel untouched", "[restore]") {
    const PairSet pairs = blur_scenario(1.0, 1);
    TrainingConfig tcfg;
    tcfg.epochs = 0;
    tcfg.patch_size = 24;
    const RestorerModel model = train_restorer(pairs, tcfg);
    const RestorerModel delta = RestorerModel::delta(4, tcfg.kernel_size, 0);
    CHECK(model.kernel == delta.kernel);
    CHECK(model.trace.empty());
}

TEST_CASE("delta model reproduces the plain bicubic upsample", "[restore]") {
    const SpectralCube lr = make_phantom_cube(2, 12, 10, 3, 100.0, 1.0);
    const RestorerModel model = RestorerModel::delta(4, 9, 0);
    const SpectralCube out = apply_restorer(model, lr);
    REQUIRE(out.height() == 48);
    REQUIRE(out.width() == 40);
    CHECK_THAT(out.pixel_size_um(), Catch::Matchers::WithinAbs(25.0, 1e-12));
    CHECK(out.labels() == lr.labels());
    for (std::size_t c = 0; c < lr.channel_count(); ++c) {
        const ChannelImage up = bicubic_resize(lr.channel(c), 4, ResizeDirection::up);
        for (std::size_t k = 0; k < up.size(); ++k)
            REQUIRE_THAT(out.channel(c).data()[k],
                         Catch::Matchers::WithinAbs(std::clamp(up.data()[k], 0.0, 1.0), 1e-12));
    }
}

TEST_CASE("training is bit-deterministic per seed", "[restore]") {
    const PairSet pairs = blur_scenario(1.5, 2);
    TrainingConfig tcfg;
    tcfg.epochs = 3;
    tcfg.patch_size = 24;
    tcfg.seed = 2;
    const RestorerModel a = train_restorer(pairs, tcfg);
    const RestorerModel b = train_restorer(pairs, tcfg);
    CHECK(a.kernel == b.kernel);
    REQUIRE(a.trace.size() == 3);
    for (std::size_t e = 0; e < 3; ++e) {
        CHECK(a.trace[e].total == b.trace[e].total);
        CHECK(a.trace[e].frc == b.trace[e].frc);
        CHECK(a.trace[e].pixel == b.trace[e].pixel);
    }
}

TEST_CASE("loss decreases on the blur scenario", "[restore]") {
    const PairSet pairs = blur_scenario(1.5, 3);
    TrainingConfig tcfg;
    tcfg.epochs = 30;
    tcfg.patch_size = 24;
    tcfg.seed = 3;
    const RestorerModel model = train_restorer(pairs, tcfg);
    REQUIRE(model.trace.size() == 30);
    CHECK(model.trace.back().total <= model.trace.front().total);
    CHECK(model.final_loss == model.trace.back().total);
}

TEST_CASE("pixel-only training on identity pairs stays at the delta", "[restore]") {
    // HR is exactly the bicubic upsample of LR: nothing to learn
    PairSet pairs;
    pairs.scale = 2;
    pairs.lr_patch = 24;
    for (int c = 0; c < 2; ++c) {
        PatchPair p;
        p.lr = make_phantom(24, 24, 40 + c, 1.0);
        p.hr = bicubic_resize(p.lr, 2, ResizeDirection::up);
        pairs.pairs.push_back(std::move(p));
    }
    TrainingConfig tcfg;
    tcfg.epochs = 50;
    tcfg.patch_size = 24;
    tcfg.alpha_frc = 0.0;
    tcfg.beta_pixel = 1.0;
    const RestorerModel model = train_restorer(pairs, tcfg);
    const RestorerModel delta = RestorerModel::delta(2, tcfg.kernel_size, 0);
    for (std::size_t k = 0; k < model.kernel.size(); ++k)
        REQUIRE_THAT(model.kernel[k], Catch::Matchers::WithinAbs(delta.kernel[k], 1e-6));
}

TEST_CASE("adversarial pathway trains and is reported in the trace", "[restore]") {
    const PairSet pairs = blur_scenario(1.0, 5, 1);
    TrainingConfig tcfg;
    tcfg.epochs = 2;
    tcfg.patch_size = 24;
    tcfg.adv_weight = 0.05;
    const RestorerModel model = train_restorer(pairs, tcfg);
    REQUIRE(model.trace.size() == 2);
    CHECK(model.trace[0].adversarial > 0.0);
    // off by default
    TrainingConfig plain;
    plain.epochs = 1;
    plain.patch_size = 24;
    const RestorerModel base = train_restorer(pairs, plain);
    CHECK(base.trace[0].adversarial == 0.0);
}

TEST_CASE("empty pair set is rejected", "[restore]") {
    CHECK_THROWS_AS(train_restorer(PairSet{}, TrainingConfig{}), validation_error);
}

TEST_CASE("model file round-trips at full precision", "[restore]") {
    const fs::path p = fs::temp_directory_path() / "hyres_test_model.txt";
    RestorerModel model = RestorerModel::delta(4, 5, 123456789012345ULL);
    for (std::size_t k = 0; k < model.kernel.size(); ++k)
        model.kernel[k] = std::sin(static_cast<double>(k) * 0.7) * 0.3;
    model.final_loss = 0.012345678901234567;
    write_model(model, p.string());
    const RestorerModel back = read_model(p.string());
    CHECK(back.scale == 4);
    CHECK(back.kernel_size == 5);
    CHECK(back.seed == 123456789012345ULL);
    CHECK(back.final_loss == model.final_loss);
    CHECK(back.kernel == model.kernel);

    // byte-identical rewrite
    std::ifstream is(p, std::ios::binary);
    const std::string first((std::istreambuf_iterator<char>(is)),
                            std::istreambuf_iterator<char>());
    is.close();
    write_model(back, p.string());
    std::ifstream is2(p, std::ios::binary);
    const std::string second((std::istreambuf_iterator<char>(is2)),
                             std::istreambuf_iterator<char>());
    CHECK(first == second);
    CHECK(first.rfind("format = hyres-model/1\n", 0) == 0);
    fs::remove(p);
}

TEST_CASE("model reader rejects foreign and corrupt files", "[restore]") {
    const fs::path p = fs::temp_directory_path() / "hyres_test_badmodel.txt";
    {
        std::ofstream os(p);
        os << "format = something-else/3\n";
    }
    CHECK_THROWS_AS(read_model(p.string()), format_error);
    {
        std::ofstream os(p);
        os << "format = hyres-model/1\nscale = 4\nkernel_size = 3\nkernel = 1,0\n";
    }
    CHECK_THROWS_AS(read_model(p.string()), corruption_error);
    fs::remove(p);
    CHECK_THROWS_AS(read_model(p.string()), io_error);
}

TEST_CASE("loss trace csv format", "[restore]") {
    const fs::path p = fs::temp_directory_path() / "hyres_test_trace.csv";
    RestorerModel model = RestorerModel::delta(2, 3, 0);
    model.trace.push_back(EpochLoss{0.5, 0.4, 0.1, 0.0});
    model.trace.push_back(EpochLoss{0.25, 0.2, 0.05, 0.0});
    write_loss_trace_csv(model, p.string());
    std::ifstream is(p);
    std::string line;
    std::getline(is, line);
    CHECK(line == "epoch,loss_total,loss_frc,loss_pixel,loss_adv");
    std::getline(is, line);
    CHECK(line == "0,0.5,0.4,0.1,0");
    std::getline(is, line);
    CHECK(line == "1,0.25,0.2,0.05,0");
    fs::remove(p);
}
