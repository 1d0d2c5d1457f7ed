#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "hyres/cube_io.hpp"
#include "hyres/phantom.hpp"

using namespace hyres;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(HYRES_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

struct Workdir {
    fs::path dir;
    Workdir() : dir(fs::temp_directory_path() / "hyres_cli_test") {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Workdir() { fs::remove_all(dir); }
    std::string p(const std::string& name) const { return (dir / name).string(); }
};

} // namespace

TEST_CASE("usage errors exit 2, missing input exits 1, happy path exits 0", "[cli]") {
    Workdir wd;
    CHECK(run("frc --bogus") == 2);
    CHECK(run("") == 2); // a subcommand is required
    CHECK(run("info --in " + wd.p("missing.hyrs")) == 1);

    write_cube(make_phantom_cube(2, 48, 48, 3, 100.0, 1.5), wd.p("cube.hyrs"));
    CHECK(run("info --in " + wd.p("cube.hyrs")) == 0);
    CHECK(run("frc --single --in " + wd.p("cube.hyrs") + " --channel 0 --out " +
              wd.p("curve.csv")) == 0);
    CHECK(fs::exists(wd.p("curve.csv")));
    CHECK(fs::exists(wd.p("curve.csv") + ".svg"));
    CHECK(fs::exists(wd.p("curve.csv") + ".manifest.json"));
    const std::string csv = slurp(wd.p("curve.csv"));
    CHECK(csv.find("# resolution_um=") != std::string::npos);
    CHECK(csv.find("ring,freq_cycles_per_px,frc,n_samples") != std::string::npos);
}

TEST_CASE("import round-trips through pgm channels", "[cli]") {
    Workdir wd;
    const SpectralCube cube = make_phantom_cube(2, 16, 16, 5, 50.0, 1.0);
    export_channel(cube, 0, wd.p("ch0.pgm"));
    export_channel(cube, 1, wd.p("ch1.pgm"));
    {
        std::ofstream os(wd.p("labels.txt"));
        os << "100.5\n200.25\n";
    }
    REQUIRE(run("import --in " + wd.p("ch0.pgm") + " --in " + wd.p("ch1.pgm") +
                " --labels " + wd.p("labels.txt") + " --pixel-size 50 --out " +
                wd.p("imported.hyrs")) == 0);
    const SpectralCube back = read_cube(wd.p("imported.hyrs"));
    CHECK(back.channel_count() == 2);
    CHECK(back.pixel_size_um() == 50.0);
    CHECK(back.labels() == std::vector<double>{100.5, 200.25});
}

TEST_CASE("degrade, train and restore chain with byte-reproducible outputs", "[cli]") {
    Workdir wd;
    write_cube(make_phantom_cube(2, 96, 96, 7, 100.0, 1.5), wd.p("hr.hyrs"));

    const std::string degrade_args = "degrade --in " + wd.p("hr.hyrs") +
                                     " --scale 4 --noise-sigma 0.01 --seed 5 --out ";
    REQUIRE(run(degrade_args + wd.p("lr1.hyrs")) == 0);
    REQUIRE(run(degrade_args + wd.p("lr2.hyrs")) == 0);
    CHECK(slurp(wd.p("lr1.hyrs")) == slurp(wd.p("lr2.hyrs")));
    const SpectralCube lr = read_cube(wd.p("lr1.hyrs"));
    CHECK(lr.height() == 24);
    CHECK(lr.pixel_size_um() == 400.0);

    const std::string train_args = "train --in " + wd.p("hr.hyrs") +
                                   " --scale 4 --noise-sigma 0 --epochs 2 --patch 24 --seed 5 "
                                   "--out ";
    REQUIRE(run(train_args + wd.p("m1.txt")) == 0);
    REQUIRE(run(train_args + wd.p("m2.txt")) == 0);
    CHECK(slurp(wd.p("m1.txt")) == slurp(wd.p("m2.txt")));
    CHECK(fs::exists(wd.p("m1.txt") + ".trace.csv"));

    REQUIRE(run("restore --in " + wd.p("lr1.hyrs") + " --model " + wd.p("m1.txt") +
                " --out " + wd.p("restored1.hyrs")) == 0);
    REQUIRE(run("restore --in " + wd.p("lr1.hyrs") + " --model " + wd.p("m1.txt") +
                " --out " + wd.p("restored2.hyrs")) == 0);
    CHECK(slurp(wd.p("restored1.hyrs")) == slurp(wd.p("restored2.hyrs")));
    const SpectralCube restored = read_cube(wd.p("restored1.hyrs"));
    CHECK(restored.height() == 96);
    CHECK(restored.pixel_size_um() == 100.0);
}

TEST_CASE("iqa and diffpsf emit their csv contracts", "[cli]") {
    Workdir wd;
    write_cube(make_phantom_cube(2, 64, 64, 9, 100.0, 1.5), wd.p("a.hyrs"));
    write_cube(make_phantom_cube(2, 64, 64, 10, 100.0, 2.5), wd.p("b.hyrs"));

    REQUIRE(run("iqa --in " + wd.p("a.hyrs") + " --ref " + wd.p("a.hyrs") + " --out " +
                wd.p("iqa.csv")) == 0);
    const std::string iqa = slurp(wd.p("iqa.csv"));
    CHECK(iqa.find("channel,mz,brisque,piqe,crisque,psnr_db,ssim") != std::string::npos);
    CHECK(iqa.find("# median_crisque=") != std::string::npos);

    REQUIRE(run("iqa --in " + wd.p("a.hyrs") + " --out " + wd.p("iqa_noref.csv")) == 0);
    const std::string noref = slurp(wd.p("iqa_noref.csv"));
    CHECK(noref.find(",,\n") != std::string::npos); // empty reference cells

    REQUIRE(run("diffpsf --in " + wd.p("a.hyrs") + " --ref " + wd.p("b.hyrs") +
                " --channel 1 --out " + wd.p("psf.csv")) == 0);
    const std::string psf = slurp(wd.p("psf.csv"));
    CHECK(psf.find("rho_px,mean_value,n_samples") != std::string::npos);
    CHECK(psf.find("# A=") != std::string::npos);
    CHECK(psf.find("fwhm_px=") != std::string::npos);
}

TEST_CASE("stats emits metric rows from a two-column csv", "[cli]") {
    Workdir wd;
    {
        std::ofstream os(wd.p("data.csv"));
        os << "score,label\n0.9,1\n0.8,1\n0.2,0\n0.1,0\n";
    }
    REQUIRE(run("stats --in " + wd.p("data.csv") + " --out " + wd.p("stats.csv")) == 0);
    const std::string out = slurp(wd.p("stats.csv"));
    CHECK(out.find("metric,value,n") != std::string::npos);
    CHECK(out.find("spearman,") != std::string::npos);
    CHECK(out.find("roc_auc,1,4") != std::string::npos);
}
