// hyres: hyperspectral restoration and evaluation toolbox.
//
// Subcommands: import, info, degrade, train, restore, frc, diffpsf, iqa,
// stats, report. All numeric output goes to files; stdout carries a short
// human summary. Every run writes a <out>.manifest.json describing the
// resolved parameters, so runs can be replayed bit-exactly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyres/brisque_default.hpp"
#include "hyres/cube_io.hpp"
#include "hyres/degrade.hpp"
#include "hyres/frc.hpp"
#include "hyres/iqa.hpp"
#include "hyres/metrics.hpp"
#include "hyres/phantom.hpp"
#include "hyres/psf.hpp"
#include "hyres/restore.hpp"
#include "hyres/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "hyres 1.0.0";

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void write_manifest(const std::string& subcommand, const json& params, std::uint64_t seed,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double duration_s,
                    const std::string& path) {
    json m;
    m["subcommand"] = subcommand;
    m["parameters"] = params;
    m["seed"] = seed;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    m["tool_version"] = kToolVersion;
    m["duration_seconds"] = duration_s;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw hyres::io_error("cannot write manifest '" + path + "'");
    os << m.dump(2) << "\n";
}

void require_exists(const std::string& path) {
    if (!fs::exists(path))
        throw hyres::io_error("input file does not exist: '" + path + "'");
}

// degrade pipeline shared by `degrade` and `report`: filter, crop, per-channel
// bicubic down + seeded noise; mirrors the pair-construction path
hyres::SpectralCube degrade_cube(const hyres::SpectralCube& hr,
                                 const hyres::DegradationConfig& dcfg) {
    dcfg.validate();
    const hyres::FilterResult filtered = hyres::filter_low_snr(hr, dcfg.snr_tau);
    const hyres::SpectralCube cropped = hyres::crop_to_multiple(filtered.cube, dcfg.scale);
    const std::size_t n = cropped.channel_count();
    const std::size_t n_noisy = static_cast<std::size_t>(
        std::lround(dcfg.noisy_fraction * static_cast<double>(n)));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = hyres::rng::below(dcfg.seed, 0x5e1ec7, i, i);
        std::swap(order[i - 1], order[j]);
    }
    std::vector<bool> noisy_bg(n, false);
    for (std::size_t i = 0; i < n_noisy; ++i) noisy_bg[order[i]] = true;
    std::vector<hyres::ChannelImage> channels;
    for (std::size_t c = 0; c < n; ++c) {
        hyres::ChannelImage lr =
            hyres::bicubic_resize(cropped.channel(c), dcfg.scale, hyres::ResizeDirection::down);
        if (dcfg.noise_sigma > 0.0)
            lr = hyres::add_gaussian_noise(lr, dcfg.noise_sigma, dcfg.seed + 0x9000 + c,
                                           noisy_bg[c]);
        channels.push_back(std::move(lr));
    }
    return hyres::SpectralCube(std::move(channels), cropped.pixel_size_um() * dcfg.scale,
                               cropped.labels());
}

void write_frc_csv(const hyres::FrcCurve& curve, const hyres::ResolutionEstimate& est,
                   const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw hyres::io_error("cannot write '" + path + "'");
    os << "# resolution_um=" << fmt(est.resolution_um) << "\n";
    os << "# threshold=" << fmt(est.threshold) << "\n";
    os << "# nyquist_limited=" << (est.nyquist_limited ? "true" : "false") << "\n";
    os << "ring,freq_cycles_per_px,frc,n_samples\n";
    for (std::size_t r = 0; r < curve.ring_count(); ++r) {
        if (!curve.defined[r]) continue;
        os << (r + 1) << "," << fmt(curve.frequencies[r]) << "," << fmt(curve.values[r]) << ","
           << curve.samples[r] << "\n";
    }
}

void write_frc_svg(const hyres::FrcCurve& curve, const std::string& path) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t r = 0; r < curve.ring_count(); ++r)
        if (curve.defined[r]) pts.emplace_back(curve.frequencies[r], curve.values[r]);
    if (pts.size() >= 2)
        hyres::emit_curve_svg(pts, "spatial frequency (cycles/px)", "FRC", path);
}

void write_diffpsf_csv(const hyres::DifferencePsf& psf, const hyres::GaussianFit& fit,
                       const std::string& path) {
    const hyres::RadialProfile prof = hyres::radial_profile(psf);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw hyres::io_error("cannot write '" + path + "'");
    os << "# A=" << fmt(fit.amplitude) << " sigma_px=" << fmt(fit.sigma) << " c="
       << fmt(fit.offset) << " fwhm_px=" << fmt(fit.fwhm) << " residual_rms="
       << fmt(fit.residual_rms) << "\n";
    os << "rho_px,mean_value,n_samples\n";
    for (std::size_t r = 0; r < prof.rho.size(); ++r)
        os << fmt(prof.rho[r]) << "," << fmt(prof.mean[r]) << "," << prof.n[r] << "\n";
}

void write_iqa_csv(const hyres::IqaReport& rep, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw hyres::io_error("cannot write '" + path + "'");
    os << "# median_brisque=" << fmt(rep.median_brisque) << "\n";
    os << "# median_piqe=" << fmt(rep.median_piqe) << "\n";
    os << "# median_crisque=" << fmt(rep.median_crisque) << "\n";
    os << "channel,mz,brisque,piqe,crisque,psnr_db,ssim\n";
    for (const hyres::IqaRow& r : rep.rows) {
        os << r.channel << "," << fmt(r.mz) << "," << fmt(r.brisque) << "," << fmt(r.piqe) << ","
           << fmt(r.crisque) << ",";
        if (r.has_reference) os << fmt(r.psnr_db) << "," << fmt(r.ssim);
        else os << ",";
        os << "\n";
    }
}

std::vector<double> read_label_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw hyres::io_error("cannot read label file '" + path + "'");
    std::vector<double> labels;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        labels.push_back(std::stod(line));
    }
    return labels;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperspectral restoration and evaluation toolbox"};
    app.require_subcommand(1);

    // shared option storage; each subcommand registers the flags it uses
    std::vector<std::string> in_paths;
    std::string out_path, ref_path, model_path, labels_path;
    int scale = 4, epochs = 100, batch = 8, patch = 50, channel = 0;
    double noise_sigma = 0.02, noisy_fraction = 0.0, snr_tau = 1e-6;
    double threshold = hyres::kFrcThreshold, adv_weight = 0.0, pixel_size = 100.0;
    std::uint64_t seed = 0;
    bool single = false;
    std::string loss_mode = "frc";

    auto* cmd_import = app.add_subcommand("import", "assemble PGM channels into a cube");
    cmd_import->add_option("--in", in_paths, "channel PGM files, in label order")->required();
    cmd_import->add_option("--out", out_path, "output .hyrs path")->required();
    cmd_import->add_option("--labels", labels_path, "text file, one m/z per line")->required();
    cmd_import->add_option("--pixel-size", pixel_size, "pixel size in um");
    cmd_import->add_option("--seed", seed, "run seed (unused, recorded)");

    auto* cmd_info = app.add_subcommand("info", "print cube dimensions and labels");
    cmd_info->add_option("--in", in_paths, "input .hyrs")->required();
    cmd_info->add_option("--seed", seed, "run seed (unused)");

    auto* cmd_degrade = app.add_subcommand("degrade", "SNR-filter, crop, downsample, noise");
    cmd_degrade->add_option("--in", in_paths, "input HR .hyrs")->required();
    cmd_degrade->add_option("--out", out_path, "output LR .hyrs")->required();
    cmd_degrade->add_option("--scale", scale, "downsampling factor");
    cmd_degrade->add_option("--noise-sigma", noise_sigma, "gaussian noise sigma");
    cmd_degrade->add_option("--noisy-fraction", noisy_fraction, "background-noised share");
    cmd_degrade->add_option("--snr-tau", snr_tau, "low-SNR MSE threshold");
    cmd_degrade->add_option("--seed", seed, "run seed");

    auto* cmd_train = app.add_subcommand("train", "train the restorer on degraded pairs");
    cmd_train->add_option("--in", in_paths, "input HR .hyrs")->required();
    cmd_train->add_option("--out", out_path, "output model file")->required();
    cmd_train->add_option("--scale", scale, "downsampling factor");
    cmd_train->add_option("--noise-sigma", noise_sigma, "gaussian noise sigma");
    cmd_train->add_option("--noisy-fraction", noisy_fraction, "background-noised share");
    cmd_train->add_option("--snr-tau", snr_tau, "low-SNR MSE threshold");
    cmd_train->add_option("--epochs", epochs, "training epochs");
    cmd_train->add_option("--batch", batch, "batch size");
    cmd_train->add_option("--patch", patch, "LR patch side");
    cmd_train->add_option("--loss", loss_mode, "frc | frc-sum")
        ->check(CLI::IsMember({"frc", "frc-sum"}));
    cmd_train->add_option("--adv-weight", adv_weight, "adversarial loss weight");
    cmd_train->add_option("--seed", seed, "run seed");

    auto* cmd_restore = app.add_subcommand("restore", "apply a trained model to a cube");
    cmd_restore->add_option("--in", in_paths, "input LR .hyrs")->required();
    cmd_restore->add_option("--model", model_path, "model file")->required();
    cmd_restore->add_option("--out", out_path, "output .hyrs")->required();
    cmd_restore->add_option("--seed", seed, "run seed (unused, recorded)");

    auto* cmd_frc = app.add_subcommand("frc", "FRC curve and resolution estimate");
    cmd_frc->add_option("--in", in_paths, "input .hyrs")->required();
    cmd_frc->add_option("--ref", ref_path, "second cube for two-image FRC");
    cmd_frc->add_option("--channel", channel, "channel index");
    cmd_frc->add_flag("--single", single, "single-image FRC (decimated halves)");
    cmd_frc->add_option("--threshold", threshold, "resolution threshold");
    cmd_frc->add_option("--out", out_path, "output CSV")->required();
    cmd_frc->add_option("--seed", seed, "run seed (unused, recorded)");

    auto* cmd_diffpsf = app.add_subcommand("diffpsf", "difference PSF and Gaussian fit");
    cmd_diffpsf->add_option("--in", in_paths, "candidate .hyrs")->required();
    cmd_diffpsf->add_option("--ref", ref_path, "reference .hyrs")->required();
    cmd_diffpsf->add_option("--channel", channel, "channel index");
    cmd_diffpsf->add_option("--out", out_path, "output CSV")->required();
    cmd_diffpsf->add_option("--seed", seed, "run seed (unused, recorded)");

    auto* cmd_iqa = app.add_subcommand("iqa", "per-channel quality report");
    cmd_iqa->add_option("--in", in_paths, "input .hyrs")->required();
    cmd_iqa->add_option("--ref", ref_path, "reference .hyrs for PSNR/SSIM");
    cmd_iqa->add_option("--out", out_path, "output CSV")->required();
    cmd_iqa->add_option("--seed", seed, "run seed (unused, recorded)");

    auto* cmd_stats = app.add_subcommand("stats", "rank/classification metrics from a CSV");
    cmd_stats->add_option("--in", in_paths, "two-column CSV: value,value or score,label")
        ->required();
    cmd_stats->add_option("--out", out_path, "output CSV: metric,value,n")->required();
    cmd_stats->add_option("--seed", seed, "run seed (unused, recorded)");

    auto* cmd_report = app.add_subcommand(
        "report", "phantom pipeline: degrade, train, restore, frc, diffpsf, iqa");
    cmd_report->add_option("--out", out_path, "output directory")->required();
    cmd_report->add_option("--scale", scale, "downsampling factor");
    cmd_report->add_option("--noise-sigma", noise_sigma, "gaussian noise sigma");
    cmd_report->add_option("--epochs", epochs, "training epochs");
    cmd_report->add_option("--patch", patch, "LR patch side");
    cmd_report->add_option("--seed", seed, "run seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help and friends
            std::cout << app.help();
            return 0;
        }
        std::cerr << e.what() << "\n" << app.help();
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        json params;
        std::vector<std::string> outputs;
        std::string subcommand;
        std::string manifest_path = out_path + ".manifest.json";

        if (*cmd_import) {
            subcommand = "import";
            for (const std::string& p : in_paths) require_exists(p);
            require_exists(labels_path);
            hyres::CubeManifest m;
            m.pixel_size_um = pixel_size;
            m.label_path = labels_path;
            m.files = in_paths;
            m.labels = read_label_file(labels_path);
            const hyres::SpectralCube cube = hyres::import_channels(m);
            hyres::write_cube(cube, out_path);
            outputs = {out_path};
            params = {{"pixel_size_um", pixel_size}, {"labels", labels_path}};
            std::cout << "imported " << cube.channel_count() << " channels ("
                      << cube.height() << "x" << cube.width() << ") -> " << out_path << "\n";
        } else if (*cmd_info) {
            subcommand = "info";
            require_exists(in_paths.at(0));
            const hyres::SpectralCube cube = hyres::read_cube(in_paths.at(0));
            std::cout << "channels: " << cube.channel_count() << "\n"
                      << "size: " << cube.height() << "x" << cube.width() << "\n"
                      << "pixel size: " << cube.pixel_size_um() << " um\n"
                      << "labels: " << cube.labels().front() << " .. " << cube.labels().back()
                      << "\n";
            return 0; // info writes nothing, so no manifest either
        } else if (*cmd_degrade) {
            subcommand = "degrade";
            require_exists(in_paths.at(0));
            hyres::DegradationConfig dcfg{scale, noise_sigma, noisy_fraction, snr_tau, seed};
            const hyres::SpectralCube lr = degrade_cube(hyres::read_cube(in_paths.at(0)), dcfg);
            hyres::write_cube(lr, out_path);
            outputs = {out_path};
            params = {{"scale", scale},
                      {"noise_sigma", noise_sigma},
                      {"noisy_fraction", noisy_fraction},
                      {"snr_tau", snr_tau}};
            std::cout << "degraded to " << lr.height() << "x" << lr.width() << " -> " << out_path
                      << "\n";
        } else if (*cmd_train) {
            subcommand = "train";
            require_exists(in_paths.at(0));
            hyres::DegradationConfig dcfg{scale, noise_sigma, noisy_fraction, snr_tau, seed};
            hyres::TrainingConfig tcfg;
            tcfg.epochs = epochs;
            tcfg.batch_size = batch;
            tcfg.patch_size = patch;
            tcfg.adv_weight = adv_weight;
            tcfg.seed = seed;
            const auto mode = loss_mode == "frc-sum" ? hyres::FrcLossMode::ring_sum
                                                     : hyres::FrcLossMode::ring_mean;
            const hyres::PairSet pairs =
                hyres::make_training_pairs(hyres::read_cube(in_paths.at(0)), dcfg, tcfg);
            const hyres::RestorerModel model = hyres::train_restorer(pairs, tcfg, mode);
            hyres::write_model(model, out_path);
            hyres::write_loss_trace_csv(model, out_path + ".trace.csv");
            outputs = {out_path, out_path + ".trace.csv"};
            params = {{"scale", scale},       {"noise_sigma", noise_sigma},
                      {"noisy_fraction", noisy_fraction}, {"snr_tau", snr_tau},
                      {"epochs", epochs},     {"batch", batch},
                      {"patch", patch},       {"loss", loss_mode},
                      {"adv_weight", adv_weight}};
            std::cout << "trained on " << pairs.pairs.size() << " pairs, final loss "
                      << model.final_loss << " -> " << out_path << "\n";
        } else if (*cmd_restore) {
            subcommand = "restore";
            require_exists(in_paths.at(0));
            require_exists(model_path);
            const hyres::RestorerModel model = hyres::read_model(model_path);
            const hyres::SpectralCube out =
                hyres::apply_restorer(model, hyres::read_cube(in_paths.at(0)));
            hyres::write_cube(out, out_path);
            outputs = {out_path};
            params = {{"model", model_path}, {"scale", model.scale}};
            std::cout << "restored to " << out.height() << "x" << out.width() << " at "
                      << out.pixel_size_um() << " um -> " << out_path << "\n";
        } else if (*cmd_frc) {
            subcommand = "frc";
            require_exists(in_paths.at(0));
            const hyres::SpectralCube cube = hyres::read_cube(in_paths.at(0));
            const hyres::ChannelImage& img =
                cube.channel(static_cast<std::size_t>(channel));
            hyres::FrcCurve curve;
            if (single) {
                curve = hyres::single_image_frc(img, cube.pixel_size_um());
            } else {
                if (ref_path.empty())
                    throw hyres::validation_error("frc: --ref required unless --single");
                require_exists(ref_path);
                const hyres::SpectralCube refc = hyres::read_cube(ref_path);
                curve = hyres::frc_curve(img, refc.channel(static_cast<std::size_t>(channel)),
                                         cube.pixel_size_um());
            }
            const hyres::ResolutionEstimate est =
                hyres::resolution_from_curve(curve, threshold, curve.pixel_size_um);
            write_frc_csv(curve, est, out_path);
            write_frc_svg(curve, out_path + ".svg");
            outputs = {out_path, out_path + ".svg"};
            params = {{"channel", channel}, {"single", single}, {"threshold", threshold},
                      {"ref", ref_path}};
            std::cout << "resolution " << est.resolution_um << " um"
                      << (est.nyquist_limited ? " (nyquist limited)" : "") << " -> " << out_path
                      << "\n";
        } else if (*cmd_diffpsf) {
            subcommand = "diffpsf";
            require_exists(in_paths.at(0));
            require_exists(ref_path);
            const hyres::SpectralCube a = hyres::read_cube(in_paths.at(0));
            const hyres::SpectralCube b = hyres::read_cube(ref_path);
            const hyres::DifferencePsf psf = hyres::difference_psf(
                a.channel(static_cast<std::size_t>(channel)),
                b.channel(static_cast<std::size_t>(channel)));
            const hyres::GaussianFit fit = hyres::fit_radial_gaussian(psf);
            write_diffpsf_csv(psf, fit, out_path);
            outputs = {out_path};
            params = {{"channel", channel}, {"ref", ref_path}};
            std::cout << "difference-PSF FWHM " << fit.fwhm << " px"
                      << (fit.non_gaussian ? " (non-gaussian)" : "") << " -> " << out_path << "\n";
        } else if (*cmd_iqa) {
            subcommand = "iqa";
            require_exists(in_paths.at(0));
            const hyres::SpectralCube cube = hyres::read_cube(in_paths.at(0));
            std::optional<hyres::SpectralCube> ref;
            if (!ref_path.empty()) {
                require_exists(ref_path);
                ref = hyres::read_cube(ref_path);
            }
            const hyres::IqaReport rep = hyres::score_cube(
                cube, hyres::default_brisque_model(), ref ? &*ref : nullptr);
            write_iqa_csv(rep, out_path);
            outputs = {out_path};
            params = {{"ref", ref_path}};
            std::cout << "median crisque " << rep.median_crisque << " -> " << out_path << "\n";
        } else if (*cmd_stats) {
            subcommand = "stats";
            require_exists(in_paths.at(0));
            std::ifstream is(in_paths.at(0));
            std::string line;
            std::vector<double> x, y;
            bool header_skipped = false;
            while (std::getline(is, line)) {
                if (line.empty() || line[0] == '#') continue;
                std::stringstream ss(line);
                std::string a, b;
                if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) continue;
                try {
                    const double xv = std::stod(a), yv = std::stod(b);
                    x.push_back(xv);
                    y.push_back(yv);
                } catch (const std::exception&) {
                    if (header_skipped)
                        throw hyres::format_error("stats: non-numeric row '" + line + "'");
                    header_skipped = true;
                }
            }
            if (x.size() < 3)
                throw hyres::validation_error("stats: need at least 3 numeric rows");
            std::ofstream os(out_path, std::ios::binary | std::ios::trunc);
            if (!os) throw hyres::io_error("cannot write '" + out_path + "'");
            os << "metric,value,n\n";
            os << "spearman," << fmt(hyres::spearman(x, y)) << "," << x.size() << "\n";
            const bool binary = std::all_of(y.begin(), y.end(),
                                            [](double v) { return v == 0.0 || v == 1.0; });
            if (binary) {
                std::vector<int> labels(y.size());
                for (std::size_t k = 0; k < y.size(); ++k) labels[k] = static_cast<int>(y[k]);
                os << "roc_auc," << fmt(hyres::roc_auc(x, labels)) << "," << x.size() << "\n";
            }
            outputs = {out_path};
            params = {{"columns", "x,y"}};
            std::cout << "stats -> " << out_path << "\n";
        } else if (*cmd_report) {
            subcommand = "report";
            fs::create_directories(out_path);
            manifest_path = (fs::path(out_path) / "run.manifest.json").string();
            const auto in_dir = [&](const std::string& name) {
                return (fs::path(out_path) / name).string();
            };
            // synthetic ground truth: blurred phantoms at HR
            const int n = 32 * scale; // HR side, divisible by the scale
            hyres::SpectralCube hr = [&] {
                std::vector<hyres::ChannelImage> chans;
                std::vector<double> labels;
                for (int c = 0; c < 4; ++c) {
                    hyres::ChannelImage img = hyres::make_phantom(n, n, seed * 10 + c, 1.0);
                    img = hyres::simulate_observation(img,
                                                      hyres::ObservationConfig{1.5, 0.0, 0});
                    double lo = 1e300, hi = -1e300;
                    for (double v : img.data()) {
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                    }
                    for (double& v : img.data()) v = (v - lo) / (hi - lo);
                    chans.push_back(std::move(img));
                    labels.push_back(100.0 + c);
                }
                return hyres::SpectralCube(std::move(chans), 25.0, std::move(labels));
            }();
            hyres::write_cube(hr, in_dir("ground_truth.hyrs"));

            hyres::DegradationConfig dcfg{scale, noise_sigma, 0.0, 1e-6, seed};
            const hyres::SpectralCube lr = degrade_cube(hr, dcfg);
            hyres::write_cube(lr, in_dir("degraded.hyrs"));

            hyres::TrainingConfig tcfg;
            tcfg.epochs = epochs;
            tcfg.patch_size = patch;
            tcfg.seed = seed;
            const hyres::PairSet pairs = hyres::make_training_pairs(hr, dcfg, tcfg);
            const hyres::RestorerModel model = hyres::train_restorer(pairs, tcfg);
            hyres::write_model(model, in_dir("model.txt"));
            hyres::write_loss_trace_csv(model, in_dir("loss_trace.csv"));

            const hyres::SpectralCube restored = hyres::apply_restorer(model, lr);
            hyres::write_cube(restored, in_dir("restored.hyrs"));
            const hyres::RestorerModel delta =
                hyres::RestorerModel::delta(scale, tcfg.kernel_size, seed);
            const hyres::SpectralCube upsampled = hyres::apply_restorer(delta, lr);

            const hyres::FrcCurve frc_restored =
                hyres::single_image_frc(restored.channel(0), restored.pixel_size_um());
            const auto est_restored = hyres::resolution_from_curve(
                frc_restored, hyres::kFrcThreshold, frc_restored.pixel_size_um);
            write_frc_csv(frc_restored, est_restored, in_dir("frc_restored.csv"));
            write_frc_svg(frc_restored, in_dir("frc_restored.csv.svg"));
            const hyres::FrcCurve frc_up =
                hyres::single_image_frc(upsampled.channel(0), upsampled.pixel_size_um());
            const auto est_up = hyres::resolution_from_curve(frc_up, hyres::kFrcThreshold,
                                                             frc_up.pixel_size_um);
            write_frc_csv(frc_up, est_up, in_dir("frc_bicubic.csv"));

            const hyres::DifferencePsf psf =
                hyres::difference_psf(restored.channel(0), upsampled.channel(0));
            write_diffpsf_csv(psf, hyres::fit_radial_gaussian(psf), in_dir("diffpsf.csv"));

            const hyres::IqaReport rep =
                hyres::score_cube(restored, hyres::default_brisque_model(), &hr);
            write_iqa_csv(rep, in_dir("iqa.csv"));

            outputs = {in_dir("ground_truth.hyrs"), in_dir("degraded.hyrs"),
                       in_dir("model.txt"),         in_dir("loss_trace.csv"),
                       in_dir("restored.hyrs"),     in_dir("frc_restored.csv"),
                       in_dir("frc_bicubic.csv"),   in_dir("diffpsf.csv"),
                       in_dir("iqa.csv")};
            params = {{"scale", scale},
                      {"noise_sigma", noise_sigma},
                      {"epochs", epochs},
                      {"patch", patch}};
            std::cout << "report written to " << out_path << " (restored resolution "
                      << est_restored.resolution_um << " um, bicubic " << est_up.resolution_um
                      << " um)\n";
        }

        const double dur =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_manifest(subcommand, params, seed, in_paths, outputs, dur, manifest_path);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
