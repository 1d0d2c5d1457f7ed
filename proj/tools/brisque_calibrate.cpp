// Regenerates the bundled BRISQUE linear scorer.
//
// A degradation ladder of seeded phantoms (clean -> blur -> noise -> both, at
// increasing strengths) is scored with target values spread over [5, 95].
// Features are min-max normalized over the ladder and a ridge-regularized
// least-squares fit maps them to the targets. The resulting header is written
// to stdout or to the path given as argv[1]; commit it as
// include/hyres/brisque_default.hpp.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hyres/iqa.hpp"
#include "hyres/phantom.hpp"
#include "hyres/psf.hpp"

using namespace hyres;

namespace {

struct Sample {
    std::vector<double> features;
    double target;
};

ChannelImage clamp01(ChannelImage img) {
    for (double& v : img.data()) v = std::clamp(v, 0.0, 1.0);
    return img;
}

// Gaussian elimination with partial pivoting; the system is tiny (37x37).
std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    std::vector<Sample> samples;
    const int n_phantoms = 24;
    for (int p = 0; p < n_phantoms; ++p) {
        const ChannelImage clean = make_phantom(96, 96, 9000 + p, 2.0);
        // ladder: (blur, noise, target score)
        const struct {
            double blur, noise, target;
        } ladder[] = {
            {0.0, 0.00, 5.0},  {0.8, 0.00, 25.0}, {1.6, 0.00, 40.0},
            {0.0, 0.04, 45.0}, {0.0, 0.10, 70.0}, {1.2, 0.06, 60.0},
            {2.4, 0.00, 55.0}, {2.0, 0.12, 95.0},
        };
        int rung = 0;
        for (const auto& step : ladder) {
            ChannelImage img = clean;
            img = simulate_observation(
                img, ObservationConfig{step.blur, step.noise,
                                       static_cast<std::uint64_t>(7000 + p * 100 + rung)});
            samples.push_back(Sample{brisque_features(clamp01(std::move(img))), step.target});
            ++rung;
        }
    }

    std::vector<double> fmin(36, 1e300), fmax(36, -1e300);
    for (const Sample& s : samples)
        for (std::size_t k = 0; k < 36; ++k) {
            fmin[k] = std::min(fmin[k], s.features[k]);
            fmax[k] = std::max(fmax[k], s.features[k]);
        }
    for (std::size_t k = 0; k < 36; ++k)
        if (!(fmin[k] < fmax[k])) fmax[k] = fmin[k] + 1.0; // inert feature guard

    // ridge least squares on [normalized features, 1] -> target
    const std::size_t dim = 37;
    std::vector<std::vector<double>> ata(dim, std::vector<double>(dim, 0.0));
    std::vector<double> atb(dim, 0.0);
    const double lambda = 1e-3;
    for (const Sample& s : samples) {
        std::vector<double> row(dim, 1.0);
        for (std::size_t k = 0; k < 36; ++k)
            row[k] = (s.features[k] - fmin[k]) / (fmax[k] - fmin[k]);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) ata[i][j] += row[i] * row[j];
            atb[i] += row[i] * s.target;
        }
    }
    for (std::size_t i = 0; i + 1 < dim; ++i) ata[i][i] += lambda;
    const std::vector<double> w = solve(std::move(ata), std::move(atb));

    // report in-sample ordering quality
    double err = 0.0;
    for (const Sample& s : samples) {
        double z = w[36];
        for (std::size_t k = 0; k < 36; ++k)
            z += w[k] * (s.features[k] - fmin[k]) / (fmax[k] - fmin[k]);
        err += (z - s.target) * (z - s.target);
    }
    std::cerr << "calibrated on " << samples.size() << " samples, rms error "
              << std::sqrt(err / static_cast<double>(samples.size())) << "\n";

    std::ostringstream os;
    os << "#ifndef HYRES_BRISQUE_DEFAULT_HPP\n#define HYRES_BRISQUE_DEFAULT_HPP\n\n";
    os << "#include \"hyres/iqa.hpp\"\n\nnamespace hyres {\n\n";
    os << "// Bundled linear scorer, fitted on a synthetic blur/noise degradation ladder\n";
    os << "// of seeded phantoms. Regenerate with the `brisque_calibrate` tool; absolute\n";
    os << "// scores are specific to this scorer, only ordering is meaningful.\n";
    os << "inline const BrisqueModel& default_brisque_model() {\n";
    os << "    static const BrisqueModel model = [] {\n        BrisqueModel m;\n";
    os << "        m.provenance = \"synthetic degradation ladder, "
       << samples.size() << " samples\";\n";
    auto emit_vec = [&](const char* name, const std::vector<double>& v, std::size_t n) {
        os << "        m." << name << " = {\n";
        for (std::size_t k = 0; k < n; ++k)
            os << "            " << fmt(v[k]) << (k + 1 < n ? "," : "") << "\n";
        os << "        };\n";
    };
    emit_vec("weights", w, 36);
    os << "        m.bias = " << fmt(w[36]) << ";\n";
    emit_vec("feature_min", fmin, 36);
    emit_vec("feature_max", fmax, 36);
    os << "        return m;\n    }();\n    return model;\n}\n\n";
    os << "} // namespace hyres\n\n#endif\n";

    if (argc > 1) {
        std::ofstream f(argv[1], std::ios::binary | std::ios::trunc);
        f << os.str();
        std::cerr << "wrote " << argv[1] << "\n";
    } else {
        std::cout << os.str();
    }
    return 0;
}
