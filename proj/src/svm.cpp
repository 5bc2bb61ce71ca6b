#include "dart/svm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dart/classify.hpp"
#include "dart/util.hpp"

namespace dart::classify {

double rbf_kernel(const std::array<double, 4>& a, const std::array<double, 4>& b, double gamma) {
    double d2 = 0.0;
    for (int i = 0; i < 4; i++) {
        double d = a[i] - b[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

namespace {

/// Platt's SMO on one binary problem, fully deterministic: candidate scans
/// run in ascending index order and argmax ties keep the lowest index.
class SmoSolver {
  public:
    SmoSolver(const std::vector<std::array<double, 4>>& x, const std::vector<double>& y, double c,
              double gamma, double tol)
        : x_(x), y_(y), c_(c), tol_(tol), n_(x.size()), alpha_(n_, 0.0), error_(n_) {
        kernel_.resize(n_ * n_);
        for (size_t i = 0; i < n_; i++) {
            for (size_t j = 0; j <= i; j++) {
                double k = rbf_kernel(x_[i], x_[j], gamma);
                kernel_[i * n_ + j] = k;
                kernel_[j * n_ + i] = k;
            }
        }
        for (size_t i = 0; i < n_; i++) error_[i] = -y_[i];  // f == 0 initially
    }

    void solve() {
        // The outer loop alternates full sweeps with non-bound sweeps; a
        // final fresh-error verification guards against error-cache drift.
        for (int round = 0; round < 16; round++) {
            run_platt_loop();
            refresh_errors();
            if (max_kkt_violation() <= tol_) break;
        }
    }

    double max_kkt_violation() const {
        double worst = 0.0;
        for (size_t i = 0; i < n_; i++) {
            double r = error_[i] * y_[i];  // = y_i f(x_i) - 1
            if (alpha_[i] < c_ && -r > worst) worst = -r;
            if (alpha_[i] > 0.0 && r > worst) worst = r;
        }
        return worst;
    }

    const std::vector<double>& alphas() const { return alpha_; }
    double bias() const { return b_; }

  private:
    double k(size_t i, size_t j) const { return kernel_[i * n_ + j]; }
    bool non_bound(size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < c_; }

    void refresh_errors() {
        for (size_t i = 0; i < n_; i++) {
            double f = b_;
            for (size_t j = 0; j < n_; j++) {
                if (alpha_[j] > 0.0) f += alpha_[j] * y_[j] * k(j, i);
            }
            error_[i] = f - y_[i];
        }
    }

    void run_platt_loop() {
        size_t num_changed = 0;
        bool examine_all = true;
        while (num_changed > 0 || examine_all) {
            num_changed = 0;
            for (size_t i = 0; i < n_; i++) {
                if (examine_all || non_bound(i)) num_changed += examine(i) ? 1 : 0;
            }
            if (examine_all) {
                examine_all = false;
            } else if (num_changed == 0) {
                examine_all = true;
            }
        }
    }

    bool examine(size_t i2) {
        double r2 = error_[i2] * y_[i2];
        bool violates = (r2 < -tol_ && alpha_[i2] < c_) || (r2 > tol_ && alpha_[i2] > 0.0);
        if (!violates) return false;

        size_t best = n_;
        double best_gap = -1.0;
        for (size_t i = 0; i < n_; i++) {
            if (!non_bound(i)) continue;
            double gap = std::abs(error_[i] - error_[i2]);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n_ && take_step(best, i2)) return true;
        for (size_t i = 0; i < n_; i++) {
            if (non_bound(i) && take_step(i, i2)) return true;
        }
        for (size_t i = 0; i < n_; i++) {
            if (take_step(i, i2)) return true;
        }
        return false;
    }

    bool take_step(size_t i1, size_t i2) {
        if (i1 == i2) return false;
        double a1 = alpha_[i1], a2 = alpha_[i2];
        double y1 = y_[i1], y2 = y_[i2];
        double e1 = error_[i1], e2 = error_[i2];
        double s = y1 * y2;

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(c_, c_ + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - c_);
            hi = std::min(c_, a1 + a2);
        }
        if (lo >= hi) return false;

        double k11 = k(i1, i1), k12 = k(i1, i2), k22 = k(i2, i2);
        double eta = k11 + k22 - 2.0 * k12;
        double a2_new;
        if (eta > 0.0) {
            a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            double f1 = y1 * (e1 + b_) - a1 * k11 - s * a2 * k12;
            double f2 = y2 * (e2 + b_) - s * a1 * k12 - a2 * k22;
            double l1 = a1 + s * (a2 - lo);
            double h1 = a1 + s * (a2 - hi);
            double psi_lo =
                l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 + s * lo * l1 * k12;
            double psi_hi =
                h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (psi_lo < psi_hi - 1e-12) {
                a2_new = lo;
            } else if (psi_lo > psi_hi + 1e-12) {
                a2_new = hi;
            } else {
                return false;
            }
        }
        if (std::abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;

        double a1_new = a1 + s * (a2 - a2_new);
        if (a1_new < 0.0) {
            a2_new += s * a1_new;
            a1_new = 0.0;
        } else if (a1_new > c_) {
            a2_new += s * (a1_new - c_);
            a1_new = c_;
        }

        double d1 = y1 * (a1_new - a1);
        double d2 = y2 * (a2_new - a2);
        double b1 = b_ - e1 - d1 * k11 - d2 * k12;
        double b2 = b_ - e2 - d1 * k12 - d2 * k22;
        double b_new;
        if (a1_new > 0.0 && a1_new < c_) {
            b_new = b1;
        } else if (a2_new > 0.0 && a2_new < c_) {
            b_new = b2;
        } else {
            b_new = (b1 + b2) / 2.0;
        }
        double db = b_new - b_;
        b_ = b_new;
        alpha_[i1] = a1_new;
        alpha_[i2] = a2_new;
        for (size_t i = 0; i < n_; i++) {
            error_[i] += d1 * k(i1, i) + d2 * k(i2, i) + db;
        }
        return true;
    }

    const std::vector<std::array<double, 4>>& x_;
    const std::vector<double>& y_;
    double c_;
    double tol_;
    size_t n_;
    std::vector<double> alpha_;
    std::vector<double> error_;
    std::vector<double> kernel_;
    double b_ = 0.0;
};

std::array<double, 4> transform(const SvmModel& model, const std::array<double, 4>& v) {
    if (!model.standardized) return v;
    std::array<double, 4> out;
    for (int i = 0; i < 4; i++) out[i] = (v[i] - model.feature_mean[i]) / model.feature_scale[i];
    return out;
}

}  // namespace

SvmModel train_svm(const std::vector<LabeledExample>& examples, const SvmConfig& config,
                   std::uint64_t seed) {
    (void)seed;
    if (examples.empty()) throw ClassifyError("cannot train an SVM on an empty example set");

    SvmModel model;
    model.classes = class_list(examples);
    if (model.classes.size() < 2) {
        throw ClassifyError("SVM training needs at least 2 classes, got " +
                            std::to_string(model.classes.size()));
    }
    model.c = config.c;
    model.standardized = config.standardize;

    std::vector<std::array<double, 4>> x(examples.size());
    std::vector<int> y(examples.size());
    for (size_t i = 0; i < examples.size(); i++) {
        x[i] = examples[i].features.as_array();
        auto it = std::lower_bound(model.classes.begin(), model.classes.end(), examples[i].label);
        y[i] = static_cast<int>(it - model.classes.begin());
    }

    if (config.standardize) {
        for (int f = 0; f < 4; f++) {
            double mean = 0.0, sq = 0.0;
            for (const auto& v : x) mean += v[f];
            mean /= static_cast<double>(x.size());
            for (const auto& v : x) sq += (v[f] - mean) * (v[f] - mean);
            double sd = std::sqrt(sq / static_cast<double>(x.size()));
            model.feature_mean[f] = mean;
            model.feature_scale[f] = sd > 0.0 ? sd : 1.0;
        }
        for (auto& v : x) v = transform(model, v);
    }

    if (config.gamma.kind == GammaSpec::Kind::Fixed) {
        if (config.gamma.value <= 0.0) throw ClassifyError("gamma must be > 0");
        model.gamma = config.gamma.value;
    } else {
        // gamma = scale: 1 / (n_features * variance of the full value matrix).
        double mean = 0.0, sq = 0.0;
        double count = static_cast<double>(x.size()) * 4.0;
        for (const auto& v : x) {
            for (double f : v) mean += f;
        }
        mean /= count;
        for (const auto& v : x) {
            for (double f : v) sq += (f - mean) * (f - mean);
        }
        double var = sq / count;
        model.gamma = var > 0.0 ? 1.0 / (4.0 * var) : 1.0;
    }

    int n_classes = static_cast<int>(model.classes.size());
    for (int ci = 0; ci < n_classes; ci++) {
        for (int cj = ci + 1; cj < n_classes; cj++) {
            std::vector<std::array<double, 4>> px;
            std::vector<double> py;
            for (size_t i = 0; i < x.size(); i++) {
                if (y[i] == ci) {
                    px.push_back(x[i]);
                    py.push_back(1.0);
                } else if (y[i] == cj) {
                    px.push_back(x[i]);
                    py.push_back(-1.0);
                }
            }
            SmoSolver solver(px, py, config.c, model.gamma, config.kkt_tolerance);
            solver.solve();

            BinaryMachine machine;
            machine.class_pos = ci;
            machine.class_neg = cj;
            machine.bias = solver.bias();
            machine.kkt_residual = solver.max_kkt_violation();
            const std::vector<double>& alphas = solver.alphas();
            for (size_t i = 0; i < px.size(); i++) {
                if (alphas[i] > 1e-12) {
                    machine.support_vectors.push_back(px[i]);
                    machine.dual_coefs.push_back(alphas[i] * py[i]);
                }
            }
            model.machines.push_back(std::move(machine));
        }
    }
    return model;
}

double decision_value(const SvmModel& model, const BinaryMachine& machine,
                      const sema::GapFeatures& features) {
    std::array<double, 4> v = transform(model, features.as_array());
    double f = machine.bias;
    for (size_t i = 0; i < machine.support_vectors.size(); i++) {
        f += machine.dual_coefs[i] * rbf_kernel(machine.support_vectors[i], v, model.gamma);
    }
    return f;
}

corpus::Origin predict_svm(const SvmModel& model, const sema::GapFeatures& features) {
    if (model.machines.empty()) throw ClassifyError("empty SVM model");
    std::vector<int> votes(model.classes.size(), 0);
    for (const BinaryMachine& m : model.machines) {
        votes[decision_value(model, m, features) >= 0.0 ? m.class_pos : m.class_neg]++;
    }
    int best = 0;
    for (size_t c = 1; c < votes.size(); c++) {
        if (votes[c] > votes[best]) best = static_cast<int>(c);
    }
    return model.classes[best];
}

std::string SvmModel::to_text() const {
    std::string out = "dart-model v1\nkind: svm\n";
    out += "c: " + util::fmt_g17(c) + "\n";
    out += "gamma: " + util::fmt_g17(gamma) + "\n";
    out += std::string("standardized: ") + (standardized ? "1" : "0") + "\n";
    auto vec4 = [](const std::array<double, 4>& v) {
        return util::fmt_g17(v[0]) + " " + util::fmt_g17(v[1]) + " " + util::fmt_g17(v[2]) + " " +
               util::fmt_g17(v[3]);
    };
    out += "feature_mean: " + vec4(feature_mean) + "\n";
    out += "feature_scale: " + vec4(feature_scale) + "\n";
    out += "classes: " + std::to_string(classes.size()) + "\n";
    for (const corpus::Origin& cls : classes) out += "class: " + cls.str() + "\n";
    out += "machines: " + std::to_string(machines.size()) + "\n";
    for (const BinaryMachine& m : machines) {
        out += "machine: pos=" + std::to_string(m.class_pos) + " neg=" +
               std::to_string(m.class_neg) + " bias=" + util::fmt_g17(m.bias) + " kkt=" +
               util::fmt_g17(m.kkt_residual) + " svs=" + std::to_string(m.support_vectors.size()) +
               "\n";
        for (size_t i = 0; i < m.support_vectors.size(); i++) {
            out += "sv: " + util::fmt_g17(m.dual_coefs[i]) + " " + vec4(m.support_vectors[i]) +
                   "\n";
        }
    }
    return out;
}

namespace {

std::string expect_prefix(const std::string& line, const std::string& prefix) {
    if (line.rfind(prefix, 0) != 0) {
        throw ClassifyError("model parse error: expected \"" + prefix + "\" got \"" + line + "\"");
    }
    return line.substr(prefix.size());
}

std::string field(const std::string& line, const std::string& name) {
    std::string needle = name + "=";
    size_t pos = line.find(needle);
    if (pos == std::string::npos) {
        throw ClassifyError("model parse error: missing field " + name + " in \"" + line + "\"");
    }
    size_t start = pos + needle.size();
    size_t end = line.find(' ', start);
    return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

std::array<double, 4> parse_vec4(const std::string& s) {
    std::stringstream ss(s);
    std::array<double, 4> out;
    for (int i = 0; i < 4; i++) {
        if (!(ss >> out[i])) throw ClassifyError("model parse error: bad vector \"" + s + "\"");
    }
    return out;
}

}  // namespace

SvmModel SvmModel::from_text(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    auto next_line = [&]() -> std::string {
        if (!std::getline(ss, line)) throw ClassifyError("model parse error: truncated file");
        return line;
    };

    expect_prefix(next_line(), "dart-model v1");
    expect_prefix(next_line(), "kind: svm");
    SvmModel model;
    model.c = std::stod(expect_prefix(next_line(), "c: "));
    model.gamma = std::stod(expect_prefix(next_line(), "gamma: "));
    model.standardized = expect_prefix(next_line(), "standardized: ") == "1";
    model.feature_mean = parse_vec4(expect_prefix(next_line(), "feature_mean: "));
    model.feature_scale = parse_vec4(expect_prefix(next_line(), "feature_scale: "));
    size_t n_classes = std::stoul(expect_prefix(next_line(), "classes: "));
    for (size_t i = 0; i < n_classes; i++) {
        model.classes.push_back(corpus::Origin::parse(expect_prefix(next_line(), "class: ")));
    }
    size_t n_machines = std::stoul(expect_prefix(next_line(), "machines: "));
    for (size_t i = 0; i < n_machines; i++) {
        std::string body = expect_prefix(next_line(), "machine: ");
        BinaryMachine m;
        m.class_pos = std::stoi(field(body, "pos"));
        m.class_neg = std::stoi(field(body, "neg"));
        m.bias = std::stod(field(body, "bias"));
        m.kkt_residual = std::stod(field(body, "kkt"));
        size_t n_svs = std::stoul(field(body, "svs"));
        for (size_t s = 0; s < n_svs; s++) {
            std::string sv_line = expect_prefix(next_line(), "sv: ");
            std::stringstream svs(sv_line);
            double coef;
            std::array<double, 4> vec;
            if (!(svs >> coef >> vec[0] >> vec[1] >> vec[2] >> vec[3])) {
                throw ClassifyError("model parse error: bad sv line \"" + sv_line + "\"");
            }
            m.dual_coefs.push_back(coef);
            m.support_vectors.push_back(vec);
        }
        model.machines.push_back(std::move(m));
    }
    return model;
}

}  // namespace dart::classify
