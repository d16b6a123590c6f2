#include "lifetrack/policy.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lifetrack/errors.hpp"
#include "lifetrack/experience.hpp"
#include "lifetrack/rng.hpp"

namespace lifetrack {

namespace {

constexpr int kIn = 5;
constexpr int kHidden = 64;

// parameter layout offsets
constexpr int kW1 = 0;                      // 64 x 5, row-major
constexpr int kB1 = kW1 + kHidden * kIn;    // 64
constexpr int kW2 = kB1 + kHidden;          // 64 x 64
constexpr int kB2 = kW2 + kHidden * kHidden;
constexpr int kW3 = kB2 + kHidden;          // 1 x 64
constexpr int kB3 = kW3 + kHidden;
constexpr int kParamCount = kB3 + 1;        // 4801

struct Activations {
    std::array<double, kIn> in;
    std::array<double, kHidden> h1;  // tanh outputs
    std::array<double, kHidden> h2;
    double out;
};

void forward_pass(const std::vector<double>& p, const Normalizer& norm, const StateVec& s,
                  Activations& act) {
    StateVec z = norm.apply(s);
    for (int i = 0; i < kIn; ++i) act.in[i] = z[i];
    for (int i = 0; i < kHidden; ++i) {
        double acc = p[kB1 + i];
        const double* row = p.data() + kW1 + i * kIn;
        for (int j = 0; j < kIn; ++j) acc += row[j] * act.in[j];
        act.h1[i] = std::tanh(acc);
    }
    for (int i = 0; i < kHidden; ++i) {
        double acc = p[kB2 + i];
        const double* row = p.data() + kW2 + i * kHidden;
        for (int j = 0; j < kHidden; ++j) acc += row[j] * act.h1[j];
        act.h2[i] = std::tanh(acc);
    }
    double acc = p[kB3];
    for (int j = 0; j < kHidden; ++j) acc += p[kW3 + j] * act.h2[j];
    act.out = acc;
}

}  // namespace

double GradientVector::dot(const GradientVector& other) const {
    if (v.size() != other.v.size()) throw LengthMismatch("gradient dims differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * other.v[i];
    return acc;
}

double GradientVector::norm() const {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

PolicyNet::PolicyNet() : params_(kParamCount, 0.0) {}

PolicyNet PolicyNet::random_init(Rng& rng) {
    PolicyNet net;
    auto init_layer = [&](int w_off, int rows, int cols) {
        double bound = std::sqrt(6.0 / (rows + cols));
        for (int i = 0; i < rows * cols; ++i) net.params_[w_off + i] = rng.uniform(-bound, bound);
    };
    init_layer(kW1, kHidden, kIn);
    init_layer(kW2, kHidden, kHidden);
    init_layer(kW3, 1, kHidden);
    // biases stay zero
    return net;
}

double PolicyNet::forward(const Normalizer& norm, const StateVec& s) const {
    Activations act;
    forward_pass(params_, norm, s, act);
    return act.out;
}

double mse_loss(const PolicyNet& net, const Normalizer& norm, const std::vector<Sample>& batch) {
    if (batch.empty()) throw EmptyBatch();
    double acc = 0.0;
    for (const Sample& sm : batch) {
        double r = net.forward(norm, sm.s) - sm.a;
        acc += r * r;
    }
    return acc / static_cast<double>(batch.size());
}

std::pair<double, GradientVector> backward(const PolicyNet& net, const Normalizer& norm,
                                           const std::vector<Sample>& batch) {
    if (batch.empty()) throw EmptyBatch();
    const std::vector<double>& p = net.params();
    GradientVector g;
    g.v.assign(kParamCount, 0.0);
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(batch.size());

    Activations act;
    std::array<double, kHidden> d2, d1;
    for (const Sample& sm : batch) {
        forward_pass(p, norm, sm.s, act);
        double res = act.out - sm.a;
        loss += res * res;
        double dout = 2.0 * res * inv_n;  // dL/d(out)

        // output layer
        g.v[kB3] += dout;
        for (int j = 0; j < kHidden; ++j) g.v[kW3 + j] += dout * act.h2[j];

        // second hidden layer
        for (int i = 0; i < kHidden; ++i)
            d2[i] = dout * p[kW3 + i] * (1.0 - act.h2[i] * act.h2[i]);
        for (int i = 0; i < kHidden; ++i) {
            g.v[kB2 + i] += d2[i];
            double* grow = g.v.data() + kW2 + i * kHidden;
            for (int j = 0; j < kHidden; ++j) grow[j] += d2[i] * act.h1[j];
        }

        // first hidden layer
        for (int j = 0; j < kHidden; ++j) {
            double acc = 0.0;
            for (int i = 0; i < kHidden; ++i) acc += d2[i] * p[kW2 + i * kHidden + j];
            d1[j] = acc * (1.0 - act.h1[j] * act.h1[j]);
        }
        for (int i = 0; i < kHidden; ++i) {
            g.v[kB1 + i] += d1[i];
            double* grow = g.v.data() + kW1 + i * kIn;
            for (int j = 0; j < kIn; ++j) grow[j] += d1[i] * act.in[j];
        }
    }
    return {loss * inv_n, std::move(g)};
}

OptimizerState OptimizerState::make(Method method, double lr, std::size_t param_count) {
    OptimizerState opt;
    opt.method = method;
    opt.lr = lr;
    if (method == Method::adam) {
        opt.m.assign(param_count, 0.0);
        opt.v.assign(param_count, 0.0);
    }
    return opt;
}

void apply_gradient(PolicyNet& net, OptimizerState& opt, const GradientVector& g) {
    if (g.size() != net.param_count()) throw LengthMismatch("gradient/net size mismatch");
    std::vector<double>& p = net.params();
    if (opt.method == OptimizerState::Method::sgd) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= opt.lr * g.v[i];
        return;
    }
    opt.step += 1;
    double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
    double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
    for (std::size_t i = 0; i < p.size(); ++i) {
        opt.m[i] = opt.beta1 * opt.m[i] + (1.0 - opt.beta1) * g.v[i];
        opt.v[i] = opt.beta2 * opt.v[i] + (1.0 - opt.beta2) * g.v[i] * g.v[i];
        double mhat = opt.m[i] / bc1;
        double vhat = opt.v[i] / bc2;
        p[i] -= opt.lr * mhat / (std::sqrt(vhat) + opt.eps);
    }
}

Normalizer fit_normalizer(const std::vector<TaskDataset>& datasets) {
    std::size_t n = 0;
    StateVec mean{};
    for (const auto& d : datasets)
        for (const Sample& sm : d.samples) {
            ++n;
            for (int i = 0; i < 5; ++i) mean[i] += sm.s[i];
        }
    if (n == 0) throw EmptyData();
    for (int i = 0; i < 5; ++i) mean[i] /= static_cast<double>(n);

    StateVec var{};
    for (const auto& d : datasets)
        for (const Sample& sm : d.samples)
            for (int i = 0; i < 5; ++i) {
                double dv = sm.s[i] - mean[i];
                var[i] += dv * dv;
            }
    Normalizer norm;
    norm.shift = mean;
    for (int i = 0; i < 5; ++i)
        norm.scale[i] = std::max(std::sqrt(var[i] / static_cast<double>(n)), 1e-8);
    return norm;
}

void PolicyNet::save(const std::string& file, const Normalizer& norm) const {
    std::ofstream out(file);
    if (!out) throw IoError("cannot open " + file);
    out << "lifetrack-policy v1\n";
    out << "dims 5 64 64 1\n";
    char buf[40];
    out << "shift";
    for (double v : norm.shift) {
        std::snprintf(buf, sizeof(buf), " %.17g", v);
        out << buf;
    }
    out << "\nscale";
    for (double v : norm.scale) {
        std::snprintf(buf, sizeof(buf), " %.17g", v);
        out << buf;
    }
    out << "\nparams " << params_.size() << "\n";
    for (double v : params_) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        out << buf;
    }
}

std::pair<PolicyNet, Normalizer> PolicyNet::load(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file);
    std::string header;
    std::getline(in, header);
    if (header != "lifetrack-policy v1") throw IoError("bad model header in " + file);
    std::string word;
    in >> word;  // dims
    int d[4];
    in >> d[0] >> d[1] >> d[2] >> d[3];
    if (d[0] != 5 || d[1] != 64 || d[2] != 64 || d[3] != 1)
        throw IoError("unsupported dims in " + file);
    Normalizer norm;
    in >> word;  // shift
    for (double& v : norm.shift) in >> v;
    in >> word;  // scale
    for (double& v : norm.scale) in >> v;
    in >> word;  // params
    std::size_t count = 0;
    in >> count;
    PolicyNet net;
    if (count != net.param_count()) throw IoError("bad parameter count in " + file);
    for (double& v : net.params()) in >> v;
    if (!in) throw IoError("truncated model file " + file);
    return {net, norm};
}

}  // namespace lifetrack
