#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lifetrack {

class Rng;

// One processed experience pair: state [x_ref, y_ref, vx, vy, r] and the
// applied steering.
struct Sample {
    std::array<double, 5> s{};
    double a = 0.0;
};

using StateVec = std::array<double, 5>;

// Frozen per-feature affine normalization; fitted once on the curriculum
// data and reused for the whole experiment so memory similarity stays
// comparable across tasks.
struct Normalizer {
    StateVec shift{};
    StateVec scale{1.0, 1.0, 1.0, 1.0, 1.0};

    StateVec apply(const StateVec& s) const {
        StateVec out;
        for (int i = 0; i < 5; ++i) out[i] = (s[i] - shift[i]) / scale[i];
        return out;
    }
};

// Flattened parameter gradient; layer by layer, weights row-major then
// biases.
struct GradientVector {
    std::vector<double> v;

    std::size_t size() const { return v.size(); }
    double dot(const GradientVector& other) const;
    double norm() const;
};

// Feed-forward 5-64-64-1 network, tanh hidden layers, linear output.
class PolicyNet {
public:
    static constexpr std::array<int, 4> kDims{5, 64, 64, 1};

    PolicyNet();  // zero-initialized
    static PolicyNet random_init(Rng& rng);

    std::size_t param_count() const { return params_.size(); }
    const std::vector<double>& params() const { return params_; }
    std::vector<double>& params() { return params_; }

    // Raw output; actuator clamping happens at the plant, not here.
    double forward(const Normalizer& norm, const StateVec& s) const;

    void save(const std::string& file, const Normalizer& norm) const;
    static std::pair<PolicyNet, Normalizer> load(const std::string& file);

private:
    std::vector<double> params_;
};

struct OptimizerState {
    enum class Method { sgd, adam };
    Method method = Method::adam;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::vector<double> m;  // adam first moment
    std::vector<double> v;  // adam second moment
    std::int64_t step = 0;

    static OptimizerState make(Method method, double lr, std::size_t param_count);
};

double mse_loss(const PolicyNet& net, const Normalizer& norm, const std::vector<Sample>& batch);

// Analytic gradient of mse_loss; flatten order as documented on
// GradientVector.
std::pair<double, GradientVector> backward(const PolicyNet& net, const Normalizer& norm,
                                           const std::vector<Sample>& batch);

void apply_gradient(PolicyNet& net, OptimizerState& opt, const GradientVector& g);

struct TaskDataset;  // experience.hpp
Normalizer fit_normalizer(const std::vector<TaskDataset>& datasets);

}  // namespace lifetrack
