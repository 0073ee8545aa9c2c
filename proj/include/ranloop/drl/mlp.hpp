#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ranloop::drl {

inline constexpr size_t kStateDim = 24;
inline constexpr size_t kHiddenWidth = 30;
inline constexpr size_t kHiddenDepth = 5;
inline constexpr size_t kNumActions = 3;

struct MlpShape {
    size_t in = kStateDim;
    size_t hidden = kHiddenWidth;
    size_t depth = kHiddenDepth;  // hidden layers
    size_t out = kNumActions;

    size_t layers() const { return depth + 1; }
    size_t layer_rows(size_t l) const { return l < depth ? hidden : out; }
    size_t layer_cols(size_t l) const { return l == 0 ? in : hidden; }
    size_t param_count() const;

    bool operator==(const MlpShape&) const = default;
};

// Scratch for one forward pass, reused across calls and consumed by
// backward.
struct MlpWorkspace {
    std::vector<double> input;
    std::vector<std::vector<double>> hidden;  // tanh outputs per hidden layer
    std::vector<double> out;
};

// Fully connected tanh network with a linear output head. Parameters live in
// one flat vector ([W1|b1|W2|b2|...]) so the optimizer, the finite-difference
// oracle and the catalog serializer all share one layout. Values are kept
// f32-representable: the catalog stores 32-bit floats and load(save(x)) must
// reproduce x exactly.
class Mlp {
  public:
    Mlp() = default;
    explicit Mlp(MlpShape shape);  // zero-initialized

    // Scaled uniform init: limit = gain * sqrt(6 / (fan_in + fan_out)),
    // biases zero. Head layer uses head_gain.
    static Mlp init(MlpShape shape, double hidden_gain, double head_gain, uint64_t seed);

    const MlpShape& shape() const { return shape_; }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    size_t w_offset(size_t layer) const;
    size_t b_offset(size_t layer) const;

    void forward(std::span<const double> x, MlpWorkspace& ws) const;

    // Accumulates d(loss)/d(params) into grad given d(loss)/d(out); ws must
    // hold the matching forward pass.
    void backward(const MlpWorkspace& ws, std::span<const double> dout,
                  std::vector<double>& grad) const;

    // Rounds every parameter through float, keeping the catalog round-trip
    // exact.
    void quantize_f32();

  private:
    MlpShape shape_;
    std::vector<double> params_;
    std::vector<size_t> offsets_;  // per layer: [w_off, b_off]
};

// Numerically stable softmax; output sums to 1, entries strictly positive.
std::array<double, kNumActions> softmax(std::span<const double> logits);

double entropy(std::span<const double> probs);

struct ActionSample {
    int action = 0;
    double log_prob = 0.0;
};

// Inverse-CDF draw in fixed action order from one uniform variate.
template <typename Rng>
ActionSample sample_action(std::span<const double> probs, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double u = unit(rng);
    double acc = 0.0;
    int action = static_cast<int>(probs.size()) - 1;
    for (size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) {
            action = static_cast<int>(i);
            break;
        }
    }
    double p = std::max(probs[static_cast<size_t>(action)], 1e-12);
    return {action, std::log(p)};
}

// Argmax, ties to the lowest action code.
int greedy_action(std::span<const double> probs);

}  // namespace ranloop::drl
