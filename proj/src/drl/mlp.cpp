#include "ranloop/drl/mlp.hpp"

#include <algorithm>
#include <stdexcept>

#include "ranloop/common/rng.hpp"
#include "ranloop/drl/kernels.hpp"

namespace ranloop::drl {

size_t MlpShape::param_count() const {
    size_t n = 0;
    for (size_t l = 0; l < layers(); ++l) n += layer_rows(l) * (layer_cols(l) + 1);
    return n;
}

Mlp::Mlp(MlpShape shape) : shape_(shape) {
    params_.assign(shape_.param_count(), 0.0);
    offsets_.reserve(shape_.layers() * 2);
    size_t off = 0;
    for (size_t l = 0; l < shape_.layers(); ++l) {
        offsets_.push_back(off);  // weights
        off += shape_.layer_rows(l) * shape_.layer_cols(l);
        offsets_.push_back(off);  // biases
        off += shape_.layer_rows(l);
    }
}

size_t Mlp::w_offset(size_t layer) const { return offsets_[2 * layer]; }
size_t Mlp::b_offset(size_t layer) const { return offsets_[2 * layer + 1]; }

Mlp Mlp::init(MlpShape shape, double hidden_gain, double head_gain, uint64_t seed) {
    Mlp net(shape);
    std::mt19937_64 rng = make_rng(seed, RngStream::NetInit);
    for (size_t l = 0; l < shape.layers(); ++l) {
        double fan_in = static_cast<double>(shape.layer_cols(l));
        double fan_out = static_cast<double>(shape.layer_rows(l));
        double gain = (l == shape.depth) ? head_gain : hidden_gain;
        double limit = gain * std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        size_t n = shape.layer_rows(l) * shape.layer_cols(l);
        for (size_t i = 0; i < n; ++i) net.params_[net.w_offset(l) + i] = dist(rng);
        // biases stay zero
    }
    net.quantize_f32();
    return net;
}

void Mlp::quantize_f32() {
    for (double& p : params_) p = static_cast<double>(static_cast<float>(p));
}

void Mlp::forward(std::span<const double> x, MlpWorkspace& ws) const {
    if (x.size() != shape_.in) throw std::domain_error("mlp input dimension mismatch");
    ws.input.assign(x.begin(), x.end());
    ws.hidden.resize(shape_.depth);
    const double* cur = ws.input.data();
    for (size_t l = 0; l < shape_.depth; ++l) {
        auto& h = ws.hidden[l];
        h.resize(shape_.hidden);
        kern::matvec(params_.data() + w_offset(l), cur, params_.data() + b_offset(l), h.data(),
                     shape_.layer_rows(l), shape_.layer_cols(l));
        kern::tanh_vec(h.data(), h.data(), h.size());
        cur = h.data();
    }
    size_t last = shape_.depth;
    ws.out.resize(shape_.out);
    kern::matvec(params_.data() + w_offset(last), cur, params_.data() + b_offset(last),
                 ws.out.data(), shape_.layer_rows(last), shape_.layer_cols(last));
}

void Mlp::backward(const MlpWorkspace& ws, std::span<const double> dout,
                   std::vector<double>& grad) const {
    if (grad.size() != params_.size()) grad.assign(params_.size(), 0.0);
    if (dout.size() != shape_.out) throw std::domain_error("mlp output gradient mismatch");

    size_t last = shape_.depth;
    const double* below = shape_.depth > 0 ? ws.hidden[shape_.depth - 1].data() : ws.input.data();
    kern::outer_acc(grad.data() + w_offset(last), grad.data() + b_offset(last), dout.data(),
                    below, shape_.layer_rows(last), shape_.layer_cols(last));

    std::vector<double> gh(shape_.hidden, 0.0);
    kern::matvec_t_acc(params_.data() + w_offset(last), dout.data(), gh.data(),
                       shape_.layer_rows(last), shape_.layer_cols(last));

    std::vector<double> gz(shape_.hidden);
    for (size_t l = shape_.depth; l-- > 0;) {
        kern::tanh_backward(ws.hidden[l].data(), gh.data(), gz.data(), shape_.hidden);
        const double* input = (l == 0) ? ws.input.data() : ws.hidden[l - 1].data();
        kern::outer_acc(grad.data() + w_offset(l), grad.data() + b_offset(l), gz.data(), input,
                        shape_.layer_rows(l), shape_.layer_cols(l));
        if (l > 0) {
            std::fill(gh.begin(), gh.end(), 0.0);
            kern::matvec_t_acc(params_.data() + w_offset(l), gz.data(), gh.data(),
                               shape_.layer_rows(l), shape_.layer_cols(l));
        }
    }
}

std::array<double, kNumActions> softmax(std::span<const double> logits) {
    std::array<double, kNumActions> probs{};
    double mx = logits[0];
    for (double z : logits) mx = std::max(mx, z);
    double sum = 0.0;
    for (size_t i = 0; i < kNumActions; ++i) {
        probs[i] = std::exp(logits[i] - mx);
        sum += probs[i];
    }
    for (double& p : probs) p /= sum;
    return probs;
}

double entropy(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0) h -= p * std::log(p);
    }
    return h;
}

int greedy_action(std::span<const double> probs) {
    int best = 0;
    for (size_t i = 1; i < probs.size(); ++i) {
        if (probs[i] > probs[static_cast<size_t>(best)]) best = static_cast<int>(i);
    }
    return best;
}

}  // namespace ranloop::drl
