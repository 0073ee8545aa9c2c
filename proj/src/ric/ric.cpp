#include "ranloop/ric/ric.hpp"

#include <poll.h>

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ranloop/common/log.hpp"
#include "ranloop/drl/encoder.hpp"

namespace ranloop::ric {

using nlohmann::json;

Endpoint route(uint8_t msg_type) {
    switch (static_cast<e2::MsgType>(msg_type)) {
        case e2::MsgType::E2SetupReq: return Endpoint::E2Manager;
        case e2::MsgType::RicSubReq: return Endpoint::SubscriptionManager;
        case e2::MsgType::RicIndication: return Endpoint::XAppDispatcher;
        case e2::MsgType::RicControlAck: return Endpoint::AckSink;
        default: return Endpoint::Unroutable;
    }
}

Ric::Ric(const Options& opts) : listener_(opts.port), status_path_(opts.status_path) {}

Ric::~Ric() { stop(); }

void Ric::register_xapp(const XAppDescriptor& desc, drl::CatalogEntry model) {
    std::lock_guard lock(mu_);
    RegisteredXApp reg;
    reg.desc = desc;
    reg.slot = std::make_shared<ModelSlot>();
    reg.slot->current = std::make_shared<const drl::CatalogEntry>(std::move(model));
    xapps_[static_cast<uint8_t>(desc.slice_type)] = std::move(reg);
    status_dirty_ = true;
}

void Ric::register_xapp_factory(const XAppDescriptor& desc, XAppFactory factory) {
    std::lock_guard lock(mu_);
    RegisteredXApp reg;
    reg.desc = desc;
    reg.factory = std::move(factory);
    xapps_[static_cast<uint8_t>(desc.slice_type)] = std::move(reg);
    status_dirty_ = true;
}

void Ric::swap_model(ran::SliceType slice_type, drl::CatalogEntry model) {
    std::lock_guard lock(mu_);
    auto it = xapps_.find(static_cast<uint8_t>(slice_type));
    if (it == xapps_.end() || !it->second.slot)
        throw std::runtime_error("no model-backed xApp registered for this slice type");
    it->second.slot->current = std::make_shared<const drl::CatalogEntry>(std::move(model));
    status_dirty_ = true;
}

BsRegistryEntry* Ric::find_bs(uint32_t bs_id) {
    for (auto& e : registry_)
        if (e.bs_id == bs_id) return &e;
    return nullptr;
}

void Ric::drop_connection(size_t slot) {
    if (slot < conns_.size() && conns_[slot]) conns_[slot].reset();
    registry_.erase(std::remove_if(registry_.begin(), registry_.end(),
                                   [slot](const BsRegistryEntry& e) {
                                       return e.conn_slot == slot;
                                   }),
                    registry_.end());
    status_dirty_ = true;
}

e2::SetupRespPayload Ric::handle_setup(size_t slot, const e2::SetupReqPayload& req) {
    e2::SetupRespPayload resp;
    resp.bs_id = req.bs_id;
    if (req.slices.empty()) {
        resp.status = 1;  // a BS must expose at least one slice
        return resp;
    }
    // A reconnect supersedes the old entry; the stale connection is dropped.
    if (BsRegistryEntry* old = find_bs(req.bs_id)) {
        size_t old_slot = old->conn_slot;
        if (old_slot != slot) drop_connection(old_slot);
        registry_.erase(std::remove_if(registry_.begin(), registry_.end(),
                                       [&](const BsRegistryEntry& e) {
                                           return e.bs_id == req.bs_id;
                                       }),
                        registry_.end());
    }
    BsRegistryEntry entry;
    entry.bs_id = req.bs_id;
    entry.conn_slot = slot;
    entry.slices = req.slices;
    entry.connected_seq = ++connect_seq_;
    registry_.push_back(std::move(entry));
    ++counters_.setups;
    status_dirty_ = true;
    resp.status = 0;
    return resp;
}

e2::SubRespPayload Ric::handle_subscription(size_t slot, const e2::SubReqPayload& req) {
    e2::SubRespPayload resp;
    BsRegistryEntry* bs = find_bs(req.bs_id);
    if (!bs || bs->conn_slot != slot) {
        resp.status = 1;  // unknown BS
        return resp;
    }
    if (req.report_period_ms < e2::kMinReportPeriodMs ||
        req.report_period_ms > e2::kMaxReportPeriodMs) {
        resp.status = 2;  // outside the near-RT window
        return resp;
    }
    Subscription sub;
    sub.subscription_id = next_subscription_id_++;
    sub.slice_id = req.slice_id;
    sub.period_ms = req.report_period_ms;
    bs->subscriptions.push_back(sub);
    ++counters_.subscriptions;
    status_dirty_ = true;
    resp.status = 0;
    resp.subscription_id = sub.subscription_id;
    return resp;
}

void Ric::enqueue_indication(const e2::IndicationPayload& p) {
    ++counters_.indications;
    BsRegistryEntry* bs = find_bs(p.bs_id);
    const Subscription* sub = nullptr;
    if (bs) {
        for (const auto& s : bs->subscriptions) {
            if (s.slice_id == p.slice_id && s.subscription_id == p.subscription_id) {
                sub = &s;
                break;
            }
        }
    }
    if (!sub) {
        ++counters_.dropped_unroutable;
        RANLOOP_LOG_DEBUG("dropping indication for unsubscribed bs %u slice %u", p.bs_id,
                          unsigned(p.slice_id));
        return;
    }
    InstanceKey key{p.bs_id, p.slice_id};
    auto [it, inserted] = mailboxes_.try_emplace(key, p);
    if (!inserted) {
        it->second = p;  // newest wins; the stale report is dropped
        ++counters_.dropped_stale;
    }
}

Ric::Instance* Ric::find_or_create_instance(const InstanceKey& key) {
    auto it = instances_.find(key);
    if (it != instances_.end()) return &it->second;

    BsRegistryEntry* bs = find_bs(key.bs_id);
    if (!bs) return nullptr;
    const e2::SetupSlice* slice = nullptr;
    for (const auto& s : bs->slices) {
        if (s.slice_id == key.slice_id) {
            slice = &s;
            break;
        }
    }
    if (!slice) return nullptr;
    auto reg_it = xapps_.find(slice->slice_type);
    if (reg_it == xapps_.end()) return nullptr;
    RegisteredXApp& reg = reg_it->second;

    Instance inst;
    inst.xapp_id = reg.desc.xapp_id;
    if (reg.factory) {
        inst.app = reg.factory(key.bs_id, key.slice_id);
    } else {
        auto slot = reg.slot;
        inst.app = std::make_unique<DrlXApp>(
            std::static_pointer_cast<const void>(slot),
            [slot]() { return slot->current; });
    }
    auto [ins, ok] = instances_.emplace(key, std::move(inst));
    return &ins->second;
}

void Ric::dispatch_indication(const InstanceKey& key, const e2::IndicationPayload& report) {
    Instance* inst = find_or_create_instance(key);
    if (!inst) {
        ++counters_.dropped_unroutable;
        return;
    }
    uint8_t decision;
    try {
        decision = inst->app->decide(report);
    } catch (const std::exception& e) {
        ++counters_.xapp_failures;
        RANLOOP_LOG_WARN("xApp failure for bs %u slice %u: %s", key.bs_id, key.slice_id,
                         e.what());
        return;
    }
    ++inst->decisions;
    inst->last_policy = decision;
    status_dirty_ = true;

    // Delta-only control: stay silent when the policy in force already
    // matches.
    if (decision == report.sched_policy) return;

    BsRegistryEntry* bs = find_bs(key.bs_id);
    if (!bs || bs->conn_slot >= conns_.size() || !conns_[bs->conn_slot]) return;
    e2::ControlPayload ctrl;
    ctrl.bs_id = key.bs_id;
    ctrl.slice_id = static_cast<uint8_t>(key.slice_id);
    ctrl.sched_policy = decision;
    ctrl.timestamp_ms = report.timestamp_ms;  // the window that triggered the change
    conns_[bs->conn_slot]->send_frame(e2::frame_control(ctrl));
    ++counters_.controls_sent;
}

void Ric::dispatch_mailboxes() {
    // Per-(bs, slice) serialization: one decide per pump cycle, newest
    // report only.
    auto pending = std::move(mailboxes_);
    mailboxes_.clear();
    for (const auto& [key, report] : pending) dispatch_indication(key, report);
}

void Ric::handle_frame(size_t slot, const e2::Frame& frame) {
    switch (route(frame.msg_type)) {
        case Endpoint::E2Manager: {
            e2::SetupRespPayload resp;
            try {
                resp = handle_setup(slot, e2::decode_setup_req(frame.payload));
            } catch (const e2::DecodeError&) {
                resp.status = 1;  // malformed payload; connection kept
            }
            if (conns_[slot]) conns_[slot]->send_frame(e2::frame_setup_resp(resp));
            break;
        }
        case Endpoint::SubscriptionManager: {
            e2::SubRespPayload resp;
            try {
                resp = handle_subscription(slot, e2::decode_sub_req(frame.payload));
            } catch (const e2::DecodeError&) {
                resp.status = 1;
            }
            if (conns_[slot]) conns_[slot]->send_frame(e2::frame_sub_resp(resp));
            break;
        }
        case Endpoint::XAppDispatcher: {
            try {
                enqueue_indication(e2::decode_indication(frame.payload));
            } catch (const e2::DecodeError& e) {
                ++counters_.dropped_unroutable;
                RANLOOP_LOG_WARN("bad indication payload: %s", e.what());
            }
            break;
        }
        case Endpoint::AckSink: {
            try {
                auto ack = e2::decode_control_ack(frame.payload);
                if (ack.status == 0)
                    ++counters_.control_acks;
                else
                    ++counters_.control_nacks;
            } catch (const e2::DecodeError&) {
                ++counters_.dropped_unroutable;
            }
            break;
        }
        case Endpoint::Unroutable:
            // Unknown or outbound-only type: skip the frame, stream framing
            // is already preserved by the declared length.
            ++counters_.dropped_unroutable;
            break;
    }
}

bool Ric::pump_once() {
    bool progress = false;

    while (auto conn = listener_.accept_conn()) {
        conns_.push_back(std::make_unique<e2::Connection>(std::move(*conn)));
        progress = true;
    }

    for (size_t slot = 0; slot < conns_.size(); ++slot) {
        if (!conns_[slot]) continue;
        std::vector<e2::Frame> frames;
        bool alive = true;
        try {
            alive = conns_[slot]->poll_frames(frames);
        } catch (const e2::ProtocolError& e) {
            RANLOOP_LOG_WARN("protocol error, dropping connection: %s", e.what());
            drop_connection(slot);
            progress = true;
            continue;
        }
        for (const auto& f : frames) {
            handle_frame(slot, f);
            progress = true;
        }
        if (!alive) {
            drop_connection(slot);
            progress = true;
        }
    }

    if (!mailboxes_.empty()) {
        dispatch_mailboxes();
        progress = true;
    }
    return progress;
}

void Ric::pump() {
    std::lock_guard lock(mu_);
    while (pump_once()) {
    }
    if (status_dirty_) write_status();
}

void Ric::start() {
    if (running_.exchange(true)) return;
    loop_ = std::thread([this] {
        while (running_.load()) {
            {
                std::lock_guard lock(mu_);
                while (pump_once()) {
                }
                if (status_dirty_) write_status();
            }
            // Block until something is readable instead of spinning.
            std::vector<struct pollfd> fds;
            fds.push_back({listener_.fd(), POLLIN, 0});
            {
                std::lock_guard lock(mu_);
                for (const auto& c : conns_)
                    if (c && c->open()) fds.push_back({c->fd(), POLLIN, 0});
            }
            ::poll(fds.data(), fds.size(), 20);
        }
    });
}

void Ric::stop() {
    if (!running_.exchange(false)) return;
    if (loop_.joinable()) loop_.join();
}

RicCounters Ric::counters() const {
    std::lock_guard lock(mu_);
    return counters_;
}

size_t Ric::xapp_instance_count() const {
    std::lock_guard lock(mu_);
    return instances_.size();
}

std::vector<BsRegistryEntry> Ric::registry_snapshot() const {
    std::lock_guard lock(mu_);
    return registry_;
}

void Ric::write_status() {
    status_dirty_ = false;
    if (status_path_.empty()) return;
    json bss = json::array();
    for (const auto& e : registry_) {
        json subs = json::array();
        for (const auto& s : e.subscriptions)
            subs.push_back({{"subscription_id", s.subscription_id},
                            {"slice_id", s.slice_id},
                            {"period_ms", s.period_ms}});
        json slices = json::array();
        for (const auto& s : e.slices)
            slices.push_back({{"slice_id", s.slice_id}, {"slice_type", s.slice_type}});
        bss.push_back({{"bs_id", e.bs_id}, {"slices", slices}, {"subscriptions", subs}});
    }
    json decisions = json::array();
    for (const auto& [key, inst] : instances_) {
        json d = {{"bs_id", key.bs_id},
                  {"slice_id", key.slice_id},
                  {"xapp_id", inst.xapp_id},
                  {"decisions", inst.decisions}};
        if (inst.last_policy)
            d["last_policy"] = ran::to_string(static_cast<ran::SchedulingPolicy>(*inst.last_policy));
        decisions.push_back(d);
    }
    json status = {
        {"bss", bss},
        {"last_decisions", decisions},
        {"counters",
         {{"setups", counters_.setups},
          {"subscriptions", counters_.subscriptions},
          {"indications", counters_.indications},
          {"controls_sent", counters_.controls_sent},
          {"control_acks", counters_.control_acks},
          {"control_nacks", counters_.control_nacks},
          {"dropped_unroutable", counters_.dropped_unroutable},
          {"dropped_stale", counters_.dropped_stale},
          {"xapp_failures", counters_.xapp_failures}}},
    };
    std::ofstream out(status_path_);
    if (out) out << status.dump(2) << '\n';
}

drl::CatalogEntry load_model_from_catalog(const std::filesystem::path& catalog_dir,
                                          const std::string& entry_id) {
    return drl::load_model(catalog_dir / (entry_id + ".json"));
}

DrlXApp::DrlXApp(std::shared_ptr<const void> slot_handle,
                 std::function<std::shared_ptr<const drl::CatalogEntry>()> model_source)
    : slot_handle_(std::move(slot_handle)), model_source_(std::move(model_source)) {}

uint8_t DrlXApp::decide(const e2::IndicationPayload& report) {
    auto model = model_source_();
    if (!model) throw std::runtime_error("model not loaded");

    history_.push_back(report);
    while (history_.size() > drl::kEncoderHistory) history_.pop_front();

    std::vector<e2::IndicationPayload> window(history_.begin(), history_.end());
    auto state = drl::encode_state(model->encoder, window, report.slice_prbs,
                                   model->encoder.n_prbs);
    auto probs = model->nets.policy_probs(state);
    return static_cast<uint8_t>(drl::greedy_action(probs));
}

}  // namespace ranloop::ric
