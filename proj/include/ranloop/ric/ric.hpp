#pragma once

#include <atomic>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ranloop/drl/catalog.hpp"
#include "ranloop/e2/messages.hpp"
#include "ranloop/e2/transport.hpp"
#include "ranloop/ran/types.hpp"

namespace ranloop::ric {

// One xApp decision step: the report comes in, a scheduling policy comes
// out. Implementations may throw; the dispatcher logs and keeps the loop
// alive.
class XApp {
  public:
    virtual ~XApp() = default;
    virtual uint8_t decide(const e2::IndicationPayload& report) = 0;
};

struct XAppDescriptor {
    std::string xapp_id;
    ran::SliceType slice_type = ran::SliceType::EMBB;
    std::string model_ref;      // catalog entry id
    uint32_t period_ms = 500;   // decision period
};

struct Subscription {
    uint32_t subscription_id = 0;
    uint32_t slice_id = 0;
    uint32_t period_ms = 0;
};

struct BsRegistryEntry {
    uint32_t bs_id = 0;
    size_t conn_slot = 0;
    std::vector<e2::SetupSlice> slices;
    std::vector<Subscription> subscriptions;
    uint64_t connected_seq = 0;  // monotone connection sequence number
};

// Message-type routing, RMR style. Inbound types map to internal endpoints;
// indications resolve further per (bs, slice) subscription.
enum class Endpoint { E2Manager, SubscriptionManager, XAppDispatcher, AckSink, Unroutable };

Endpoint route(uint8_t msg_type);

struct RicCounters {
    uint64_t setups = 0;
    uint64_t subscriptions = 0;
    uint64_t indications = 0;
    uint64_t controls_sent = 0;
    uint64_t control_acks = 0;
    uint64_t control_nacks = 0;
    uint64_t dropped_unroutable = 0;
    uint64_t dropped_stale = 0;
    uint64_t xapp_failures = 0;
};

// Near-real-time RIC: E2 listener, BS registry, router and xApp host.
// Single event-loop ownership: either drive it cooperatively with pump()
// (deterministic mode) or via start()/stop() for a background thread.
class Ric {
  public:
    struct Options {
        uint16_t port = 0;  // 0 = ephemeral on loopback
        std::string status_path;  // optional JSON status file
    };

    explicit Ric(const Options& opts);
    ~Ric();

    uint16_t port() const { return listener_.port(); }

    // Binds a DRL model to a slice type. The entry has already passed the
    // catalog integrity check in load_model().
    void register_xapp(const XAppDescriptor& desc, drl::CatalogEntry model);

    // Test/extension hook: custom per-(bs, slice) xApp instances.
    using XAppFactory = std::function<std::unique_ptr<XApp>(uint32_t bs_id, uint32_t slice_id)>;
    void register_xapp_factory(const XAppDescriptor& desc, XAppFactory factory);

    // Replaces the model for a slice type; existing instances pick it up at
    // their next decision.
    void swap_model(ran::SliceType slice_type, drl::CatalogEntry model);

    // Cooperative event pump: accepts, reads, dispatches and replies until
    // no further progress can be made without new bytes.
    void pump();

    // Background event loop (threaded mode).
    void start();
    void stop();

    RicCounters counters() const;
    size_t xapp_instance_count() const;
    std::vector<BsRegistryEntry> registry_snapshot() const;

  private:
    struct ModelSlot {
        std::shared_ptr<const drl::CatalogEntry> current;
    };

    struct RegisteredXApp {
        XAppDescriptor desc;
        std::shared_ptr<ModelSlot> slot;  // null for factory-backed xApps
        XAppFactory factory;
    };

    struct InstanceKey {
        uint32_t bs_id;
        uint32_t slice_id;
        bool operator<(const InstanceKey& o) const {
            return bs_id != o.bs_id ? bs_id < o.bs_id : slice_id < o.slice_id;
        }
    };

    struct Instance {
        std::unique_ptr<XApp> app;
        std::string xapp_id;
        uint64_t decisions = 0;
        std::optional<uint8_t> last_policy;
    };

    bool pump_once();
    void handle_frame(size_t slot, const e2::Frame& frame);
    e2::SetupRespPayload handle_setup(size_t slot, const e2::SetupReqPayload& req);
    e2::SubRespPayload handle_subscription(size_t slot, const e2::SubReqPayload& req);
    void enqueue_indication(const e2::IndicationPayload& p);
    void dispatch_mailboxes();
    void dispatch_indication(const InstanceKey& key, const e2::IndicationPayload& report);
    Instance* find_or_create_instance(const InstanceKey& key);
    BsRegistryEntry* find_bs(uint32_t bs_id);
    void drop_connection(size_t slot);
    void write_status();

    e2::Listener listener_;
    std::string status_path_;
    std::vector<std::unique_ptr<e2::Connection>> conns_;
    std::vector<BsRegistryEntry> registry_;
    std::map<uint8_t, RegisteredXApp> xapps_;  // keyed by slice type wire code
    std::map<InstanceKey, Instance> instances_;
    std::map<InstanceKey, e2::IndicationPayload> mailboxes_;  // newest wins
    RicCounters counters_;
    uint32_t next_subscription_id_ = 1;
    uint64_t connect_seq_ = 0;
    bool status_dirty_ = false;

    mutable std::mutex mu_;
    std::thread loop_;
    std::atomic<bool> running_{false};
};

// Loads and integrity-checks a catalog entry by id from a directory.
drl::CatalogEntry load_model_from_catalog(const std::filesystem::path& catalog_dir,
                                          const std::string& entry_id);

// Greedy-inference DRL xApp: keeps the last T windows per instance, encodes
// the state and picks argmax of the policy head.
class DrlXApp : public XApp {
  public:
    DrlXApp(std::shared_ptr<const void> slot_handle,
            std::function<std::shared_ptr<const drl::CatalogEntry>()> model_source);
    uint8_t decide(const e2::IndicationPayload& report) override;

  private:
    std::shared_ptr<const void> slot_handle_;  // keeps the slot alive
    std::function<std::shared_ptr<const drl::CatalogEntry>()> model_source_;
    std::deque<e2::IndicationPayload> history_;
};

}  // namespace ranloop::ric
