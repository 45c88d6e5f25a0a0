#ifndef THZSIM_EVENT_QUEUE_HPP
#define THZSIM_EVENT_QUEUE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <stdexcept>
#include <vector>

#include "thzsim/time.hpp"

namespace thzsim {

enum class EventKind {
    TxStart,
    TxEnd,
    ArrivalStart,
    ArrivalEnd,
    BackoffExpiry,
    WaitExpiry,
    MobilityEpoch,
    SimEnd,
};

/// Handle to a scheduled event; allows cancellation (used for early WAIT
/// termination when the expected ACK arrives before the timeout).
class EventHandle {
public:
    EventHandle() = default;
    bool valid() const { return !flag_.expired(); }

private:
    friend class EventQueue;
    explicit EventHandle(std::shared_ptr<bool> flag) : flag_(flag) {}
    std::weak_ptr<bool> flag_;
};

/// Deterministic virtual-time scheduler. Dispatch order is the strict total
/// order (fire_at, seq); seq is the insertion sequence, so simultaneous events
/// run in the order they were scheduled.
class EventQueue {
public:
    SimTime now() const { return now_; }

    EventHandle schedule(SimTime fire_at, EventKind kind, int target,
                         std::function<void()> action) {
        if (fire_at < now_) {
            throw std::logic_error("EventQueue::schedule: event in the past");
        }
        auto flag = std::make_shared<bool>(false);
        heap_.push(Entry{fire_at, next_seq_++, kind, target, std::move(action), flag});
        return EventHandle{flag};
    }

    void cancel(const EventHandle& h) {
        if (auto f = h.flag_.lock()) *f = true;
    }

    /// Dispatches every pending event with fire_at <= end, then sets the
    /// clock to end. Returns the number of dispatched (non-cancelled) events.
    std::uint64_t run_until(SimTime end) {
        std::uint64_t dispatched = 0;
        while (!heap_.empty() && heap_.top().fire_at <= end) {
            Entry e = heap_.top();
            heap_.pop();
            if (*e.cancelled) continue;
            now_ = e.fire_at;
            e.action();
            ++dispatched;
        }
        now_ = end;
        return dispatched;
    }

    bool empty() const { return heap_.empty(); }

private:
    struct Entry {
        SimTime fire_at;
        std::uint64_t seq;
        EventKind kind;
        int target;
        std::function<void()> action;
        std::shared_ptr<bool> cancelled;

        bool operator>(const Entry& o) const {
            if (fire_at != o.fire_at) return fire_at > o.fire_at;
            return seq > o.seq;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
    SimTime now_ = 0;
    std::uint64_t next_seq_ = 0;
};

}  // namespace thzsim

#endif
