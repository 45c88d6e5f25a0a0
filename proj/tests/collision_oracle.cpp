#include "collision_oracle.hpp"

#include <limits>
#include <map>
#include <optional>
#include <sstream>

namespace thzsim::oracle {

namespace {

struct Interval {
    SimTime start = 0, end = 0;
};

struct ArrivalObs {
    std::string pid;
    int tx = 0;
    int rx = 0;
    SimTime start = 0, end = 0;
    bool finished = false;
    bool start_unheard = false;              // receiver not listening at arr_start
    std::optional<SimTime> first_listen_off; // earliest listen_off while in flight
    std::string verdict;                     // the simulator's claim, from arr_end
};

}  // namespace

Report check(const std::vector<TraceRecord>& records) {
    Report rep;
    constexpr SimTime kOpenEnd = std::numeric_limits<SimTime>::max();

    // pass 1: transmission intervals per node; a tx still open when the run
    // ends occupies the radio until the end of time for overlap purposes.
    // Each frame uid also maps back to its transmitter.
    std::map<int, std::vector<Interval>> tx_intervals;
    std::map<std::string, int> uid_tx;
    {
        std::map<std::pair<int, std::string>, SimTime> open_tx;
        for (const TraceRecord& r : records) {
            if (r.event == "tx_start") {
                open_tx[{r.node, r.packet_id}] = r.time_ps;
                const auto hash = r.packet_id.find('#');
                if (hash != std::string::npos)
                    uid_tx[r.packet_id.substr(hash + 1)] = r.node;
            } else if (r.event == "tx_end") {
                auto it = open_tx.find({r.node, r.packet_id});
                if (it != open_tx.end()) {
                    tx_intervals[r.node].push_back({it->second, r.time_ps});
                    open_tx.erase(it);
                }
            }
        }
        for (const auto& [key, start] : open_tx) {
            tx_intervals[key.first].push_back({start, kOpenEnd});
        }
    }

    // pass 2: sequential replay for listening state and arrival intervals
    std::vector<ArrivalObs> arrivals;
    std::map<int, bool> listening;
    std::map<std::pair<int, std::string>, std::size_t> open_arr;  // -> arrivals index
    for (const TraceRecord& r : records) {
        if (r.event == "listen_on") {
            listening[r.node] = true;
        } else if (r.event == "listen_off") {
            listening[r.node] = false;
            for (auto& [key, idx] : open_arr) {
                if (key.first == r.node && !arrivals[idx].first_listen_off) {
                    arrivals[idx].first_listen_off = r.time_ps;
                }
            }
        } else if (r.event == "arr_start") {
            ArrivalObs a;
            a.pid = r.packet_id;
            const auto hash = r.packet_id.find('#');
            auto it = hash == std::string::npos
                          ? uid_tx.end()
                          : uid_tx.find(r.packet_id.substr(hash + 1));
            a.tx = it == uid_tx.end() ? -1000 - static_cast<int>(arrivals.size())
                                      : it->second;  // unknown sources stay unique
            a.rx = r.node;
            a.start = r.time_ps;
            if (!listening[r.node]) a.start_unheard = true;
            arrivals.push_back(a);
            open_arr[{r.node, r.packet_id}] = arrivals.size() - 1;
        } else if (r.event == "arr_end") {
            auto it = open_arr.find({r.node, r.packet_id});
            if (it == open_arr.end()) continue;
            ArrivalObs& a = arrivals[it->second];
            a.end = r.time_ps;
            a.finished = true;
            a.verdict = r.verdict;
            open_arr.erase(it);
        }
    }

    // pass 3: re-derive each finished verdict from intervals
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
        const ArrivalObs& a = arrivals[i];
        if (!a.finished) continue;  // still in flight when the run ended
        ++rep.arrivals_checked;

        // half-duplex abort: open-interval overlap with own transmissions
        bool busy = false;
        for (const Interval& t : tx_intervals[a.rx]) {
            if (t.start < a.end && t.end > a.start) busy = true;
        }
        // collisions: closed-interval overlap with any other arrival at rx;
        // frames from the same source transmit serially, only touch, and are
        // individually decodable, so same-source pairs never collide
        bool collided = false;
        for (std::size_t j = 0; j < arrivals.size(); ++j) {
            if (i == j || arrivals[j].rx != a.rx || arrivals[j].tx == a.tx) continue;
            const ArrivalObs& b = arrivals[j];
            const SimTime b_end = b.finished ? b.end : kOpenEnd;
            if (b_end >= a.start && b.start <= a.end) collided = true;
        }
        // listening: missed if not listening at the start, or if the radio
        // stopped listening strictly before the arrival completed
        const bool not_listening =
            a.start_unheard || (a.first_listen_off && *a.first_listen_off < a.end);

        std::string expect;
        if (busy) expect = "lost_busy";
        else if (collided) expect = "lost_collision";
        else if (not_listening) expect = "lost_not_listening";
        else expect = "delivered";

        if (expect != a.verdict) {
            ++rep.mismatches;
            std::ostringstream os;
            os << "rx " << a.rx << " pid " << a.pid << " [" << a.start << ", " << a.end
               << "]: simulator says " << a.verdict << ", oracle says " << expect;
            rep.details.push_back(os.str());
        }
    }
    return rep;
}

}  // namespace thzsim::oracle
