#ifndef THZSIM_TRACE_HPP
#define THZSIM_TRACE_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "thzsim/time.hpp"

namespace thzsim {

/// One event-trace record. packet_id carries "<D|A>:<origin>:<seq>#<tx_uid>"
/// for frame events and is empty for radio-state events.
struct TraceRecord {
    SimTime time_ps = 0;
    int node = 0;
    std::string event;      // tx_start, tx_end, arr_start, arr_end, listen_on, listen_off
    std::string packet_id;
    std::string verdict;    // arr_end only: delivered|lost_collision|lost_busy|lost_not_listening
};

class TraceLog {
public:
    void record(SimTime t, int node, std::string event, std::string packet_id = "",
                std::string verdict = "") {
        records_.push_back({t, node, std::move(event), std::move(packet_id),
                            std::move(verdict)});
    }

    const std::vector<TraceRecord>& records() const { return records_; }

    void write_csv(std::ostream& os) const {
        os << "time_ps,node,event,packet_id,verdict\n";
        for (const TraceRecord& r : records_) {
            os << r.time_ps << ',' << r.node << ',' << r.event << ','
               << r.packet_id << ',' << r.verdict << '\n';
        }
    }

    void write_csv_file(const std::string& path) const {
        std::ofstream f(path);
        write_csv(f);
    }

private:
    std::vector<TraceRecord> records_;
};

}  // namespace thzsim

#endif
