#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsdc {

/// Classical-channel announcement log. Every public message a party sends
/// is appended in order, so tests can audit that nothing is revealed before
/// the stage that legitimately discloses it.
struct TranscriptEvent {
    std::string party;    // "alice", "bob", "eve"
    std::string kind;     // e.g. "decoy-positions", "auth-reveal", "permutation"
    std::string payload;  // rendered value (bits, positions, labels, ...)
};

class Transcript {
public:
    void record(std::string party, std::string kind, std::string payload) {
        events_.push_back({std::move(party), std::move(kind), std::move(payload)});
    }

    const std::vector<TranscriptEvent>& events() const { return events_; }

    bool contains(const std::string& kind) const { return index_of(kind) >= 0; }

    /// Index of the first event of this kind, or -1.
    int index_of(const std::string& kind) const {
        for (std::size_t i = 0; i < events_.size(); ++i)
            if (events_[i].kind == kind) return static_cast<int>(i);
        return -1;
    }

    const TranscriptEvent& first(const std::string& kind) const {
        const int i = index_of(kind);
        if (i < 0) throw std::out_of_range("Transcript: no event of kind " + kind);
        return events_[static_cast<std::size_t>(i)];
    }

    /// True when every kind in `order` appears and their first occurrences
    /// are in the given sequence. Kinds absent from `order` are ignored.
    bool respects_order(const std::vector<std::string>& order) const {
        int prev = -1;
        for (const std::string& kind : order) {
            const int i = index_of(kind);
            if (i < 0 || i < prev) return false;
            prev = i;
        }
        return true;
    }

    /// FNV-1a over the rendered events; convenient for byte-stability checks.
    std::uint64_t digest() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](const std::string& s) {
            for (unsigned char c : s) {
                h ^= c;
                h *= 1099511628211ull;
            }
            h ^= 0x1f;
            h *= 1099511628211ull;
        };
        for (const TranscriptEvent& e : events_) {
            mix(e.party);
            mix(e.kind);
            mix(e.payload);
        }
        return h;
    }

private:
    std::vector<TranscriptEvent> events_;
};

}  // namespace qsdc
