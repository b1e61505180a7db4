// Walk one intercept-and-resend run against the original protocol and show
// why it breaks it: Eve reads the whole secret while Bob's copy stays clean,
// and only the decoy comparison has a chance of noticing.

#include <cstdio>

#include "qsdc/qsdc.hpp"

using namespace qsdc;

namespace {

void show_labels(const char* title, const std::vector<StateLabel>& seq) {
    std::printf("%-22s", title);
    for (StateLabel l : seq) std::printf(" %-5s", to_string(l).c_str());
    std::printf("\n");
}

}  // namespace

int main() {
    Rng rng(2025);
    YzcssInputs in;
    in.message = bits_from_string("10110");
    in.id_a = bits_from_string("01101");
    in.id_b = bits_from_string("01001");

    std::printf("message        M    = %s\n", bits_to_string(in.message).c_str());
    std::printf("sender    id   ID_A = %s\n", bits_to_string(in.id_a).c_str());
    std::printf("receiver  id   ID_B = %s\n\n", bits_to_string(in.id_b).c_str());

    RegisterPool pool;
    RngChoices choices(rng);
    const YzcssSession session = yzcss_alice_encode(in, pool, choices);
    show_labels("alice sends", session.sent_labels);

    // Eve measures every pair in a random two-qubit basis; the collapse is
    // her resend. Her decode table equals the receiver's, so her bit string
    // m is correct on every slot.
    const YzcssEveRecord eve = intercept_resend_yzcss(session.slots, pool, rng);
    show_labels("eve observes", eve.outcomes);
    show_labels("eve resends", eve.resent);
    std::printf("%-22s", "eve slot bits m");
    for (auto b : eve.m) std::printf(" %d    ", static_cast<int>(b));
    std::printf("\n\n");

    // The decoy positions follow from the receiver identity, and the decoy
    // states are announced during the security check, so Eve unpicks the
    // interleaving offline.
    const YzcssRecovered rec = eve_recover(eve.m, session.decoy_labels());
    std::printf("eve recovers   M    = %s\n", bits_to_string(rec.message).c_str());
    std::printf("eve recovers   ID_A = %s\n\n", bits_to_string(rec.id_a).c_str());

    const YzcssBobResult bob = yzcss_bob_run(session.slots, in.id_a, in.id_b,
                                             session.decoy_labels(), pool, rng, 0.05);
    std::printf("bob decodes    M'   = %s  (always equals M: the resend rule\n",
                bits_to_string(bob.decoded_message).c_str());
    std::printf("                         preserves the decode class of every pair)\n");
    std::printf("decoy errors: %d/%d -> %s\n", bob.decoy_errors, bob.decoy_count,
                bob.aborted ? "run aborted" : "run accepted");
    std::printf("\nper-decoy detection chance is 1/4; over %d decoys this run %s\n",
                bob.decoy_count, bob.aborted ? "tripped it" : "slipped through");
    return 0;
}
