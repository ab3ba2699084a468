#include "arbscope/events.hpp"

#include <stdexcept>

namespace arb {

const char* to_string(MevLabel label) {
    switch (label) {
        case MevLabel::none: return "none";
        case MevLabel::sandwich_front: return "sandwich_front";
        case MevLabel::sandwich_victim: return "sandwich_victim";
        case MevLabel::sandwich_back: return "sandwich_back";
        case MevLabel::cyclic_arb: return "cyclic_arb";
        case MevLabel::liquidation: return "liquidation";
    }
    return "none";
}

MevLabel mev_label_from_string(const std::string& s) {
    if (s == "none") return MevLabel::none;
    if (s == "sandwich_front") return MevLabel::sandwich_front;
    if (s == "sandwich_victim") return MevLabel::sandwich_victim;
    if (s == "sandwich_back") return MevLabel::sandwich_back;
    if (s == "cyclic_arb") return MevLabel::cyclic_arb;
    if (s == "liquidation") return MevLabel::liquidation;
    throw std::invalid_argument("unknown MEV label: " + s);
}

double tip_eth(const SwapEvent& swap) {
    return swap.priority_fee_gwei * double(swap.gas_used) * 1e-9 + swap.coinbase_transfer_eth;
}

}  // namespace arb
