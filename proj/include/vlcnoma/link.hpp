#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vlcnoma/math.hpp"

namespace vlcnoma {

/// Floor applied to estimated gains after error injection so downstream
/// threshold arithmetic stays positive. Applications of the floor are
/// counted and surfaced by the Monte Carlo engine.
inline constexpr double kEstimatedGainFloor = 1e-12;

/// One user's channel as seen by the link layer.
struct UserChannel {
    int user_index = 1;          // 1-based, stable identity
    double gain = 0.0;           // true channel gain
    int decoding_order = 1;      // 1 = weakest estimated gain
    double estimated_gain = 0.0; // gain available to transmitter/receiver
};

/// Stable ascending sort by estimated gain; decoding_order rewritten 1..N.
inline std::vector<UserChannel> order_users(std::vector<UserChannel> users) {
    if (users.empty()) throw std::invalid_argument("order_users: empty list");
    for (const auto& u : users)
        if (!(u.estimated_gain > 0.0))
            throw std::invalid_argument("order_users: nonpositive estimated gain");
    std::stable_sort(users.begin(), users.end(), [](const UserChannel& a, const UserChannel& b) {
        return a.estimated_gain < b.estimated_gain;
    });
    for (size_t i = 0; i < users.size(); ++i) users[i].decoding_order = static_cast<int>(i) + 1;
    return users;
}

/// Geometric power ladder over the decoding order.
struct PowerAllocation {
    double total = 0.0;            // watts
    double allocation_factor = 0.0; // ratio between consecutive users
    std::vector<double> powers;    // powers[k-1] belongs to decoding order k

    int user_count() const { return static_cast<int>(powers.size()); }
};

/// Fixed power allocation: P1 = total(1-rho)/(1-rho^N), P_i = rho P_{i-1}.
inline PowerAllocation fpa_allocate(double total, double rho, int users) {
    if (!(total > 0.0)) throw std::invalid_argument("fpa_allocate: total <= 0");
    if (!(rho > 0.0) || !(rho < 1.0)) throw std::invalid_argument("fpa_allocate: rho outside (0,1)");
    if (users < 1) throw std::invalid_argument("fpa_allocate: users < 1");
    PowerAllocation a;
    a.total = total;
    a.allocation_factor = rho;
    a.powers.resize(users);
    double p = total * (1.0 - rho) / (1.0 - std::pow(rho, users));
    for (int i = 0; i < users; ++i) {
        a.powers[i] = p;
        p *= rho;
    }
    return a;
}

/// Uniform brightness scaling of every power level.
inline PowerAllocation apply_analog_dimming(PowerAllocation alloc, double dimming_factor) {
    if (!(dimming_factor > 0.0) || dimming_factor > 1.0)
        throw std::invalid_argument("apply_analog_dimming: factor outside (0, 1]");
    alloc.total *= dimming_factor;
    for (double& p : alloc.powers) p *= dimming_factor;
    return alloc;
}

/// Power-domain superposition of one OOK bit per user.
inline double superimpose(const std::vector<int>& bits, const PowerAllocation& alloc) {
    if (static_cast<int>(bits.size()) != alloc.user_count())
        throw std::invalid_argument("superimpose: bit count != user count");
    double x = 0.0;
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) x += alloc.powers[i];
    return x;
}

/// Digital dimming codeword structure: a 10-slot codeword carrying one
/// information bit repeated over the data slots, padded with fixed filler
/// bits chosen by the brightness target.
struct DimmingConfig {
    enum class Scheme { none, analog, vook };

    Scheme scheme = Scheme::none;
    double dimming_factor = 1.0;

    static constexpr int kCodewordLength = 10;

    /// Repetition count (= data slots per codeword) for digital dimming.
    int redundancy() const {
        if (scheme != Scheme::vook) return 0;
        if (dimming_factor <= 0.0 || dimming_factor >= 1.0) return 0;
        double n = dimming_factor <= 0.5 ? 20.0 * dimming_factor : 20.0 - 20.0 * dimming_factor;
        return static_cast<int>(std::lround(n));
    }

    /// Data duty cycle of the codeword.
    double duty_cycle() const {
        if (scheme != Scheme::vook) return 1.0;
        if (dimming_factor <= 0.0) return 0.0;
        if (dimming_factor >= 1.0) return 1.0; // all-on codeword, no data
        return redundancy() / static_cast<double>(kCodewordLength);
    }

    /// Filler bit value for the off-duty slots.
    int filler_bit() const { return dimming_factor > 0.5 ? 1 : 0; }

    void validate() const {
        if (dimming_factor < 0.0 || dimming_factor > 1.0)
            throw std::invalid_argument("DimmingConfig: factor outside [0, 1]");
        if (scheme == Scheme::analog && dimming_factor == 0.0)
            throw std::invalid_argument("DimmingConfig: analog dimming with lights off");
    }
};

/// One 10-slot codeword: data slot count, slot values with data marked.
struct VookCodeword {
    int data_slots = 0;
    std::array<int, DimmingConfig::kCodewordLength> slots{}; // filler value in non-data slots
};

/// Frame a data bit stream into codewords. Data slots lead, filler follows.
inline std::vector<VookCodeword> frame_vook(const std::vector<int>& data_bits,
                                            const DimmingConfig& cfg) {
    if (cfg.scheme != DimmingConfig::Scheme::vook)
        throw std::invalid_argument("frame_vook: scheme is not vook");
    if (cfg.dimming_factor <= 0.0 || cfg.dimming_factor >= 1.0)
        throw std::invalid_argument("frame_vook: no data slots at this dimming factor");
    int n = cfg.redundancy();
    std::vector<VookCodeword> out;
    out.reserve(data_bits.size());
    for (int bit : data_bits) {
        VookCodeword cw;
        cw.data_slots = n;
        for (int s = 0; s < DimmingConfig::kCodewordLength; ++s)
            cw.slots[s] = s < n ? bit : cfg.filler_bit();
        out.push_back(cw);
    }
    return out;
}

/// Recover the data bit stream from framed codewords (one bit per codeword).
inline std::vector<int> extract_vook(const std::vector<VookCodeword>& stream) {
    std::vector<int> bits;
    bits.reserve(stream.size());
    for (const auto& cw : stream) {
        if (cw.data_slots < 1) throw std::invalid_argument("extract_vook: codeword without data");
        bits.push_back(cw.slots[0]);
    }
    return bits;
}

/// Outcome of successive interference cancellation at one receiver.
struct SicDecision {
    int bit = 0;             // decision for the receiver's own signal
    std::vector<int> trace;  // stage decisions 1..k
};

/// Threshold cascade: at stage j the receiver subtracts its running
/// reconstruction (scaled by its own gain estimate) and compares the
/// residual against half the stage power. Ties decide 1.
inline SicDecision sic_decode(double received, const UserChannel& self,
                              const PowerAllocation& alloc, double responsivity) {
    int k = self.decoding_order;
    if (k < 1 || k > alloc.user_count())
        throw std::invalid_argument("sic_decode: decoding order outside allocation");
    double hhat = self.estimated_gain;
    SicDecision d;
    d.trace.reserve(k);
    double reconstructed = 0.0;
    for (int j = 1; j <= k; ++j) {
        double residual = received - responsivity * hhat * reconstructed;
        int s = residual >= responsivity * hhat * alloc.powers[j - 1] / 2.0 ? 1 : 0;
        d.trace.push_back(s);
        if (s) reconstructed += alloc.powers[j - 1];
    }
    d.bit = d.trace.back();
    return d;
}

} // namespace vlcnoma
