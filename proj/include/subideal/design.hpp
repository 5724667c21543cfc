#pragma once

#include <cmath>
#include <vector>

#include "subideal/complex_core.hpp"
#include "subideal/types.hpp"

namespace subideal {

// Right-half-plane decay margin: cos(q*Arg(s+beta)) > cos(q*pi/2) for Re s >= 0.
inline double decay_margin(double q) { return std::cos(q * M_PI / 2.0); }

// alpha making the gain envelope exp(-mu*|omega|^q): alpha = mu / cos(q*pi/2).
inline double matched_alpha(double mu, double q) {
    if (!(q > 0.0 && q < 1.0))
        throw std::range_error("matched_alpha: q must lie in (0, 1)");
    if (!(mu > 0.0))
        throw std::range_error("matched_alpha: mu must be positive");
    return mu / decay_margin(q);
}

// ln of the envelope exp(-alpha*cos(q*pi/2)*|omega|^q) dominating ln|H(i*omega)|.
inline double log_gain_bound(const FilterParams& p, double omega) {
    return -p.alpha * decay_margin(p.q) * std::pow(std::abs(omega), p.q);
}

inline double gain_bound(const FilterParams& p, double omega) {
    const double lg = log_gain_bound(p, omega);
    return lg < kLogTiny ? 0.0 : std::exp(lg);
}

// Fixed (beta, q), alpha decreasing toward zero: the identity-approximating family.
inline std::vector<FilterParams> make_identity_sequence(double q, double beta,
                                                        const std::vector<double>& alphas,
                                                        double q_bar = kDefaultQBar) {
    if (!(q >= q_bar && q < 1.0))
        throw std::invalid_argument("make_identity_sequence: q must lie in [q_bar, 1)");
    if (alphas.empty())
        throw std::invalid_argument("make_identity_sequence: alpha list is empty");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > 0.0))
            throw std::invalid_argument("make_identity_sequence: alphas must be positive");
        if (i > 0 && !(alphas[i] < alphas[i - 1]))
            throw std::invalid_argument("make_identity_sequence: alphas must be strictly decreasing");
    }
    std::vector<FilterParams> seq;
    seq.reserve(alphas.size());
    for (double a : alphas) seq.emplace_back(a, beta, q);
    return seq;
}

// q increasing toward one with beta = 1-q and matched alpha: the family whose
// gain envelope approaches the reference exp(-mu*|omega|).
inline std::vector<FilterParams> make_matched_sequence(double mu, const std::vector<double>& qs,
                                                       double q_bar = kDefaultQBar) {
    if (!(mu > 0.0))
        throw std::invalid_argument("make_matched_sequence: mu must be positive");
    if (qs.empty())
        throw std::invalid_argument("make_matched_sequence: q list is empty");
    for (std::size_t i = 0; i < qs.size(); ++i) {
        if (!(qs[i] > q_bar && qs[i] < 1.0))
            throw std::invalid_argument("make_matched_sequence: q values must lie in (q_bar, 1)");
        if (i > 0 && !(qs[i] > qs[i - 1]))
            throw std::invalid_argument("make_matched_sequence: q values must be strictly increasing");
    }
    std::vector<FilterParams> seq;
    seq.reserve(qs.size());
    for (double q : qs) seq.emplace_back(matched_alpha(mu, q), 1.0 - q, q);
    return seq;
}

enum class SequenceKind { identity, matched };

// Declarative description of one of the two parameter schedules above.
struct SequenceSpec {
    SequenceKind kind;
    double q = 0.0;                // identity: fixed exponent
    double beta = 0.0;             // identity: fixed shift
    std::vector<double> alphas;    // identity: decreasing scales
    double mu = 0.0;               // matched: reference decay rate
    std::vector<double> qs;        // matched: increasing exponents
    double q_bar = kDefaultQBar;

    static SequenceSpec identity(double q, double beta, std::vector<double> alphas,
                                 double q_bar = kDefaultQBar) {
        SequenceSpec s;
        s.kind = SequenceKind::identity;
        s.q = q;
        s.beta = beta;
        s.alphas = std::move(alphas);
        s.q_bar = q_bar;
        return s;
    }

    static SequenceSpec matched(double mu, std::vector<double> qs, double q_bar = kDefaultQBar) {
        SequenceSpec s;
        s.kind = SequenceKind::matched;
        s.mu = mu;
        s.qs = std::move(qs);
        s.q_bar = q_bar;
        return s;
    }

    std::vector<FilterParams> realize() const {
        return kind == SequenceKind::identity ? make_identity_sequence(q, beta, alphas, q_bar)
                                              : make_matched_sequence(mu, qs, q_bar);
    }
};

}  // namespace subideal
