// Copyright 2026 The bcqzk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "bcqzk/core/errors.hpp"

namespace bcqzk {

/// Standard error of a proportion estimate, sqrt(p(1-p)/n).
inline double binomial_se(double p, std::uint64_t n) {
    if (n == 0) {
        return 1.0;
    }
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

struct ChiSquare {
    double statistic = 0;
    int dof = 0;
    double p_value = 1;
};

inline double chi_square_sf(double statistic, int dof) {
    if (dof <= 0) {
        return 1.0;
    }
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, std::max(statistic, 0.0)));
}

/// Goodness of fit of observed counts against expected probabilities.
/// Bins whose expected count is below 5 are pooled into their neighbour.
inline ChiSquare chi_square_gof(const std::vector<double> &observed, const std::vector<double> &probs) {
    if (observed.size() != probs.size() || observed.empty()) {
        throw LengthError("chi-square: bin count mismatch");
    }
    double n = 0;
    for (double o : observed) n += o;
    std::vector<double> obs, exp;
    double acc_o = 0, acc_e = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        acc_o += observed[i];
        acc_e += probs[i] * n;
        if (acc_e >= 5.0) {
            obs.push_back(acc_o);
            exp.push_back(acc_e);
            acc_o = acc_e = 0;
        }
    }
    if (acc_e > 0 || acc_o > 0) {
        if (exp.empty()) {
            obs.push_back(acc_o);
            exp.push_back(acc_e);
        } else {
            obs.back() += acc_o;
            exp.back() += acc_e;
        }
    }
    ChiSquare r;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (exp[i] > 0) {
            r.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
        } else if (obs[i] > 0) {
            r.statistic = INFINITY;
        }
    }
    r.dof = static_cast<int>(obs.size()) - 1;
    r.p_value = chi_square_sf(r.statistic, r.dof);
    return r;
}

/// Two-sample homogeneity test over a shared set of categories.
template <typename K>
ChiSquare chi_square_two_sample(const std::map<K, double> &a, const std::map<K, double> &b) {
    std::map<K, std::pair<double, double>> joint;
    double na = 0, nb = 0;
    for (auto &[k, v] : a) {
        joint[k].first += v;
        na += v;
    }
    for (auto &[k, v] : b) {
        joint[k].second += v;
        nb += v;
    }
    ChiSquare r;
    if (na == 0 || nb == 0) {
        return r;
    }
    int used = 0;
    for (auto &[k, v] : joint) {
        double tot = v.first + v.second;
        if (tot == 0) continue;
        double ea = tot * na / (na + nb);
        double eb = tot * nb / (na + nb);
        r.statistic += (v.first - ea) * (v.first - ea) / ea + (v.second - eb) * (v.second - eb) / eb;
        ++used;
    }
    r.dof = used - 1;
    r.p_value = chi_square_sf(r.statistic, r.dof);
    return r;
}

/// Total variation distance between two empirical distributions.
template <typename K>
double empirical_tv(const std::map<K, double> &a, const std::map<K, double> &b) {
    double na = 0, nb = 0;
    for (auto &kv : a) na += kv.second;
    for (auto &kv : b) nb += kv.second;
    std::map<K, std::pair<double, double>> joint;
    for (auto &[k, v] : a) joint[k].first += v / na;
    for (auto &[k, v] : b) joint[k].second += v / nb;
    double tv = 0;
    for (auto &[k, v] : joint) tv += std::fabs(v.first - v.second);
    return tv / 2;
}

/// Pooled two-proportion z statistic.
inline double two_proportion_z(double x1, double n1, double x2, double n2) {
    double p = (x1 + x2) / (n1 + n2);
    double se = std::sqrt(p * (1 - p) * (1 / n1 + 1 / n2));
    if (se == 0) return 0;
    return (x1 / n1 - x2 / n2) / se;
}

}  // namespace bcqzk
