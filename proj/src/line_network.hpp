#pragma once

#include <cstdint>
#include <vector>

#include "network.hpp"

namespace cutpath {

// Weighted chain on states 0..L with self-loop weights w(j,j), rung weights
// w(j,j+1), and the derived quantities r_i = 1/w(i,i+1) and
// eta_j = sum_{i>=j} r_i under truncation at L (eta_L = 0).
// The walk absorbed at L is the exact object every formula refers to.
struct LineNetwork {
    std::vector<double> loop;  // w(j,j), size L+1; may be all zero
    std::vector<double> rung;  // w(j,j+1), size L
    std::vector<double> r;     // 1/rung, size L
    std::vector<double> eta;   // size L+1, strictly decreasing, eta[L] = 0

    std::size_t length() const { return rung.size(); }

    // Validates weights and fills r and eta. loops may be empty (treated as 0).
    static LineNetwork from_weights(std::vector<double> loops, std::vector<double> rungs);

    // Chain as a Network on vertices 0..L with layer labels 0..L.
    // Self-loops included unless with_loops is false (jump chain).
    Network to_network(bool with_loops = true) const;
};

}  // namespace cutpath
