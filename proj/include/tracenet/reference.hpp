#pragma once

#include "tracenet/async_system.hpp"
#include "tracenet/chain_sampler.hpp"
#include "tracenet/petri_net.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

/// The bundled worked example: a five-transition, two-marking net with its
/// published analysis values, used for golden tests and discrepancy reports.
namespace tracenet::reference {

std::string_view fig2_net_json();
/// content_hash of the bundled net.
const std::string& fig2_hash();
bool is_fig2(const PetriNet& net);

/// Published first-clique law at M0, keyed by clique label ("a", "ad", ...).
std::map<std::string, double> printed_kappa();

/// Row/column labels ("M0,a", ...) of the published transition matrix.
std::vector<std::string> printed_pair_labels();
/// Published 10x10 transition matrix in printed_pair_labels() order.
std::vector<std::vector<double>> printed_transition_matrix();
/// Published marking-level matrix (rows/columns M0, M1).
std::vector<std::vector<double>> printed_lumped_matrix();

/// The published matrix as a CliqueChain over `sys` (which must be the
/// system of the bundled net), so it can be fed to lumping_check.
CliqueChain printed_chain(const AsyncSystem& sys);

} // namespace tracenet::reference
