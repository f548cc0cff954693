// Walks through one conversion end to end: probability, ladder, protocol,
// simulated outcome. Also shows the two-copy effect on the standard pair.

#include <cmath>
#include <iomanip>
#include <iostream>

#include "cohere/cohere.hpp"

int main() {
  using namespace cohere;
  std::cout << std::setprecision(6) << std::fixed;

  const PureState psi = PureState::from_probabilities({0.8, 0.1, 0.1});
  const PureState phi = PureState::from_probabilities({0.4, 0.3, 0.3});
  std::cout << "P(psi -> phi) = " << conversion_probability(psi, phi) << '\n';

  const ConversionLadder ladder = build_ladder(psi, phi);
  for (std::size_t j = 0; j < ladder.ratios().size(); ++j) {
    std::cout << "  block " << j + 1 << ": l = " << ladder.breakpoints()[j] << ", r = " << ladder.ratios()[j]
              << '\n';
  }

  const Protocol protocol = optimal_protocol(psi, phi);
  std::cout << "protocol stages:";
  for (const auto& s : protocol.stages) std::cout << ' ' << s.size() << "-outcome";
  std::cout << '\n';

  const ProtocolReport rep = verify_protocol(protocol, psi, phi);
  for (std::size_t n = 0; n < rep.branches.size(); ++n) {
    std::cout << "  " << rep.branches[n].label << ": p = " << rep.branches[n].probability
              << ", fidelity to phi = " << rep.fidelities[n] << '\n';
  }

  // One copy of an equal superposition over two levels cannot reach the
  // three-level one; two copies can, with certainty.
  const double h = 1.0 / std::sqrt(2.0);
  const PureState two{h, h, 0.0};
  const PureState three = PureState::maximally_coherent(3);
  std::cout << "one copy:   " << conversion_probability(two, three) << '\n';
  std::cout << "two copies: " << source_copies_probability(two, 2, three) << '\n';

  const auto shannon = builtin::shannon();
  std::cout << "relative entropy of coherence: " << coherence_pure(shannon, two) << " -> "
            << coherence_pure(shannon, tensor_power(two, 2)) << " (two copies)\n";
}
