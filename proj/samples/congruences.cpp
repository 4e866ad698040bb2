// Congruence sweep with the star set, plus the dissection identity it rests on.
#include <iostream>

#include "strange_lab/verify.hpp"

int main() {
  using namespace strange_lab;
  const StrangeSpec spec{Family::Ft, 2, 1, 0, 1};
  const CongruenceReport rep = verify_family(spec, 23, 1, 2, true);
  std::cout << spec.label() << " mod 23, j in 1.." << rep.j_range.back() << ": " << (rep.all_pass() ? "all pass" : "failures")
            << " (" << rep.verdicts.size() << " checks)\n";
  for (long n = 1; n <= 3; ++n) {
    const DissectionCheck d = check_dissection_identity(2, 7, n);
    std::cout << "p=7 n=" << n << ": (1-q)^n divides with sign " << d.sign_found() << '\n';
  }
}
