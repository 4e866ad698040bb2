// Prints the first coefficients of F(1-q) and of F(-1-q).
#include <iostream>

#include "strange_lab/strange.hpp"

int main() {
  using namespace strange_lab;
  for (long N : {1L, 2L}) {
    const XiTable t = xi_series({Family::F, 1, 1, 0, N}, 12);
    std::cout << t.spec.label() << " at height " << t.height_used << ":";
    for (const auto& v : t.values) std::cout << ' ' << v.to_string();
    std::cout << '\n';
  }
}
