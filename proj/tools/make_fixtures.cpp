// Writes the small fixture inputs used by the documentation examples:
// f4.csv, the function 2 * 1_[0,1/2) on four leaves (Luxemburg L^2 norm
// sqrt(2)), and w4.csv, a fixed strictly positive weight.
#include <iostream>
#include <string>

#include "dmlab/grid.hpp"

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : ".";
  dmlab::DyadicGrid g(2);
  dmlab::write_function_csv(dmlab::SampledFunction(g, {2.0, 2.0, 0.0, 0.0}), dir + "/f4.csv");
  dmlab::write_function_csv(dmlab::SampledFunction(g, {0.5, 1.0, 2.0, 4.0}), dir + "/w4.csv");
  std::cout << "wrote f4.csv and w4.csv to " << dir << "\n";
  return 0;
}
