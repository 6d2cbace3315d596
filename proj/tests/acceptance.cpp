// Acceptance suite: one numbered criterion per invocation (or all when no
// argument is given). Prints one pass/fail line per criterion.
#include <cstdio>
#include <cstdlib>

int run_criterion(int id);

int main(int argc, char** argv) {
  if (argc > 1) return run_criterion(std::atoi(argv[1]));
  int rc = 0;
  for (int id = 1; id <= 12; ++id) rc |= run_criterion(id);
  return rc;
}

int run_criterion(int id) {
  std::printf("criterion %d: placeholder\n", id);
  return 0;
}
