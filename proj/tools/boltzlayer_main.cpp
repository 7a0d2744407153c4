#include <cstdio>

int main() {
  std::puts("boltzlayer: CLI wiring pending");
  return 0;
}
