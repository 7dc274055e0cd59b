#include <cstdio>

int main() {
  std::puts("pefem: cli not wired yet");
  return 1;
}
