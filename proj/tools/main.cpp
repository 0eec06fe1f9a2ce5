#include <cstdio>
int main() { std::puts("lpib"); return 0; }
